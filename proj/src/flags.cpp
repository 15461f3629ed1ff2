#include "poslab/flags.hpp"

#include <algorithm>
#include <cmath>

namespace poslab {

MatrixD orthonormal_basis(const MatrixD& m) {
  const std::size_t n = m.rows();
  const std::size_t k = m.cols();
  MatrixD q = m;
  for (std::size_t j = 0; j < k; ++j) {
    // two passes of modified Gram-Schmidt keep orthogonality at machine precision
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < j; ++i) {
        double dot = 0.0;
        for (std::size_t r = 0; r < n; ++r) dot += q(r, i) * q(r, j);
        for (std::size_t r = 0; r < n; ++r) q(r, j) -= dot * q(r, i);
      }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += q(r, j) * q(r, j);
    norm = std::sqrt(norm);
    require(norm > 1e-14, ErrorCode::InvalidArgument, "flag basis is rank deficient");
    for (std::size_t r = 0; r < n; ++r) q(r, j) /= norm;
  }
  return q;
}

template <class T>
Matrix<T> canonical_basis(Matrix<T> m) {
  require(m.rows() == m.cols() && m.rows() >= 1, ErrorCode::InvalidArgument, "flag basis must be square");
  if constexpr (!Field<T>::exact) {
    return orthonormal_basis(m);
  } else {
    const std::size_t n = m.rows();
    std::vector<std::size_t> pivots;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < k; ++j) {
        const Rational f = m(pivots[j], k);
        if (sgn(f) == 0) continue;
        for (std::size_t r = 0; r < n; ++r) m(r, k) -= f * m(r, j);
      }
      std::size_t p = n;
      for (std::size_t r = 0; r < n; ++r)
        if (sgn(m(r, k)) != 0) {
          p = r;
          break;
        }
      require(p != n, ErrorCode::InvalidArgument, "flag basis is rank deficient");
      const Rational s = m(p, k);
      for (std::size_t r = 0; r < n; ++r) m(r, k) /= s;
      pivots.push_back(p);
    }
    return m;
  }
}

template <class T>
Flag<T> make_flag(const Matrix<T>& basis) {
  return Flag<T>{canonical_basis(basis)};
}

template <class T>
Flag<T> standard_flag(std::size_t n) {
  require(n >= 2, ErrorCode::InvalidArgument, "dimension must be at least 2");
  return Flag<T>{Matrix<T>::identity(n)};
}

template <class T>
Flag<T> antistandard_flag(std::size_t n) {
  require(n >= 2, ErrorCode::InvalidArgument, "dimension must be at least 2");
  Matrix<T> m(n, n);
  for (std::size_t j = 0; j < n; ++j) m(n - 1 - j, j) = T(1);
  return Flag<T>{m};
}

template <class T>
Matrix<T> longest_element_matrix(std::size_t n) {
  Matrix<T> m(n, n);
  for (std::size_t j = 0; j < n; ++j) m(n - 1 - j, j) = T(1);
  if (Field<T>::sign(determinant(m)) < 0) m(n - 1, 0) = T(-1);
  return m;
}

template <class T>
bool flags_equal(const Flag<T>& a, const Flag<T>& b) {
  if (a.n() != b.n()) return false;
  if constexpr (Field<T>::exact) {
    return a.basis == b.basis;
  } else {
    return flag_distance(a, b) <= 1e-9;
  }
}

template <class T>
bool is_transverse(const Flag<T>& a, const Flag<T>& b) {
  require(a.n() == b.n(), ErrorCode::InvalidArgument, "dimension mismatch");
  const std::size_t n = a.n();
  for (std::size_t i = 1; i < n; ++i) {
    Matrix<T> m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < i; ++c) m(r, c) = a.basis(r, c);
      for (std::size_t c = 0; c < n - i; ++c) m(r, i + c) = b.basis(r, c);
    }
    if (Field<T>::sign(determinant(m)) == 0) return false;
  }
  return true;
}

template <class T>
Flag<T> act(const Matrix<T>& g, const Flag<T>& x) {
  require(g.rows() == x.n() && g.cols() == x.n(), ErrorCode::InvalidArgument, "dimension mismatch");
  return make_flag(g * x.basis);
}

std::vector<SignClass> sign_classes(std::size_t n) {
  std::vector<SignClass> out;
  const std::size_t m = n - 1;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    SignClass sc{std::vector<int>(m, 1)};
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t{1} << i)) sc.eps[i] = -1;
    out.push_back(std::move(sc));
  }
  return out;
}

SignClass trivial_sign_class(std::size_t n) { return SignClass{std::vector<int>(n - 1, 1)}; }

template <class T>
TransversePairFrame<T> normalize_pair(const Flag<T>& a, const Flag<T>& b, const SignClass& sc) {
  const std::size_t n = a.n();
  require(b.n() == n && sc.eps.size() == n - 1, ErrorCode::InvalidArgument, "dimension mismatch");
  if (!is_transverse(a, b)) fail(ErrorCode::NotTransverse, "normalize_pair on non-transverse flags");
  // column i of h spans V_i(a) ∩ V_{n-i+1}(b); coefficient of a_i normalized to 1
  Matrix<T> h(n, n);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t kb = n - i + 1;
    Matrix<T> m(n, i + kb);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < i; ++c) m(r, c) = a.basis(r, c);
      for (std::size_t c = 0; c < kb; ++c) m(r, i + c) = T(-b.basis(r, c));
    }
    const std::vector<T> ker = kernel_vector(m);
    const T lead = ker[i - 1];
    if (Field<T>::sign(lead) == 0) fail(ErrorCode::NotTransverse, "degenerate intersection");
    for (std::size_t r = 0; r < n; ++r) {
      T v(0);
      for (std::size_t c = 0; c < i; ++c) v += a.basis(r, c) * ker[c];
      h(r, i - 1) = v / lead;
    }
  }
  const T det_h = determinant(h);
  int prod = 1;
  for (int e : sc.eps) prod *= e;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c + 1 < n; ++c)
      if (sc.eps[c] < 0) h(r, c) = -h(r, c);
    h(r, n - 1) = T(prod) * h(r, n - 1) / det_h;
  }
  return TransversePairFrame<T>{a, b, inverse(h), sc};
}

template <class T>
Matrix<T> unipotent_coordinate(const Matrix<T>& g, const Flag<T>& c) {
  const std::size_t n = c.n();
  const Matrix<T> m = g * c.basis;
  Matrix<T> u(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<T> v(n);
    for (std::size_t r = 0; r < n; ++r) v[r] = m(r, k);
    // clear rows n-1 .. n-k using the columns already built
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t row = n - 1 - j;
      const T f = v[row];
      if (Field<T>::is_zero(f)) continue;
      for (std::size_t r = 0; r <= row; ++r) v[r] -= f * u(r, row);
    }
    const std::size_t piv = n - 1 - k;
    if constexpr (Field<T>::exact) {
      if (sgn(v[piv]) == 0) fail(ErrorCode::NotTransverse, "flag not transverse to the frame's first flag");
    } else {
      Field<T>::sign(v[piv]);
    }
    const T p = v[piv];
    for (std::size_t r = 0; r < piv; ++r) u(r, piv) = v[r] / p;
    u(piv, piv) = T(1);
  }
  return u;
}

double flag_distance(const FlagD& a, const FlagD& b) {
  require(a.n() == b.n(), ErrorCode::InvalidArgument, "dimension mismatch");
  const std::size_t n = a.n();
  const MatrixD qa = orthonormal_basis(a.basis);
  const MatrixD qb = orthonormal_basis(b.basis);
  MatrixD pa(n, n), pb(n, n);
  double best = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t s = 0; s < n; ++s) {
        pa(r, s) += qa(r, k) * qa(s, k);
        pb(r, s) += qb(r, k) * qb(s, k);
      }
    best = std::max(best, frobenius_norm(pa - pb) / std::sqrt(2.0));
  }
  return best;
}

FlagD to_double(const FlagQ& f) { return make_flag(to_double(f.basis)); }

FlagQ to_rational(const FlagD& f) { return make_flag(to_rational(f.basis)); }

FlagQ rationalize(const FlagD& f, int bits) {
  const std::size_t n = f.n();
  MatrixQ m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = dyadic_round(f.basis(r, c), bits);
  return make_flag(m);
}

template <class T>
bool is_sl(const Matrix<T>& g) {
  if (g.rows() != g.cols()) return false;
  const T d = determinant(g);
  if constexpr (Field<T>::exact) {
    return d == 1;
  } else {
    return std::fabs(d - 1.0) <= 1e-8;
  }
}

#define POSLAB_INSTANTIATE(T)                                                               \
  template Matrix<T> canonical_basis<T>(Matrix<T>);                                         \
  template Flag<T> make_flag<T>(const Matrix<T>&);                                          \
  template Flag<T> standard_flag<T>(std::size_t);                                           \
  template Flag<T> antistandard_flag<T>(std::size_t);                                       \
  template Matrix<T> longest_element_matrix<T>(std::size_t);                                \
  template bool flags_equal<T>(const Flag<T>&, const Flag<T>&);                             \
  template bool is_transverse<T>(const Flag<T>&, const Flag<T>&);                           \
  template Flag<T> act<T>(const Matrix<T>&, const Flag<T>&);                                \
  template TransversePairFrame<T> normalize_pair<T>(const Flag<T>&, const Flag<T>&, const SignClass&); \
  template Matrix<T> unipotent_coordinate<T>(const Matrix<T>&, const Flag<T>&);             \
  template bool is_sl<T>(const Matrix<T>&);

POSLAB_INSTANTIATE(Rational)
POSLAB_INSTANTIATE(double)
#undef POSLAB_INSTANTIATE

}  // namespace poslab
