#include "poslab/circles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace poslab {

template <class T>
Sl2Triple<T> principal_sl2(std::size_t n) {
  require(n >= 2, ErrorCode::InvalidArgument, "dimension must be at least 2");
  Sl2Triple<T> s{Matrix<T>(n, n), Matrix<T>(n, n), Matrix<T>(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    s.h(i, i) = T(static_cast<long>(n) - 1 - 2 * static_cast<long>(i));
    if (i + 1 < n) {
      s.f(i + 1, i) = T(1);
      s.e(i, i + 1) = T(static_cast<long>((i + 1) * (n - 1 - i)));
    }
  }
  return s;
}

template <class T>
Matrix<T> exp_nilpotent(const Matrix<T>& m) {
  const std::size_t n = m.rows();
  Matrix<T> out = Matrix<T>::identity(n);
  Matrix<T> term = Matrix<T>::identity(n);
  for (std::size_t k = 1; k < n; ++k) {
    term = T(1) / T(static_cast<long>(k)) * (term * m);
    out = out + term;
  }
  return out;
}

template <class T>
Matrix<T> sym_power(const Matrix<T>& g, std::size_t n) {
  require(g.rows() == 2 && g.cols() == 2, ErrorCode::InvalidArgument, "sym_power expects a 2x2 matrix");
  require(n >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  const std::size_t d = n - 1;
  // basis w_i = c_i u1^{d-i} u2^i with c_i = d!/(d-i)!, so f has unit subdiagonal
  std::vector<T> c(n);
  c[0] = T(1);
  for (std::size_t i = 1; i < n; ++i) c[i] = c[i - 1] * T(static_cast<long>(d - i + 1));
  Matrix<T> out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    // coefficients in z = u2/u1 of (a + c z)^{d-j} (b + d z)^j
    std::vector<T> poly{T(1)};
    auto mul = [&](const T& p0, const T& p1) {
      std::vector<T> next(poly.size() + 1, T(0));
      for (std::size_t k = 0; k < poly.size(); ++k) {
        next[k] += poly[k] * p0;
        next[k + 1] += poly[k] * p1;
      }
      poly = std::move(next);
    };
    for (std::size_t k = 0; k < d - j; ++k) mul(g(0, 0), g(1, 0));
    for (std::size_t k = 0; k < j; ++k) mul(g(0, 1), g(1, 1));
    for (std::size_t i = 0; i < n; ++i) out(i, j) = c[j] / c[i] * poly[i];
  }
  return out;
}

template <class T>
bool same_point(const CirclePoint<T>& p, const CirclePoint<T>& q) {
  if constexpr (Field<T>::exact) {
    return p.x * q.y == p.y * q.x;
  } else {
    const double scale = std::hypot(p.x, p.y) * std::hypot(q.x, q.y);
    return std::fabs(p.x * q.y - p.y * q.x) <= 1e-12 * scale;
  }
}

template <class T>
CirclePoint<T> apply(const Matrix<T>& g, const CirclePoint<T>& p) {
  return CirclePoint<T>{g(0, 0) * p.x + g(0, 1) * p.y, g(1, 0) * p.x + g(1, 1) * p.y};
}

template <class T>
Matrix<T> lift(const CirclePoint<T>& p) {
  Matrix<T> g(2, 2);
  if constexpr (Field<T>::exact) {
    require(sgn(p.x) != 0 || sgn(p.y) != 0, ErrorCode::InvalidArgument, "zero vector is not a point");
  }
  const bool use_x = Field<T>::exact ? !Field<T>::is_zero(p.x) : (std::fabs(Field<T>::to_double(p.x)) >=
                                                                  std::fabs(Field<T>::to_double(p.y)));
  if (use_x) {
    g(0, 0) = p.x;
    g(1, 0) = p.y;
    g(1, 1) = T(1) / p.x;
  } else {
    g(0, 0) = p.x;
    g(1, 0) = p.y;
    g(0, 1) = T(-1) / p.y;
  }
  return g;
}

template <class T>
Flag<T> circle_map(const CirclePoint<T>& p, std::size_t n) {
  return make_flag(sym_power(lift(p), n));
}

CirclePoint<Rational> turn_point(const Rational& theta) {
  require(theta >= 0 && theta < 1, ErrorCode::InvalidArgument, "turn must lie in [0, 1)");
  return CirclePoint<Rational>{Rational(1) - 2 * theta, 2 * theta * (Rational(1) - theta)};
}

CirclePoint<double> turn_point(double theta) {
  require(theta >= 0 && theta < 1, ErrorCode::InvalidArgument, "turn must lie in [0, 1)");
  return CirclePoint<double>{1.0 - 2.0 * theta, 2.0 * theta * (1.0 - theta)};
}

template <class T>
Flag<T> PositiveCircle<T>::at(const CirclePoint<T>& p) const {
  return make_flag(base * sym_power(lift(p), n));
}

template <class T>
PositiveCircle<T> circle_through(const Flag<T>& a, const Flag<T>& b, const std::vector<T>& torus_param) {
  const std::size_t n = a.n();
  require(torus_param.size() == n - 1, ErrorCode::InvalidArgument, "torus parameter needs n-1 entries");
  const auto frame = normalize_pair(a, b, trivial_sign_class(n));
  std::vector<T> d = torus_param;
  T prod(1);
  for (const T& v : torus_param) {
    if (Field<T>::sign(v) <= 0) fail(ErrorCode::NonPositiveParameter, "torus parameters must be positive");
    prod *= v;
  }
  d.push_back(T(1) / prod);
  return PositiveCircle<T>{inverse(frame.g) * Matrix<T>::diagonal(d), n};
}

namespace {

MatrixD start_basis(std::size_t n) {
  // Vandermonde on 1..n: first column all ones, full rank
  MatrixD s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = std::pow(static_cast<double>(i + 1) / n, static_cast<double>(j));
  return orthonormal_basis(s);
}

}  // namespace

FlagD attracting_flag(const MatrixD& m, double tol, int max_iter, int* iterations) {
  const std::size_t n = m.rows();
  MatrixD q = start_basis(n);
  int it = 0;
  auto iterate = [&] {
    for (int k = 0; k < max_iter; ++k, ++it) {
      MatrixD next = orthonormal_basis(m * q);
      const double d = flag_distance(FlagD{next}, FlagD{q});
      q = std::move(next);
      if (d < tol) break;
    }
  };
  iterate();
  // A rational start can lie exactly on a repelling invariant flag; restarting
  // from a fixed generic perturbation leaves it, and returns to an attracting one.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) += 1e-3 * std::sin(7.0 * i + 3.0 * j + 1.0);
  q = orthonormal_basis(q);
  iterate();
  // a few more sweeps push the residual to rounding level
  for (int k = 0; k < 3; ++k) q = orthonormal_basis(m * q);
  if (iterations) *iterations = it;
  return FlagD{q};
}

ProximalityReport proximality_report(const MatrixQ& c, const Rational& lambda, std::size_t n) {
  ProximalityReport rep;
  const Rational absl = abs(lambda);
  rep.hyperbolic = sgn(lambda) != 0 && absl != 1;
  if (!rep.hyperbolic) return rep;
  const Rational dc = determinant(c);
  require(sgn(dc) != 0, ErrorCode::InvalidArgument, "eigenbasis must be invertible");
  MatrixQ cs = c;
  cs(0, 1) /= dc;
  cs(1, 1) /= dc;
  const MatrixQ diag = MatrixQ::diagonal({lambda, Rational(1) / lambda});
  const MatrixQ g = cs * diag * inverse(cs);
  const MatrixQ S = sym_power(cs, n);
  const MatrixQ D = sym_power(diag, n);
  const bool rep_ok = sym_power(g, n) == S * D * inverse(S);
  std::vector<Rational> mod;
  for (std::size_t i = 0; i < n; ++i) mod.push_back(abs(D(i, i)));
  const bool expanding = absl > 1;
  if (!expanding) std::reverse(mod.begin(), mod.end());
  rep.simple_gaps = rep_ok;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(mod[i] > mod[i + 1])) rep.simple_gaps = false;
  for (const auto& m : mod) rep.moduli.push_back(m.get_d());
  const FlagQ attracting = expanding ? act(S, standard_flag<Rational>(n)) : act(S, antistandard_flag<Rational>(n));
  const CirclePoint<Rational> p = expanding ? CirclePoint<Rational>{c(0, 0), c(1, 0)}
                                            : CirclePoint<Rational>{c(0, 1), c(1, 1)};
  rep.flag_matches = flags_equal(attracting, circle_map(p, n));
  return rep;
}

ProximalityReport proximality_report(const MatrixD& g, std::size_t n) {
  ProximalityReport rep;
  const double tr = g(0, 0) + g(1, 1);
  const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  require(std::fabs(det - 1.0) <= 1e-8, ErrorCode::InvalidArgument, "expected an SL(2) matrix");
  rep.hyperbolic = std::fabs(tr) > 2.0 + 1e-12;
  if (!rep.hyperbolic) return rep;
  const double disc = std::sqrt(tr * tr - 4.0);
  const double mu = tr > 0 ? (tr + disc) / 2.0 : (tr - disc) / 2.0;  // |mu| > 1
  // eigenvector for mu, choosing the better conditioned formula
  CirclePoint<double> p{g(0, 1), mu - g(0, 0)};
  if (std::hypot(p.x, p.y) < std::hypot(mu - g(1, 1), g(1, 0))) p = CirclePoint<double>{mu - g(1, 1), g(1, 0)};
  for (std::size_t i = 0; i < n; ++i)
    rep.moduli.push_back(std::pow(std::fabs(mu), static_cast<double>(n) - 1.0 - 2.0 * static_cast<double>(i)));
  rep.simple_gaps = true;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(rep.moduli[i] > rep.moduli[i + 1])) rep.simple_gaps = false;
  const FlagD f = attracting_flag(sym_power(g, n));
  rep.distance = flag_distance(f, circle_map(p, n));
  rep.flag_matches = rep.distance < 1e-8;
  return rep;
}

template <class T>
std::size_t diagonal_centralizer_rank(const std::vector<Matrix<T>>& mats) {
  require(!mats.empty(), ErrorCode::InvalidArgument, "no matrices");
  const std::size_t n = mats.front().rows();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // d_i m_ij = m_ij d_j forces d_i = d_j wherever m_ij != 0
  for (const auto& m : mats)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && !Field<T>::is_zero(m(i, j))) parent[find(i)] = find(j);
  std::size_t comps = 0;
  for (std::size_t i = 0; i < n; ++i) comps += find(i) == i;
  return comps;
}

#define POSLAB_INSTANTIATE(T)                                                                   \
  template Sl2Triple<T> principal_sl2<T>(std::size_t);                                          \
  template Matrix<T> exp_nilpotent<T>(const Matrix<T>&);                                        \
  template Matrix<T> sym_power<T>(const Matrix<T>&, std::size_t);                               \
  template bool same_point<T>(const CirclePoint<T>&, const CirclePoint<T>&);                    \
  template CirclePoint<T> apply<T>(const Matrix<T>&, const CirclePoint<T>&);                    \
  template Matrix<T> lift<T>(const CirclePoint<T>&);                                            \
  template Flag<T> circle_map<T>(const CirclePoint<T>&, std::size_t);                           \
  template struct PositiveCircle<T>;                                                            \
  template PositiveCircle<T> circle_through<T>(const Flag<T>&, const Flag<T>&, const std::vector<T>&); \
  template std::size_t diagonal_centralizer_rank<T>(const std::vector<Matrix<T>>&);

POSLAB_INSTANTIATE(Rational)
POSLAB_INSTANTIATE(double)
#undef POSLAB_INSTANTIATE

}  // namespace poslab
