#include "poslab/numeric.hpp"

#include <atomic>
#include <cmath>
#include <limits>

namespace poslab {

namespace {
std::atomic<double> g_sign_tolerance{kDefaultSignTolerance};
}

double sign_tolerance() { return g_sign_tolerance.load(std::memory_order_relaxed); }

void set_sign_tolerance(double tol) {
  require(tol > 0 && std::isfinite(tol), ErrorCode::ConfigInvalid, "sign tolerance must be positive");
  g_sign_tolerance.store(tol, std::memory_order_relaxed);
}

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::FloatAmbiguous: return "FloatAmbiguous";
    case ErrorCode::NotTransverse: return "NotTransverse";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::NotInOpenSemigroup: return "NotInOpenSemigroup";
    case ErrorCode::FloatModeUnsupported: return "FloatModeUnsupported";
    case ErrorCode::EmptyGeneratorSet: return "EmptyGeneratorSet";
    case ErrorCode::NotInDiamond: return "NotInDiamond";
    case ErrorCode::DegenerateSlackSet: return "DegenerateSlackSet";
    case ErrorCode::NestingNotCertified: return "NestingNotCertified";
    case ErrorCode::NotCauchyAtDepth: return "NotCauchyAtDepth";
    case ErrorCode::PingPongViolated: return "PingPongViolated";
    case ErrorCode::PositivityFailed: return "PositivityFailed";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

template <class T>
T determinant(Matrix<T> m) {
  require(m.rows() == m.cols(), ErrorCode::InvalidArgument, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  T det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    if constexpr (Field<T>::exact) {
      for (std::size_t r = c; r < n; ++r)
        if (!Field<T>::is_zero(m(r, c))) {
          piv = r;
          break;
        }
    } else {
      double best = 0.0;
      for (std::size_t r = c; r < n; ++r)
        if (std::fabs(m(r, c)) > best) {
          best = std::fabs(m(r, c));
          piv = r;
        }
    }
    if (piv == n) return T(0);
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
      det = -det;
    }
    const T p = m(c, c);
    det *= p;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (Field<T>::is_zero(m(r, c))) continue;
      const T f = m(r, c) / p;
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  require(a.rows() == a.cols(), ErrorCode::InvalidArgument, "inverse of non-square matrix");
  const std::size_t n = a.rows();
  Matrix<T> m = a;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    if constexpr (Field<T>::exact) {
      for (std::size_t r = c; r < n; ++r)
        if (!Field<T>::is_zero(m(r, c))) {
          piv = r;
          break;
        }
    } else {
      double best = 0.0;
      for (std::size_t r = c; r < n; ++r)
        if (std::fabs(m(r, c)) > best) {
          best = std::fabs(m(r, c));
          piv = r;
        }
    }
    require(piv != n, ErrorCode::InvalidArgument, "matrix is singular");
    if (piv != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(c, j), m(piv, j));
        std::swap(inv(c, j), inv(piv, j));
      }
    const T p = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= p;
      inv(c, j) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || Field<T>::is_zero(m(r, c))) continue;
      const T f = m(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

template <class T>
std::size_t rank(Matrix<T> m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  double scale = 0.0;
  if constexpr (!Field<T>::exact)
    for (double v : m.data()) scale = std::max(scale, std::fabs(v));
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    if constexpr (Field<T>::exact) {
      for (std::size_t i = r; i < rows; ++i)
        if (!Field<T>::is_zero(m(i, c))) {
          piv = i;
          break;
        }
    } else {
      double best = 1e-12 * std::max(scale, 1.0);
      for (std::size_t i = r; i < rows; ++i)
        if (std::fabs(m(i, c)) > best) {
          best = std::fabs(m(i, c));
          piv = i;
        }
    }
    if (piv == rows) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(m(r, j), m(piv, j));
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (Field<T>::is_zero(m(i, c))) continue;
      const T f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < cols; ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

template <class T>
std::vector<T> kernel_vector(const Matrix<T>& m) {
  const std::size_t n = m.rows();
  require(m.cols() == n + 1, ErrorCode::InvalidArgument, "kernel_vector expects n x (n+1)");
  std::vector<T> out(n + 1, T(0));
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j <= n; ++j)
      if (j != k) cols.push_back(j);
    T d = determinant(m.submatrix(rows, cols));
    out[k] = (k % 2 == 0) ? d : T(-d);
  }
  return out;
}

template <class T>
T minor(const Matrix<T>& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  return determinant(m.submatrix(rows, cols));
}

template Rational determinant<Rational>(MatrixQ);
template double determinant<double>(MatrixD);
template MatrixQ inverse<Rational>(const MatrixQ&);
template MatrixD inverse<double>(const MatrixD&);
template std::size_t rank<Rational>(MatrixQ);
template std::size_t rank<double>(MatrixD);
template std::vector<Rational> kernel_vector<Rational>(const MatrixQ&);
template std::vector<double> kernel_vector<double>(const MatrixD&);
template Rational minor<Rational>(const MatrixQ&, const std::vector<std::size_t>&,
                                  const std::vector<std::size_t>&);
template double minor<double>(const MatrixD&, const std::vector<std::size_t>&, const std::vector<std::size_t>&);

MatrixD to_double(const MatrixQ& m) {
  MatrixD out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

MatrixQ to_rational(const MatrixD& m) {
  MatrixQ out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      require(std::isfinite(m(i, j)), ErrorCode::InvalidArgument, "non-finite entry");
      out(i, j) = Rational(m(i, j));
    }
  return out;
}

Rational dyadic_round(double x, int bits) {
  require(std::isfinite(x), ErrorCode::InvalidArgument, "non-finite value");
  const double scaled = std::nearbyint(std::ldexp(x, bits));
  mpz_class num(scaled);
  mpz_class den(1);
  den <<= bits;
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational rational_approx(double x, long max_den) {
  require(std::isfinite(x), ErrorCode::InvalidArgument, "non-finite value");
  // Continued-fraction convergents, stopping before the denominator bound.
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(r);
    if (std::fabs(a) > 1e15) break;
    const long ai = static_cast<long>(a);
    const long h2 = ai * h1 + h0;
    const long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  Rational q(h1, k1);
  q.canonicalize();
  return q;
}

Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) fail(ErrorCode::InvalidArgument, "cannot parse rational '" + s + "'");
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

double frobenius_norm(const MatrixD& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace poslab
