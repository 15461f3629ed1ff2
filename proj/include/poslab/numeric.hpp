#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "poslab/errors.hpp"

namespace poslab {

using Rational = mpq_class;

/// Absolute threshold below which a float sign decision is refused.
inline constexpr double kDefaultSignTolerance = 1e-9;

double sign_tolerance();
void set_sign_tolerance(double tol);

enum class Mode { Exact, Float };

template <class T>
struct Field;

template <>
struct Field<Rational> {
  static constexpr bool exact = true;
  static constexpr Mode mode = Mode::Exact;
  static int sign(const Rational& x) { return sgn(x); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational from_double(double x) { return Rational(x); }
  static Rational abs(const Rational& x) { return ::abs(x); }
};

template <>
struct Field<double> {
  static constexpr bool exact = false;
  static constexpr Mode mode = Mode::Float;
  /// Throws FloatAmbiguous when |x| is within the sign tolerance.
  static int sign(double x) {
    if (std::fabs(x) <= sign_tolerance() || std::isnan(x))
      fail(ErrorCode::FloatAmbiguous, "value " + std::to_string(x) + " within sign tolerance");
    return x > 0 ? 1 : -1;
  }
  static bool is_zero(double x) { return std::fabs(x) <= 1e-300; }
  static double to_double(double x) { return x; }
  static double from_double(double x) { return x; }
  static double abs(double x) { return std::fabs(x); }
};

/// Small dense row-major matrix. Sizes in this project never exceed 20.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) fail(ErrorCode::InvalidArgument, "ragged matrix literal");
      for (const auto& v : row) data_.push_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix diagonal(const std::vector<T>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix columns(const std::vector<std::size_t>& idx) const {
    Matrix out(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) out(i, k) = (*this)(i, idx[k]);
    return out;
  }

  Matrix submatrix(const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) const {
    Matrix out(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t k = 0; k < c.size(); ++k) out(i, k) = (*this)(r[i], c[k]);
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorCode::InvalidArgument, "matrix product dimension mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (Field<T>::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend Matrix operator*(const T& s, Matrix a) {
    for (auto& v : a.data_) v *= s;
    return a;
  }

  const std::vector<T>& data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using MatrixQ = Matrix<Rational>;
using MatrixD = Matrix<double>;

template <class T>
T determinant(Matrix<T> m);

template <class T>
Matrix<T> inverse(const Matrix<T>& m);

/// Exact rank for rationals; for doubles a relative pivot threshold is used.
template <class T>
std::size_t rank(Matrix<T> m);

/// Generator of the kernel of an n x (n+1) matrix by signed maximal minors.
/// Zero vector means the matrix is rank-deficient.
template <class T>
std::vector<T> kernel_vector(const Matrix<T>& m);

template <class T>
T minor(const Matrix<T>& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols);

template <class T>
Matrix<T> commutator(const Matrix<T>& a, const Matrix<T>& b) {
  return a * b - b * a;
}

MatrixD to_double(const MatrixQ& m);
/// Exact conversion: every finite double is a dyadic rational.
MatrixQ to_rational(const MatrixD& m);

/// Rounds to a nearby rational with denominator 2^bits (keeps coefficient growth small).
Rational dyadic_round(double x, int bits = 20);
/// Best rational approximation with denominator at most max_den (continued fractions).
Rational rational_approx(double x, long max_den = 1000);

Rational parse_rational(const std::string& s);
std::string format_rational(const Rational& q);

double frobenius_norm(const MatrixD& m);

/// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k);

}  // namespace poslab
