#pragma once

#include <cstddef>
#include <vector>

#include "poslab/numeric.hpp"

namespace poslab {

/// A complete flag in R^n: the i-th subspace is spanned by the first i columns
/// of `basis`. Stored in canonical column-echelon form.
template <class T>
struct Flag {
  Matrix<T> basis;

  std::size_t n() const { return basis.rows(); }
  Mode mode() const { return Field<T>::mode; }
};

using FlagQ = Flag<Rational>;
using FlagD = Flag<double>;

/// Exact mode: column echelon form, pivot = topmost surviving entry scaled to
/// 1 with earlier pivot rows cleared. Float mode: orthonormal columns.
template <class T>
Matrix<T> canonical_basis(Matrix<T> m);

template <class T>
Flag<T> make_flag(const Matrix<T>& basis);

template <class T>
Flag<T> standard_flag(std::size_t n);
template <class T>
Flag<T> antistandard_flag(std::size_t n);

/// Antidiagonal permutation matrix with signs fixed so det = 1.
template <class T>
Matrix<T> longest_element_matrix(std::size_t n);

template <class T>
bool flags_equal(const Flag<T>& a, const Flag<T>& b);

template <class T>
bool is_transverse(const Flag<T>& a, const Flag<T>& b);

template <class T>
Flag<T> act(const Matrix<T>& g, const Flag<T>& x);

struct SignClass {
  std::vector<int> eps;  // n-1 signs; the last diagonal sign is their product
  friend bool operator==(const SignClass&, const SignClass&) = default;
};

/// All 2^{n-1} classes, trivial first, then by binary index (bit i flips eps[i]).
std::vector<SignClass> sign_classes(std::size_t n);
SignClass trivial_sign_class(std::size_t n);

template <class T>
struct TransversePairFrame {
  Flag<T> a;
  Flag<T> b;
  Matrix<T> g;  // g.a = standard, g.b = antistandard, det g = 1
  SignClass sign_class;
};

template <class T>
TransversePairFrame<T> normalize_pair(const Flag<T>& a, const Flag<T>& b, const SignClass& sc);

/// Upper unipotent u with g.c = u.antistandard. Throws NotTransverse when g.c
/// is not transverse to the standard flag.
template <class T>
Matrix<T> unipotent_coordinate(const Matrix<T>& g, const Flag<T>& c);

/// max_k ||P_k(a) - P_k(b)||_F / sqrt(2) over the orthogonal projectors of the
/// k-th subspaces. Zero iff the flags agree; never exceeds sqrt(n/2).
double flag_distance(const FlagD& a, const FlagD& b);

/// Columns orthonormalized (Gram-Schmidt), flag preserved.
MatrixD orthonormal_basis(const MatrixD& m);

FlagD to_double(const FlagQ& f);
/// Exact conversion of every entry; the resulting flag is the same flag up to
/// rounding of the canonical form.
FlagQ to_rational(const FlagD& f);
/// Rationalized approximant with dyadic entries of the given precision.
FlagQ rationalize(const FlagD& f, int bits = 40);

template <class T>
bool is_sl(const Matrix<T>& g);

}  // namespace poslab
