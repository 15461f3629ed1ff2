#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "poslab/flags.hpp"
#include "poslab/sampling.hpp"

namespace poslab {

/// Reduced word letters are 1-based: letter i is the root slot (i, i+1).
using Word = std::vector<int>;

/// (1, 2,1, 3,2,1, ...), a reduced word for the longest element.
Word default_reduced_word(std::size_t n);
bool is_reduced_word_for_w0(std::size_t n, const Word& word);

template <class T>
struct LusztigParams {
  Word word;
  std::vector<T> t;
};

/// I + t E_{i,i+1} (letter i, 1-based).
template <class T>
Matrix<T> elementary(std::size_t n, int letter, const T& t);

/// Product of the elementary factors along the word. Requires t_k > 0.
template <class T>
Matrix<T> psi(const LusztigParams<T>& p);
/// Same product with t_k >= 0 allowed (closure of the semigroup).
template <class T>
Matrix<T> psi_closed(const LusztigParams<T>& p);

template <class T>
LusztigParams<T> random_params(std::size_t n, Rng& rng, const Word& word = {});

/// Minor index pairs (I, J) with i_l <= j_l, I != J, sizes 1..n-1. Cached per n.
struct MinorIndex {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};
const std::vector<MinorIndex>& positivity_minors(std::size_t n);

template <class T>
bool is_upper_unipotent(const Matrix<T>& u);

/// Smallest tested minor; N membership is exactly "this is positive".
template <class T>
T min_positivity_minor(const Matrix<T>& u);

template <class T>
bool in_positive_semigroup(const Matrix<T>& u);

template <class T>
LusztigParams<T> factorize(const Matrix<T>& u, const Word& word = {});

enum class Side { Plus, Minus };

const char* side_name(Side s);

template <class T>
struct Certificate {
  SignClass sign_class;
  Side side = Side::Plus;
  T min_minor{};  // smallest positivity minor of the normalized coordinate
  friend bool operator==(const Certificate& a, const Certificate& b) {
    return a.sign_class == b.sign_class && a.side == b.side;
  }
};

/// Full n-vector of diagonal signs for a class (last entry = product of the rest).
std::vector<int> full_signs(const SignClass& sc);

/// Canonical label of the diamond {(class, side)}; several labels describe the
/// same set because the alternating sign matrix conjugates N^{-1} onto N.
SignClass canonical_class(std::vector<int> eps, Side& side);

/// Certificate of the diamond opposite to the one labelled by `c`.
template <class T>
Certificate<T> opposite_certificate(const Certificate<T>& c);

template <class T>
std::optional<Certificate<T>> component_certificate(const Flag<T>& a, const Flag<T>& b, const Flag<T>& c);

template <class T>
struct Diamond {
  Flag<T> a;
  Flag<T> b;
  Flag<T> witness;
  Certificate<T> cert;
};

/// Throws NotInDiamond when the witness is in no diamond over (a, b).
template <class T>
Diamond<T> make_diamond(const Flag<T>& a, const Flag<T>& b, const Flag<T>& witness);

template <class T>
bool diamond_contains(const Diamond<T>& d, const Flag<T>& x);

template <class T>
Diamond<T> opposite(const Diamond<T>& d);

/// psi(params) (or its inverse on the Minus side) placed in the diamond's frame.
template <class T>
Flag<T> diamond_point(const Diamond<T>& d, const LusztigParams<T>& p);

template <class T>
Flag<T> sample_diamond(const Diamond<T>& d, Rng& rng);

template <class T>
bool nesting_check(const Flag<T>& a, const Flag<T>& b, const Flag<T>& c, std::size_t samples, Rng& rng);

}  // namespace poslab
