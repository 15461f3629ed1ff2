#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "poslab/numeric.hpp"

namespace poslab {

/// Permutation of {0..n-1} in one-line notation: perm[j] = w(j).
using Perm = std::vector<int>;

struct CellLabel {
  Perm perm;
  int length = 0;
  friend bool operator==(const CellLabel& a, const CellLabel& b) { return a.perm == b.perm; }
};

Perm identity_perm(std::size_t n);
Perm longest_perm(std::size_t n);
Perm compose(const Perm& a, const Perm& b);  // (a∘b)(j) = a(b(j))
Perm inverse_perm(const Perm& p);
int inversions(const Perm& p);
CellLabel make_label(const Perm& p);

/// s_i swaps i and i+1 (0-based letter i).
Perm simple_reflection(std::size_t n, int i);
Perm from_word(std::size_t n, const std::vector<int>& word);
/// A reduced word, letters 0-based, obtained by bubble sort.
std::vector<int> reduced_word(const Perm& p);

std::vector<Perm> all_permutations(std::size_t n);
std::vector<Perm> involutions(std::size_t n);

/// Has a 1 at (w(j), j).
template <class T>
Matrix<T> permutation_matrix(const Perm& w);

/// r(i,j) = rank of the lower-left block rows i..n-1, cols 0..j.
std::vector<std::vector<int>> rank_matrix(const Perm& w);

CellLabel bruhat_cell(const MatrixQ& g);
/// Float matrices are refused: cells are a rank (exact) notion.
CellLabel bruhat_cell(const MatrixD& g);

bool bruhat_leq(const CellLabel& u, const CellLabel& w);
bool bruhat_leq(const Perm& u, const Perm& w);

struct InvolutionReport {
  std::size_t n = 0;
  std::size_t checked = 0;  // involutions other than w0
  std::size_t failures = 0;
  std::vector<Perm> failing;
  bool pass() const { return failures == 0; }
};

InvolutionReport check_involution_lemma(std::size_t n);

struct TransversalityReport {
  std::optional<MatrixQ> witness;
  std::optional<std::vector<int>> witness_word;  // signed 1-based generator indices
  std::optional<CellLabel> dominating_cell;
  std::size_t samples_checked = 0;
};

TransversalityReport transversality_scan(const std::vector<MatrixQ>& generators, int depth);

}  // namespace poslab
