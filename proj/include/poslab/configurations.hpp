#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "poslab/positivity.hpp"

namespace poslab {

template <class T>
bool is_positive_triple(const Flag<T>& a, const Flag<T>& b, const Flag<T>& c);

template <class T>
bool is_positive_quadruple(const Flag<T>& a, const Flag<T>& x, const Flag<T>& b, const Flag<T>& y);

template <class T>
struct Configuration {
  std::vector<Flag<T>> points;  // cyclic order
  /// (i, j) -> diamond with extremities (points[i], points[j]) containing the
  /// points strictly between i and j going forward cyclically.
  std::map<std::pair<std::size_t, std::size_t>, Diamond<T>> certified_diamonds;
};

/// Memoizes transversality and certificates over the index set of a fixed
/// list of flags; all tuple tests go through it.
template <class T>
class PositivityOracle {
 public:
  explicit PositivityOracle(const std::vector<Flag<T>>& points);

  bool transverse(std::size_t i, std::size_t j);
  /// Certificate of point k over extremities (i, j), in that order.
  const std::optional<Certificate<T>>& certificate(std::size_t i, std::size_t j, std::size_t k);
  bool triple(std::size_t i, std::size_t j, std::size_t k);
  /// (i, x, j, y) in this cyclic order.
  bool quadruple(std::size_t i, std::size_t x, std::size_t j, std::size_t y);

  const std::vector<Flag<T>>& points() const { return points_; }

 private:
  std::vector<Flag<T>> points_;
  std::map<std::pair<std::size_t, std::size_t>, bool> transverse_;
  std::map<std::array<std::size_t, 3>, std::optional<Certificate<T>>> certs_;
};

/// Every index-ordered subtriple and subquadruple; fills certified_diamonds on success.
template <class T>
bool is_positive_configuration(Configuration<T>& cfg);

template <class T>
bool is_positive_configuration(const std::vector<Flag<T>>& points);

struct DihedralReport {
  std::array<bool, 8> dihedral{};       // images under the dihedral group of the square
  bool dihedral_agree = false;
  std::size_t other_positive = 0;       // among the remaining 16 orderings
  std::vector<std::array<int, 4>> other_positive_orders;
};

template <class T>
DihedralReport dihedral_invariance_report(const std::array<Flag<T>, 4>& quad);

/// Number of orderings (out of 6) under which the triple is positive.
template <class T>
std::size_t triple_permutation_count(const Flag<T>& a, const Flag<T>& b, const Flag<T>& c);

/// Cyclically ordered positive quadruple: (a, c, d, b) with a, b the
/// standard/antistandard flags moved by a random g, c = psi(p).b and d sampled in
/// the opposite of the diamond over (c, b) containing a.
template <class T>
std::array<Flag<T>, 4> random_positive_quadruple(std::size_t n, Rng& rng, bool move = true);

template <class T>
std::array<Flag<T>, 3> random_positive_triple(std::size_t n, Rng& rng, bool move = true);

/// alpha, beta, gamma sampled from the diamonds over (b,c), (a,c), (a,b) that do
/// NOT contain the remaining point; asserts (alpha, beta, gamma) positive.
template <class T>
bool necklace_check(const Flag<T>& a, const Flag<T>& b, const Flag<T>& c, Rng& rng, std::size_t trials);

struct ExclusionReport {
  std::size_t trials = 0;
  std::size_t triple_failures = 0;     // (a,b,c,d) positive but (a,c,b,d) positive too
  std::size_t quadruple_failures = 0;  // all three cyclic quadruples positive
  std::array<std::size_t, 4> positive_count_histogram{};
  bool pass() const { return triple_failures == 0 && quadruple_failures == 0; }
};

template <class T>
ExclusionReport exclusion_suite(std::size_t n, Rng& rng, std::size_t trials);

/// Parameters drawn log-normally, but each coordinate spikes to 1e-6 or 1e6 with
/// probability 1/5 each.
template <class T>
LusztigParams<T> extreme_params(std::size_t n, Rng& rng);

template <class T>
bool inclusion_check(const Flag<T>& a, const Flag<T>& b, const Flag<T>& c, const Flag<T>& d, Rng& rng,
                     std::size_t trials);

/// Inserts a sample of V^{x2}(x_i, x_{i+1}) between positions i and i+1, where x2
/// is any other point of the configuration.
template <class T>
std::vector<Flag<T>> insert_between(const std::vector<Flag<T>>& points, std::size_t i, Rng& rng);

/// Line spanned by (x, y) in P^1 as a flag of R^2.
template <class T>
Flag<T> projective_point(const T& x, const T& y);

}  // namespace poslab
