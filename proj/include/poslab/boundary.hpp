#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poslab/circles.hpp"
#include "poslab/configurations.hpp"

namespace poslab {

/// Finite sample of a map from the circle (angles in turns, [0, 1)) to flags.
template <class T>
struct CyclicSample {
  struct Entry {
    Rational angle;
    Flag<T> flag;
    std::string label;
  };
  std::vector<Entry> entries;  // sorted by angle

  void sort();
  std::vector<Flag<T>> flags() const;
};

/// Turn of the projective point [x : y]: inverse of turn_point, so [1:0] -> 0,
/// [0:1] -> 1/2, and the turn grows as the affine coordinate x/y decreases.
double turn_of(double x, double y);

/// Circle sample at the given turns (Veronese flags).
template <class T>
CyclicSample<T> circle_sample(std::size_t n, const std::vector<Rational>& turns);

struct PositiveMapResult {
  bool positive = true;
  bool exhaustive = true;
  std::size_t triples_checked = 0;
  std::size_t quadruples_checked = 0;
  std::size_t exact_rechecks = 0;   // float decisions re-done in exact arithmetic
  std::vector<std::size_t> witness;  // first failing tuple (sample indices)
};

/// All index-ordered triples and quadruples for at most `exhaustive_cap`
/// entries, otherwise `samples` random quadruples (with their triples). Float
/// decisions that fail or are ambiguous are re-checked exactly on the exact
/// rational values of the float entries.
template <class T>
PositiveMapResult positive_map_check(const CyclicSample<T>& s, std::uint64_t seed = 1, std::size_t exhaustive_cap = 14,
                                     std::size_t samples = 5000);

enum class LimitSide { Left, Right };

struct LimitResult {
  FlagD flag;
  double residual = 0.0;  // distance between the last two terms
  std::size_t terms = 0;
  FlagD a, c;             // diamond extremities straddling the target
  bool in_closed_diamond = false;
};

/// Limit at `theta` along the sample entries approaching from one side (at most
/// the last `depth` terms). Throws NotCauchyError when the last step is not
/// below `cauchy_tol`.
LimitResult left_right_limits(const CyclicSample<double>& s, const Rational& theta, LimitSide side,
                              std::size_t depth = 60, double cauchy_tol = 1e-8);

struct TriplesSufficeResult {
  bool precondition = false;  // all triples positive and spacing <= max_gap
  double spacing = 0.0;
  PositiveMapResult quadruples;
  bool pass = false;
};

/// Samples on an interval (angles increasing, no wrap).
template <class T>
TriplesSufficeResult triples_suffice_check(const CyclicSample<T>& s, double max_gap = 1e-2, std::uint64_t seed = 1);

/// Arc of P^1 traversed in the direction of increasing affine coordinate from
/// start to end; nullopt is infinity.
struct Arc {
  std::optional<Rational> start;
  std::optional<Rational> end;
};

/// Letters 0, 1, 2, 3 stand for A, A^{-1}, B, B^{-1}.
using FreeWord = std::vector<int>;

bool is_reduced(const FreeWord& w);
/// Reduced words of lengths 1..max_len, by length then lexicographically.
std::vector<FreeWord> reduced_words(std::size_t max_len);
FreeWord reduce_word(const FreeWord& w);
FreeWord inverse_word(const FreeWord& w);
/// Letters a, A, b, B; the empty word prints as "1".
std::string word_name(const FreeWord& w);

struct SchottkyRep {
  Rational lambda;
  Rational rotation;                // m: the rotation is ((1-m^2), -2m; 2m, (1-m^2)) / (1+m^2)
  std::size_t n = 2;
  std::array<MatrixQ, 4> gens;      // A = diag(lambda, 1/lambda), B = R A R^{-1}
  std::array<MatrixD, 4> images;    // Sym^{n-1} of the generators
  std::array<Arc, 4> attracting;    // ping-pong arcs; the repelling arc of l is attracting[l ^ 1]
};

/// Throws PingPongViolated when no ping-pong arcs certify the pair.
SchottkyRep make_schottky(const Rational& lambda, const Rational& rotation, std::size_t n);
/// theta is the rotation angle in radians; lambda (denominator <= 1000) and
/// tan(theta/2) (denominator <= 200) are rounded to nearby rationals.
SchottkyRep make_schottky(double lambda, double theta, std::size_t n);

/// Exact ping-pong: disjoint arcs, each generator maps the complement of its
/// repelling arc into the interior of its attracting arc.
bool ping_pong_certified(const SchottkyRep& r);

MatrixQ word_matrix(const SchottkyRep& r, const FreeWord& w);
/// Attracting fixed point of a hyperbolic 2x2 matrix.
CirclePoint<double> attracting_point(const MatrixQ& g);
/// Attracting flag of the image of w, by orthogonal iteration that
/// re-orthonormalizes after every letter.
FlagD boundary_flag(const SchottkyRep& r, const FreeWord& w, double tol = 1e-13);

/// Attracting points of all reduced words of length <= L with their flags,
/// duplicates (powers) removed.
CyclicSample<double> schottky_boundary_map(const SchottkyRep& r, std::size_t L);

struct TripleBoundednessReport {
  std::vector<double> separations;
  std::vector<double> window_minimum;  // per separation; 1 if no triple qualifies
  std::vector<std::size_t> window_pairs;  // pairs lying in at least one separated triple
  double floor = 1.0;
  bool pass = false;
};

/// For each separation s: all triples of entries pairwise at least s turns
/// apart; minimum over them of the smallest orthonormal transversality determinant.
TripleBoundednessReport triple_boundedness_report(const CyclicSample<double>& s,
                                                  const std::vector<double>& separations = {0.25, 0.125, 0.0625},
                                                  double floor = 1e-10);

/// Smallest |det[a_1..a_i | b_1..b_{n-i}]| over i, with orthonormal bases.
double transversality_measure(const FlagD& a, const FlagD& b);

struct AnosovReport {
  std::vector<FreeWord> words;     // base . letter^k, k = 1..L
  std::vector<double> diameters;   // flag-distance diameter of image flags in the cylinder
  double rate = 0.0;               // least-squares slope of log diameter per letter
  double predicted = 0.0;          // -2 log lambda (exact for n = 2 and powers of A or B)
  bool monotone = false;
  bool pass = false;               // rate < -0.05 and monotone
};

AnosovReport anosov_contraction_report(const SchottkyRep& r, std::size_t L, const FreeWord& base = {}, int letter = 0);

}  // namespace poslab
