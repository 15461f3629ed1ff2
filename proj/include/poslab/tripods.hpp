#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poslab/circles.hpp"
#include "poslab/positivity.hpp"

namespace poslab {

/// Three flags on a positive circle. The frames are GL matrices with
///   frame_plus:  minus -> standard, plus -> antistandard, zero -> exp(e).antistandard
///   frame_minus: the same with minus and plus exchanged,
/// where e is the principal nilpotent. V_tau is the diamond over (minus, plus)
/// containing zero; both frames carry it onto N.antistandard.
template <class T>
struct Tripod {
  Flag<T> minus, zero, plus;
  Matrix<T> frame_plus, frame_minus;
  /// circle.at([1:0]) = minus, at([1:1]) = zero, at([0:1]) = plus.
  PositiveCircle<T> circle;

  std::size_t n() const { return zero.n(); }
  Tripod reversed() const;
};

/// Throws NotTransverse, NotInDiamond, or InvalidArgument when the triple does
/// not lie on a positive circle.
template <class T>
Tripod<T> make_tripod(const Flag<T>& minus, const Flag<T>& zero, const Flag<T>& plus);

template <class T>
bool is_tripod(const Flag<T>& minus, const Flag<T>& zero, const Flag<T>& plus);

template <class T>
Tripod<T> act(const Matrix<T>& g, const Tripod<T>& tau);

Tripod<double> to_double(const Tripod<Rational>& tau);

/// The standard tripod (standard, Veronese [1:1], antistandard).
template <class T>
Tripod<T> standard_tripod(std::size_t n);

/// Cone coordinates of exp(e): the image of the apex in both frames.
template <class T>
LusztigParams<T> principal_params(std::size_t n);

template <class T>
struct MetricSample {
  Flag<T> point;
  LusztigParams<T> params_plus;
  LusztigParams<T> params_minus;
};

/// Throws NotInDiamond when p is outside V_tau.
template <class T>
MetricSample<T> tripod_coordinates(const Tripod<T>& tau, const Flag<T>& p);

/// Psi in the plus frame (use tau.reversed() for the minus frame).
template <class T>
Flag<T> tripod_point(const Tripod<T>& tau, const LusztigParams<T>& params);

struct TripodDistance {
  double plus = 0.0;
  double minus = 0.0;
  double chordal = 0.0;  // sqrt(plus^2 + minus^2)
};

template <class T>
TripodDistance tripod_distance(const Tripod<T>& tau, const Flag<T>& p, const Flag<T>& q);

struct CompletenessReport {
  std::vector<double> distances;  // chordal distance from the first path point
  std::vector<double> min_minors; // smallest positivity minor in the plus frame
  bool monotone = false;
  bool divergent = false;         // monotone and final distance above the threshold
  std::string verdict;            // "divergent", "interior" or "inconclusive"
};

template <class T>
CompletenessReport completeness_probe(const Tripod<T>& tau, const std::vector<Flag<T>>& path, double threshold = 1e3);

struct TripodNormOptions {
  int starts = 8;
  double tolerance = 1e-6;
  int max_evaluations = 2000;  // per start
  double slack_relative = 1e-3;
  double slack_absolute = 1e-6;
  std::uint64_t seed = 0x7419;
};

struct TripodNormResult {
  double value = 0.0;
  Tripod<double> minimizer;
  std::vector<double> minimizer_log_torus;
  std::vector<Tripod<double>> slack_set;
  std::vector<double> slack_values;
  int evaluations = 0;
  bool converged = false;  // false = the optimizer budget ran out (value still returned)
};

/// K(x, z, y): smallest chordal distance from z to the apex of a tripod with
/// extremities (x, y) whose diamond contains z. Searches the n-1 torus
/// parameters of the apex (moving the apex along a circle is a torus move).
TripodNormResult tripod_norm(const FlagD& x, const FlagD& z, const FlagD& y, const TripodNormOptions& opts = {});

/// Tangent vectors at p are strictly upper triangular perturbations V of the
/// unipotent coordinate u of p in normalize_pair(x, y) (trivial class):
/// p(s) = g^{-1} (u + s V).antistandard.
double tripod_metric_eval(const Tripod<double>& tau, const FlagD& x, const FlagD& y, const FlagD& p, const MatrixD& v);

/// Average of tripod_metric_eval over the slack set of tripod_norm(x, z, y).
double diamond_metric_eval(const FlagD& x, const FlagD& z, const FlagD& y, const FlagD& p, const MatrixD& v,
                           const TripodNormOptions& opts = {});
double diamond_metric_eval(const TripodNormResult& norm, const FlagD& x, const FlagD& y, const FlagD& p,
                           const MatrixD& v);

struct ContractionOptions {
  std::size_t points = 6;       // sample points per ball
  std::size_t directions = 6;   // tangent directions per point
  std::size_t nesting_samples = 40;
  std::uint64_t seed = 0xC0;
};

struct ContractionReport {
  std::vector<double> k;  // k[0] ~ 1 (m = 0, sampled), then m = 1..m_max
  bool monotone = false;  // k non-increasing
  bool contracting = false;  // strictly decreasing and k.back() < 1
};

/// tau_m = gamma^m.tau0; k_m = sup g_{tau0}(w,w) / g_{tau_m}(w,w) over sampled w at
/// points of the chordal ball of radius R around tau_m's apex. Throws
/// NestingNotCertified unless gamma maps sampled points of V_tau0 into V_tau0.
ContractionReport contraction_experiment(const MatrixD& gamma, const Tripod<double>& tau0, std::size_t m_max,
                                         double radius, const ContractionOptions& opts = {});

struct CornerProbeReport {
  bool precondition = false;           // x0 transverse to y and Psi_m(apex params) -> x0
  std::vector<double> base_distances;  // d(Psi_m(h), x0)
  std::vector<double> final_distances; // per probe sequence, at the last index
  std::size_t converged = 0;
  bool pass = false;
};

/// Tripods tau_m = (x_m, t_m, y) with common y; probes Psi_{tau_m} (the frame
/// fixing y and moving x_m) along random convergent cone sequences.
CornerProbeReport corner_contraction_probe(const std::vector<Tripod<double>>& taus, const FlagD& x0, Rng& rng,
                                           std::size_t sequences = 20, double threshold = 1e-4);

/// (standard, L^m exp(e).antistandard, antistandard) for m < count, where L is
/// the diagonal matrix with consecutive ratios `ratio`; the apexes run into the
/// standard flag along a fixed torus direction.
std::vector<Tripod<double>> corner_sequence(std::size_t n, double ratio, std::size_t count);

}  // namespace poslab
