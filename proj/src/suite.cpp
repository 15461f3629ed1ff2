#include "poslab/suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "poslab/errors.hpp"

namespace poslab {

namespace {

using Body = std::function<void(PropertyResult&, const SuiteConfig&, Rng&)>;

struct PropertyDef {
  std::string name;
  std::string statement;
  Body body;
};

// Runs the exact or float instantiation of a templated property body.
#define BOTH_MODES(f)                                                 \
  [](PropertyResult& r, const SuiteConfig& c, Rng& g) {               \
    if (c.mode == Mode::Exact) f<Rational>(r, c, g); else f<double>(r, c, g); \
  }

void tally(PropertyResult& r, bool ok) {
  ++r.trials;
  if (!ok) ++r.failures;
}

void stat_min(PropertyResult& r, const char* key, double v) {
  if (!r.stats.contains(key) || v < r.stats[key].get<double>()) r.stats[key] = v;
}

void stat_max(PropertyResult& r, const char* key, double v) {
  if (!r.stats.contains(key) || v > r.stats[key].get<double>()) r.stats[key] = v;
}

std::size_t scaled(const SuiteConfig& c, std::size_t divisor, std::size_t minimum = 1) {
  if (c.trials == 0) return 0;
  return std::max(minimum, c.trials / divisor);
}

template <class T>
double as_double(const T& v) {
  if constexpr (std::is_same_v<T, Rational>)
    return v.get_d();
  else
    return v;
}

Rational q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

template <class T>
Matrix<T> convert(const MatrixQ& m) {
  if constexpr (std::is_same_v<T, Rational>)
    return m;
  else
    return to_double(m);
}

template <class T>
Flag<T> random_transverse_partner(const Flag<T>& a, Rng& rng) {
  while (true) {
    auto b = random_flag<T>(a.n(), rng);
    if (is_transverse(a, b)) return b;
  }
}

template <class T>
std::vector<Flag<T>> random_configuration(std::size_t n, std::size_t p, Rng& rng) {
  auto t = random_positive_triple<T>(n, rng);
  std::vector<Flag<T>> pts(t.begin(), t.end());
  std::uniform_int_distribution<std::size_t> pos(0, 1000);
  while (pts.size() < p) pts = insert_between(pts, pos(rng) % pts.size(), rng);
  return pts;
}

// Configurations are generated exactly. Float mode decides on the rounded flags
// and falls back to the exact flags when a decision is within the sign tolerance;
// the number of fallbacks is reported.
template <class T>
bool positive_checked(const std::vector<FlagQ>& pts, PropertyResult& r) {
  if constexpr (std::is_same_v<T, Rational>) {
    return is_positive_configuration(pts);
  } else {
    std::vector<FlagD> rounded;
    for (const auto& f : pts) rounded.push_back(to_double(f));
    try {
      return is_positive_configuration(rounded);
    } catch (const PoslabError& e) {
      if (e.code() != ErrorCode::FloatAmbiguous) throw;
      r.stats["exact_rechecks"] = r.stats.value("exact_rechecks", 0) + 1;
      return is_positive_configuration(pts);
    }
  }
}

// ---------------------------------------------------------------------------
// combinatorial

template <class T>
void semigroup_closure(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  for (std::size_t k = 0; k < c.trials; ++k) {
    const auto u = psi(random_params<T>(c.n, rng)), v = psi(random_params<T>(c.n, rng));
    const auto uv = u * v;
    tally(r, in_positive_semigroup(uv));
    stat_min(r, "min_minor_of_product", as_double(min_positivity_minor(uv)));
  }
}

template <class T>
void semigroup_torus(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  for (std::size_t k = 0; k < c.trials; ++k) {
    const auto u = psi(random_params<T>(c.n, rng));
    std::vector<T> d;
    for (std::size_t i = 0; i < c.n; ++i) d.push_back(lognormal_scalar<T>(rng));
    auto v = u;  // D u D^{-1}, entrywise so the unit diagonal stays exact
    for (std::size_t i = 0; i < c.n; ++i)
      for (std::size_t j = i + 1; j < c.n; ++j) v(i, j) = d[i] * u(i, j) / d[j];
    tally(r, in_positive_semigroup(v));
  }
}

template <class T>
void semigroup_salience(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  // u in N and u^{-1} in the closure would give a line in the closed cone.
  for (std::size_t k = 0; k < c.trials; ++k) {
    const auto u = psi(random_params<T>(c.n, rng));
    const double m = as_double(min_positivity_minor(inverse(u)));
    tally(r, m < 0);
    stat_max(r, "max_min_minor_of_inverse", m);
  }
}

template <class T>
void psi_bijectivity(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  for (std::size_t k = 0; k < c.trials; ++k) {
    const auto p = random_params<T>(c.n, rng);
    const auto u = psi(p);
    const auto f = factorize(u);
    if constexpr (std::is_same_v<T, Rational>) {
      tally(r, f.t == p.t && psi(f) == u);
    } else {
      double err = 0.0;
      for (std::size_t i = 0; i < p.t.size(); ++i) err = std::max(err, std::fabs(f.t[i] - p.t[i]) / p.t[i]);
      err = std::max(err, frobenius_norm(psi(f) - u) / frobenius_norm(u));
      tally(r, err <= 1e-8);
      stat_max(r, "max_relative_error", err);
    }
  }
}

template <class T>
void diamond_opposite(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  const std::size_t diamonds = c.trials ? 4 : 0;
  for (std::size_t d = 0; d < diamonds; ++d) {
    const auto a = random_flag<T>(c.n, rng);
    const auto b = random_transverse_partner(a, rng);
    const auto fr = normalize_pair(a, b, trivial_sign_class(c.n));
    const auto w = act(inverse(fr.g) * psi(random_params<T>(c.n, rng)), antistandard_flag<T>(c.n));
    const auto dia = make_diamond(a, b, w);
    const auto opp = opposite(dia);
    for (std::size_t k = 0; k < c.trials; ++k) {
      const auto x = sample_diamond(dia, rng), y = sample_diamond(opp, rng);
      tally(r, diamond_contains(dia, x) && !diamond_contains(dia, y) && diamond_contains(opp, y) &&
                   !diamond_contains(opp, x) && is_transverse(x, y));
    }
  }
}

template <class T>
void diamond_nesting(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  const std::size_t triples = c.trials ? 4 : 0;
  for (std::size_t k = 0; k < triples; ++k) {
    const auto t = random_positive_triple<T>(c.n, rng);  // (a, c, b) cyclically
    const bool ok = nesting_check(t[0], t[2], t[1], c.trials, rng);
    r.trials += c.trials;
    if (!ok) ++r.failures;
  }
}

template <class T>
void triple_permutations(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  for (std::size_t k = 0; k < c.trials; ++k) {
    const auto t = random_positive_triple<T>(c.n, rng);
    tally(r, is_positive_triple(t[0], t[1], t[2]) && triple_permutation_count(t[0], t[1], t[2]) == 6);
  }
  if (c.trials && c.n >= 3) {
    // mixed-sign coordinate: no diamond contains the middle point
    auto u = Matrix<T>::identity(c.n);
    u(0, 1) = T(1);
    u(1, 2) = T(-1);
    u(0, 2) = T(3);
    tally(r, !is_positive_triple(standard_flag<T>(c.n), act(u, antistandard_flag<T>(c.n)), antistandard_flag<T>(c.n)));
  }
}

template <class T>
void quadruple_dihedral(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  for (std::size_t k = 0; k < c.trials; ++k) {
    const auto qd = random_positive_quadruple<T>(c.n, rng);
    const auto rep = dihedral_invariance_report(qd);
    tally(r, rep.dihedral_agree && rep.dihedral[0] && rep.other_positive == 0);
  }
}

template <class T>
void configuration_invariance(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  for (std::size_t k = 0; k < c.trials; ++k) {
    const std::size_t p = 3 + k % 4;
    auto pts = random_configuration<Rational>(c.n, p, rng);
    bool ok = positive_checked<T>(pts, r);
    for (std::size_t s = 0; s < p && ok; ++s) {
      std::rotate(pts.begin(), pts.begin() + 1, pts.end());
      ok = positive_checked<T>(pts, r);
    }
    std::reverse(pts.begin(), pts.end());
    ok = ok && positive_checked<T>(pts, r);
    tally(r, ok);
  }
}

template <class T>
void configuration_heredity(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  for (std::size_t k = 0; k < c.trials; ++k) {
    const std::size_t p = 4 + k % 3;
    const auto pts = random_configuration<Rational>(c.n, p, rng);
    bool ok = true;
    for (std::size_t drop = 0; drop < p && ok; ++drop) {
      auto sub = pts;
      sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
      ok = positive_checked<T>(sub, r);
    }
    tally(r, ok);
  }
}

template <class T>
void configuration_insertion(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pos(0, 1000);
  for (std::size_t k = 0; k < c.trials; ++k) {
    const std::size_t p = 3 + k % 3;
    const auto pts = random_configuration<Rational>(c.n, p, rng);
    tally(r, positive_checked<T>(insert_between(pts, pos(rng) % p, rng), r));
  }
}

template <class T>
void necklace(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  for (std::size_t k = 0; k < scaled(c, 10); ++k) {
    const auto t = random_positive_triple<T>(c.n, rng);
    const bool ok = necklace_check(t[0], t[1], t[2], rng, 10);
    r.trials += 10;
    if (!ok) ++r.failures;
  }
}

template <class T>
void exclusion(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  // one trial at a time so that a float-ambiguous trial can be replayed exactly
  std::array<std::size_t, 4> hist{};
  for (std::size_t k = 0; k < c.trials; ++k) {
    const Rng saved = rng;
    ExclusionReport rep;
    try {
      rep = exclusion_suite<T>(c.n, rng, 1);
    } catch (const PoslabError& e) {
      if (e.code() != ErrorCode::FloatAmbiguous) throw;
      r.stats["exact_rechecks"] = r.stats.value("exact_rechecks", 0) + 1;
      rng = saved;
      rep = exclusion_suite<Rational>(c.n, rng, 1);
    }
    tally(r, rep.pass());
    for (std::size_t i = 0; i < 4; ++i) hist[i] += rep.positive_count_histogram[i];
  }
  r.stats["positive_count_histogram"] = hist;
}

template <class T>
void inclusion(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  for (std::size_t k = 0; k < scaled(c, 50); ++k) {
    const auto qd = random_positive_quadruple<T>(c.n, rng);  // (a, c, d, b) cyclically
    const bool ok = inclusion_check(qd[0], qd[1], qd[2], qd[3], rng, 50);
    r.trials += 50;
    if (!ok) ++r.failures;
  }
}

void p1_oracle(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  using Slope = std::optional<Rational>;
  std::vector<Slope> grid{std::nullopt};
  for (auto [a, b] : {std::pair{-3L, 1L}, {-2, 1}, {-1, 1}, {-1, 2}, {0, 1}, {1, 3}, {1, 2}, {1, 1}, {2, 1}, {5, 1}, {7, 1}})
    grid.push_back(q(a, b));
  auto less = [](const Slope& x, const Slope& y) { return x && (!y || *x < *y); };
  auto between = [&](const Slope& x, const Slope& a, const Slope& b) {
    const Slope& lo = less(a, b) ? a : b;
    const Slope& hi = less(a, b) ? b : a;
    return less(lo, x) && less(x, hi);
  };
  std::vector<FlagQ> pts;
  for (const auto& s : grid)
    pts.push_back(s ? projective_point<Rational>(*s, Rational(1)) : projective_point<Rational>(Rational(1), Rational(0)));
  PositivityOracle<Rational> oracle(pts);
  const std::size_t m = pts.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k) {
        if (i == j || j == k || i == k) continue;
        tally(r, oracle.triple(i, j, k));
        for (std::size_t l = 0; l < m; ++l) {
          if (l == i || l == j || l == k) continue;
          const bool expected = between(grid[j], grid[i], grid[k]) != between(grid[l], grid[i], grid[k]);
          tally(r, oracle.quadruple(i, j, k, l) == expected);
        }
      }
}

// ---------------------------------------------------------------------------
// circles

template <class T>
void circle_one_parameter(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  const auto e = principal_sl2<T>(c.n).e;
  for (long k = 1; k <= 50; ++k) {
    T t;
    if constexpr (std::is_same_v<T, Rational>)
      t = q(k, 10);
    else
      t = static_cast<double>(k) / 10.0;
    tally(r, in_positive_semigroup(exp_nilpotent(t * e)));
  }
}

template <class T>
void circle_equivariance(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  std::uniform_int_distribution<int> v(-5, 5);
  for (std::size_t k = 0; k < c.trials; ++k) {
    const auto g = convert<T>(random_sl<Rational>(2, rng, 4, 2));
    CirclePoint<T> p{T(v(rng)), T(v(rng))};
    if (as_double(p.x) == 0 && as_double(p.y) == 0) p.y = T(1);
    tally(r, flags_equal(circle_map(apply(g, p), c.n), act(sym_power(g, c.n), circle_map(p, c.n))));
  }
}

template <class T>
void circle_cyclic_tuples(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  for (const Rational& shift : {Rational(0), q(1, 17)}) {
    std::vector<Flag<T>> pts;
    for (long k = 0; k < 8; ++k) {
      const Rational th = q(k, 8) + shift;
      if constexpr (std::is_same_v<T, Rational>)
        pts.push_back(circle_map(turn_point(th), c.n));
      else
        pts.push_back(circle_map(turn_point(th.get_d()), c.n));
    }
    PositivityOracle<T> oracle(pts);
    for (std::size_t k = 3; k <= 6; ++k)
      for (const auto& sub : subsets(pts.size(), k)) {
        bool ok = true;
        for (const auto& t : subsets(k, 3)) ok = ok && oracle.triple(sub[t[0]], sub[t[1]], sub[t[2]]);
        for (const auto& t : subsets(k, 4)) ok = ok && oracle.quadruple(sub[t[0]], sub[t[1]], sub[t[2]], sub[t[3]]);
        tally(r, ok);
      }
  }
}

template <class T>
void circle_arc_membership(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  for (std::size_t k = 0; k < scaled(c, 10); ++k) {
    const auto x = random_flag<T>(c.n, rng);
    const auto y = random_transverse_partner(x, rng);
    std::vector<T> torus;
    for (std::size_t i = 0; i + 1 < c.n; ++i) torus.push_back(lognormal_scalar<T>(rng));
    const auto circ = circle_through(x, y, torus);
    const T s = lognormal_scalar<T>(rng);
    const auto cs = circ.at(CirclePoint<T>{s, T(1)});
    bool ok = is_positive_triple(x, cs, y);
    const auto arc = opposite(make_diamond(cs, y, x));
    for (int j = 1; j < 5 && ok; ++j) ok = diamond_contains(arc, circ.at(CirclePoint<T>{s * T(j) / T(5), T(1)}));
    tally(r, ok);
  }
}

template <class T>
void circle_proximality(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  const std::vector<Rational> lambdas{Rational(2), Rational(3), q(1, 3), q(5, 2)};
  for (std::size_t k = 0; k < scaled(c, 10); ++k) {
    const MatrixQ conj = random_sl<Rational>(2, rng, 4, 2);
    const Rational lam = lambdas[k % lambdas.size()];
    ProximalityReport rep;
    if constexpr (std::is_same_v<T, Rational>) {
      rep = proximality_report(conj, lam, c.n);
    } else {
      Rational inv = 1 / lam;
      inv.canonicalize();
      const MatrixQ g = conj * MatrixQ::diagonal({lam, inv}) * inverse(conj);
      rep = proximality_report(to_double(g), c.n);
      stat_max(r, "max_distance", rep.distance);
    }
    tally(r, rep.hyperbolic && rep.simple_gaps && rep.flag_matches);
  }
}

template <class T>
void circle_centralizer(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  for (std::size_t k = 0; k < scaled(c, 10); ++k) {
    std::vector<Matrix<T>> mats;
    for (int i = 0; i < 2; ++i) {
      const MatrixQ conj = random_sl<Rational>(2, rng);
      const MatrixQ g = conj * MatrixQ::diagonal({Rational(2), q(1, 2)}) * inverse(conj);
      mats.push_back(convert<T>(sym_power(g, c.n)));
    }
    tally(r, diagonal_centralizer_rank(mats) == 1);
  }
}

// ---------------------------------------------------------------------------
// metrics (float)

void tripod_metric_axioms(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  // Group elements are kept moderately conditioned and applied exactly; frame
  // condition numbers near 1e7 would put float distances beyond 1e-8.
  const std::size_t pairs = scaled(c, 2);
  const int steps = static_cast<int>(2 * c.n);
  std::uniform_int_distribution<std::size_t> pick(0, 11);
  double worst = 0.0;
  for (std::size_t done = 0; done < pairs;) {
    const auto tq = act(random_sl<Rational>(c.n, rng, steps, 2), standard_tripod<Rational>(c.n));
    const MatrixQ g = random_sl<Rational>(c.n, rng, steps, 2);
    const auto tau = to_double(tq), gtau = to_double(act(g, tq));
    std::vector<FlagD> pts, moved;
    for (int k = 0; k < 12; ++k) {
      const auto p = tripod_point(tq, random_params<Rational>(c.n, rng));
      pts.push_back(to_double(p));
      moved.push_back(to_double(act(g, p)));
    }
    for (int k = 0; k < 25 && done < pairs; ++k, ++done) {
      const std::size_t i = pick(rng), j = pick(rng), m = pick(rng);
      const auto dij = tripod_distance(tau, pts[i], pts[j]);
      const auto dji = tripod_distance(tau, pts[j], pts[i]);
      const auto bar = tripod_distance(tau.reversed(), pts[i], pts[j]);
      const auto gd = tripod_distance(gtau, moved[i], moved[j]);
      const double tri = dij.chordal - tripod_distance(tau, pts[i], pts[m]).chordal -
                         tripod_distance(tau, pts[m], pts[j]).chordal;
      const double scale = 1.0 + dij.chordal;
      const double err = std::max({std::fabs(dij.chordal - dji.chordal) / scale, tri / scale,
                                   std::fabs(bar.plus - dij.minus) / scale, std::fabs(bar.minus - dij.plus) / scale,
                                   std::fabs(gd.chordal - dij.chordal) / scale, i == j ? dij.chordal : 0.0});
      const bool separated = i == j || dij.chordal > 1e-6;
      worst = std::max(worst, err);
      tally(r, err <= 1e-8 && separated);
    }
  }
  r.stats["max_violation"] = worst;
}

void tripod_completeness(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  const auto tau = standard_tripod<Rational>(c.n);
  const std::size_t slots = c.n * (c.n - 1) / 2;
  double smallest_final = INFINITY;
  for (std::size_t p = 0; p < 10; ++p) {
    std::vector<std::size_t> moving{p % slots};
    if (p >= 2 * slots) moving.push_back((p + 1) % slots);
    const bool shrink = (p / slots) % 2 == 0;
    std::vector<FlagQ> path;
    for (long k = 1; k <= 10000000; k *= 10) {
      LusztigParams<Rational> prm{default_reduced_word(c.n), std::vector<Rational>(slots, Rational(1))};
      for (auto s : moving) prm.t[s] = shrink ? q(1, k) : Rational(k);
      path.push_back(tripod_point(tau, prm));
    }
    const auto rep = completeness_probe(tau, path);
    tally(r, rep.divergent);
    smallest_final = std::min(smallest_final, rep.distances.back());
  }
  r.stats["min_final_distance"] = smallest_final;
}

void tripod_norm_tripods(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  for (std::size_t k = 0; k < scaled(c, 40); ++k) {
    const auto tau = to_double(act(random_sl<Rational>(c.n, rng), standard_tripod<Rational>(c.n)));
    const double K = tripod_norm(tau.minus, tau.zero, tau.plus).value;
    tally(r, K <= 1e-6);
    stat_max(r, "max_norm", K);
  }
}

void tripod_norm_continuity(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  // (standard, exp(e) + 2 eps E_13, antistandard) in dimension three
  const auto x = standard_flag<double>(3), y = antistandard_flag<double>(3);
  std::vector<double> ks;
  for (double eps : {0.5, 0.1, 0.01}) {
    MatrixD u = exp_nilpotent(principal_sl2<double>(3).e);
    u(0, 2) += 2 * eps;
    ks.push_back(tripod_norm(x, act(u, y), y).value);
  }
  tally(r, ks[0] > ks[1] && ks[1] > ks[2]);
  tally(r, ks[2] <= 0.1);
  r.stats["n"] = 3;
  r.stats["eps"] = {0.5, 0.1, 0.01};
  r.stats["norms"] = ks;
}

void contraction_principal(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  const std::size_t n = 3;
  const auto tau0 = to_double(make_tripod(circle_map(CirclePoint<Rational>{1, 1}, n), circle_map(CirclePoint<Rational>{1, 0}, n),
                                          circle_map(CirclePoint<Rational>{-1, 1}, n)));
  const MatrixD gamma = sym_power(MatrixD::diagonal({2.0, 0.5}), n);
  const auto rep = contraction_experiment(gamma, tau0, 5, 1.0);
  tally(r, rep.contracting);
  tally(r, rep.k[5] < 1e-2);
  r.stats["n"] = n;
  r.stats["k"] = rep.k;
}

void corner_probe(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  if (c.trials == 0) return;
  const auto taus = corner_sequence(c.n, 4.0, 14);
  const auto rep = corner_contraction_probe(taus, standard_flag<double>(c.n), rng);
  tally(r, rep.precondition);
  r.trials += rep.final_distances.size();
  r.failures += rep.final_distances.size() - rep.converged;
  r.stats["converged"] = rep.converged;
  r.stats["max_final_distance"] = *std::max_element(rep.final_distances.begin(), rep.final_distances.end());
}

// ---------------------------------------------------------------------------
// boundary (float)

std::vector<Rational> approach(const Rational& theta, int kmax) {
  std::vector<Rational> out{theta + q(1, 2)};
  for (int k = 2; k <= kmax; ++k) {
    Rational step(1);
    step /= Rational(mpz_class(1) << k);
    out.push_back(theta - step);
    out.push_back(theta + step);
  }
  return out;
}

void boundary_limits(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  double worst = 0.0;
  for (long j = 0; j < 50; ++j) {
    const Rational theta = q(2 * j + 1, 100);
    const auto s = circle_sample<double>(c.n, approach(theta, 42));
    const auto target = circle_map(turn_point(theta.get_d()), c.n);
    const auto left = left_right_limits(s, theta, LimitSide::Left);
    const auto right = left_right_limits(s, theta, LimitSide::Right);
    const double err = std::max({flag_distance(left.flag, target), flag_distance(right.flag, target),
                                 flag_distance(left.flag, right.flag)});
    worst = std::max(worst, err);
    tally(r, err < 1e-8 && left.in_closed_diamond && right.in_closed_diamond);
  }
  r.stats["max_distance"] = worst;
}

void boundary_mixed_triples(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  const std::vector<Rational> thetas{q(1, 7), q(3, 7), q(5, 7)};
  std::vector<Rational> turns;
  for (const auto& th : thetas) {
    const auto a = approach(th, 40);
    turns.insert(turns.end(), a.begin(), a.end());
  }
  const auto s = circle_sample<double>(c.n, turns);
  for (int mask = 0; mask < 8; ++mask) {
    CyclicSample<double> lim;
    for (int i = 0; i < 3; ++i) {
      const auto side = (mask >> i) & 1 ? LimitSide::Right : LimitSide::Left;
      lim.entries.push_back({thetas[static_cast<std::size_t>(i)], left_right_limits(s, thetas[static_cast<std::size_t>(i)], side).flag, ""});
    }
    tally(r, positive_map_check(lim).positive);
  }
}

void boundary_triples_suffice(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  if (c.trials == 0) return;
  std::vector<Rational> turns;
  for (long i = 0; i < 30; ++i) turns.push_back(q(12 + i, 120));
  const auto res = triples_suffice_check(circle_sample<double>(c.n, turns), 1e-2, rng());
  tally(r, res.precondition && res.pass);
  r.stats["quadruples_checked"] = res.quadruples.quadruples_checked;
  r.stats["spacing"] = res.spacing;
}

std::size_t schottky_depth(std::size_t n) { return n <= 3 ? 6 : 4; }

SchottkyRep default_schottky(std::size_t n) { return make_schottky(Rational(3), q(70, 169), n); }

void schottky_ping_pong(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  const auto rep = default_schottky(c.n);
  tally(r, ping_pong_certified(rep));
  r.stats["lambda"] = rep.lambda.get_str();
  r.stats["rotation"] = rep.rotation.get_str();
}

void schottky_positive(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  if (c.trials == 0) return;
  const std::size_t L = schottky_depth(c.n);
  const auto s = schottky_boundary_map(default_schottky(c.n), L);
  const auto res = positive_map_check(s, rng());
  tally(r, res.positive);
  r.stats["depth"] = L;
  r.stats["points"] = s.entries.size();
  r.stats["quadruples_checked"] = res.quadruples_checked;
  r.stats["exact_rechecks"] = res.exact_rechecks;
  if (!res.positive) r.stats["witness"] = res.witness;
}

void schottky_equivariance(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  if (c.trials == 0) return;
  const auto rep = default_schottky(c.n);
  const auto words = reduced_words(3);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  double worst = 0.0;
  while (r.trials < 50) {
    const auto& g = words[pick(rng)];
    const auto& w = words[pick(rng)];
    FreeWord conj = g;
    conj.insert(conj.end(), w.begin(), w.end());
    const auto gi = inverse_word(g);
    conj.insert(conj.end(), gi.begin(), gi.end());
    conj = reduce_word(conj);
    if (conj.empty()) continue;
    const double d = flag_distance(boundary_flag(rep, conj),
                                   act(to_double(sym_power(word_matrix(rep, g), c.n)), boundary_flag(rep, w)));
    worst = std::max(worst, d);
    tally(r, d < 1e-9);
  }
  r.stats["max_distance"] = worst;
}

void schottky_boundedness(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  const auto rep = triple_boundedness_report(schottky_boundary_map(default_schottky(c.n), schottky_depth(c.n)));
  tally(r, rep.pass);
  r.stats["floor"] = rep.floor;
  r.stats["window_minimum"] = rep.window_minimum;
}

void anosov_decay(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  const auto rep = default_schottky(c.n);
  Json rates = Json::array();
  for (int letter = 0; letter < 4; ++letter) {
    const auto a = anosov_contraction_report(rep, schottky_depth(c.n), {}, letter);
    tally(r, a.pass);
    rates.push_back(a.rate);
  }
  r.stats["rates"] = rates;
}

void anosov_mobius(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  const auto a = anosov_contraction_report(default_schottky(2), 6);
  tally(r, std::fabs(a.rate - a.predicted) <= 0.1 * std::fabs(a.predicted));
  r.stats["rate"] = a.rate;
  r.stats["predicted"] = a.predicted;
}

// ---------------------------------------------------------------------------
// bruhat (exact)

MatrixQ random_upper(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<int> v(-4, 4);
  std::uniform_int_distribution<int> d(1, 3);
  MatrixQ b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational diag(d(rng) * (v(rng) >= 0 ? 1 : -1), d(rng));
    diag.canonicalize();
    b(i, i) = diag;
    for (std::size_t j = i + 1; j < n; ++j) b(i, j) = v(rng);
  }
  return b;
}

void bruhat_roundtrip(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  const auto perms = all_permutations(c.n);
  std::uniform_int_distribution<std::size_t> pick(0, perms.size() - 1);
  for (std::size_t k = 0; k < c.trials; ++k) {
    const Perm& w = perms[pick(rng)];
    const MatrixQ g = random_upper(c.n, rng) * permutation_matrix<Rational>(w) * random_upper(c.n, rng);
    const auto cell = bruhat_cell(g);
    tally(r, cell.perm == w && cell.length == inversions(w) && bruhat_cell(inverse(g)).perm == inverse_perm(w));
  }
}

void bruhat_order(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  for (std::size_t n : {3u, 4u}) {
    const auto perms = all_permutations(n);
    for (const Perm& w : perms) {
      // u <= w iff some subword of a reduced word of w multiplies to u
      const auto word = reduced_word(w);
      std::set<Perm> lower;
      for (std::size_t mask = 0; mask < (std::size_t{1} << word.size()); ++mask) {
        std::vector<int> sub;
        for (std::size_t k = 0; k < word.size(); ++k)
          if (mask & (std::size_t{1} << k)) sub.push_back(word[k]);
        lower.insert(from_word(n, sub));
      }
      for (const Perm& u : perms) tally(r, bruhat_leq(u, w) == (lower.count(u) > 0));
    }
  }
}

void bruhat_involutions(PropertyResult& r, const SuiteConfig& c, Rng&) {
  if (c.trials == 0) return;
  for (std::size_t n = 2; n <= 7; ++n) {
    const auto rep = check_involution_lemma(n);
    r.trials += rep.checked;
    r.failures += rep.failures;
  }
}

void bruhat_transversality(PropertyResult& r, const SuiteConfig& c, Rng& rng) {
  if (c.trials == 0) return;
  const std::size_t n = c.n;
  std::vector<Rational> d;
  for (std::size_t i = 0; i < n; ++i) {
    const long e = static_cast<long>(n) - 1 - 2 * static_cast<long>(i);
    d.push_back(e >= 0 ? Rational(1L << e) : q(1, 1L << -e));
  }
  const MatrixQ g = random_sl<Rational>(n, rng);
  const auto semisimple = transversality_scan({g * MatrixQ::diagonal(d) * inverse(g)}, 3);
  tally(r, semisimple.witness.has_value() && bruhat_cell(*semisimple.witness).perm == longest_perm(n));

  std::vector<MatrixQ> unipotents;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    MatrixQ u = MatrixQ::identity(n);
    u(i, i + 1) = 1;
    unipotents.push_back(u);
  }
  const auto uni = transversality_scan(unipotents, 3);
  tally(r, !uni.witness && uni.dominating_cell && uni.dominating_cell->perm == identity_perm(n));
  r.stats["semisimple_samples"] = semisimple.samples_checked;
  r.stats["unipotent_samples"] = uni.samples_checked;
}

// ---------------------------------------------------------------------------

const std::map<std::string, std::vector<PropertyDef>>& registry() {
  static const std::map<std::string, std::vector<PropertyDef>> reg{
      {"combinatorial",
       {{"semigroup.closure", "products of positive unipotents are positive", BOTH_MODES(semigroup_closure)},
        {"semigroup.torus_invariance", "conjugation by the positive diagonal torus preserves the semigroup",
         BOTH_MODES(semigroup_torus)},
        {"semigroup.salience", "inverses of positive unipotents leave the closed cone", BOTH_MODES(semigroup_salience)},
        {"psi.bijectivity", "factorize inverts psi on random parameters", BOTH_MODES(psi_bijectivity)},
        {"diamond.opposite", "a diamond and its opposite are disjoint and mutually transverse",
         BOTH_MODES(diamond_opposite)},
        {"diamond.nesting", "diamonds over a positive triple nest", BOTH_MODES(diamond_nesting)},
        {"triple.permutations", "positive triples stay positive under all permutations",
         BOTH_MODES(triple_permutations)},
        {"quadruple.dihedral", "quadruple positivity is dihedral and excludes the other orderings",
         BOTH_MODES(quadruple_dihedral)},
        {"configuration.cyclic_invariance", "configurations stay positive under rotation and reversal",
         BOTH_MODES(configuration_invariance)},
        {"configuration.heredity", "subconfigurations of positive configurations are positive",
         BOTH_MODES(configuration_heredity)},
        {"configuration.insertion", "inserting a diamond sample between neighbours keeps positivity",
         BOTH_MODES(configuration_insertion)},
        {"configuration.necklace", "samples of the three opposite diamonds form a positive triple",
         BOTH_MODES(necklace)},
        {"configuration.exclusion", "exclusion for triples and quadruples", BOTH_MODES(exclusion)},
        {"configuration.inclusion", "closed inner diamonds lie in the outer diamond (extreme parameters)",
         BOTH_MODES(inclusion)},
        {"projective_line.oracle", "on P^1 all predicates match the cyclic order (12-point grid, exhaustive)",
         p1_oracle}}},
      {"circles",
       {{"circle.one_parameter", "exp(t e) is positive for t > 0", BOTH_MODES(circle_one_parameter)},
        {"circle.equivariance", "circle_map intertwines SL(2) with its irreducible image",
         BOTH_MODES(circle_equivariance)},
        {"circle.cyclic_tuples", "cyclically ordered circle points form positive configurations (k <= 6)",
         BOTH_MODES(circle_cyclic_tuples)},
        {"circle.arc_membership", "circle arcs lie in the corresponding diamonds", BOTH_MODES(circle_arc_membership)},
        {"circle.proximality", "hyperbolic images are proximal with attracting flag on the circle",
         BOTH_MODES(circle_proximality)},
        {"circle.centralizer", "two generic hyperbolic images have scalar diagonal centralizer",
         BOTH_MODES(circle_centralizer)}}},
      {"metrics",
       {{"tripod.metric_axioms", "tripod distance: symmetry, triangle, duality, equivariance", tripod_metric_axioms},
        {"tripod.completeness", "paths leaving every compact set diverge", tripod_completeness},
        {"tripod_norm.tripods", "the tripod norm vanishes on tripods", tripod_norm_tripods},
        {"tripod_norm.continuity", "the tripod norm decreases to 0 along triples converging to a tripod",
         tripod_norm_continuity},
        {"contraction.principal", "the principal hyperbolic contracts nested tripod metrics", contraction_principal},
        {"contraction.corner", "corner probes converge", corner_probe}}},
      {"boundary",
       {{"limits.two_sided", "one-sided limits agree with the circle map and lie in closed diamonds", boundary_limits},
        {"limits.mixed_triples", "limits taken from mixed sides form positive triples", boundary_mixed_triples},
        {"limits.triples_suffice", "finely spaced samples with positive triples have positive quadruples",
         boundary_triples_suffice},
        {"schottky.ping_pong", "the Schottky pair is certified by exact ping-pong", schottky_ping_pong},
        {"schottky.positive", "the Schottky boundary map is positive", schottky_positive},
        {"schottky.equivariance", "the boundary map is equivariant", schottky_equivariance},
        {"schottky.triple_boundedness", "separated boundary triples stay uniformly transverse", schottky_boundedness},
        {"anosov.decay", "nested cylinder diameters decay geometrically", anosov_decay},
        {"anosov.mobius_rate", "on P^1 the decay rate matches -2 log lambda within 10%", anosov_mobius}}},
      {"bruhat",
       {{"bruhat.cell_roundtrip", "bruhat_cell recovers w from b1 w b2", bruhat_roundtrip},
        {"bruhat.order_oracle", "Bruhat order matches the subword oracle in S3 and S4", bruhat_order},
        {"bruhat.involution_lemma", "involution lemma for n <= 7", bruhat_involutions},
        {"bruhat.transversality_scan", "semisimple generators reach the open cell, unipotent ones do not",
         bruhat_transversality}}},
  };
  return reg;
}

std::uint64_t property_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return seed ^ h;
}

}  // namespace

void validate(const SuiteConfig& cfg) {
  require(cfg.n >= 2 && cfg.n <= 6, ErrorCode::ConfigInvalid, "n must lie in [2, 6]");
  require(!cfg.tol || *cfg.tol > 0, ErrorCode::ConfigInvalid, "tol must be positive");
  require(cfg.workers >= 1, ErrorCode::ConfigInvalid, "workers must be at least 1");
}

bool SuiteSection::pass() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.pass(); });
}

bool SuiteReport::pass() const {
  return std::all_of(sections.begin(), sections.end(), [](const SuiteSection& s) { return s.pass(); });
}

const std::vector<std::string>& module_suites() {
  static const std::vector<std::string> names{"combinatorial", "circles", "metrics", "boundary", "bruhat"};
  return names;
}

std::vector<std::string> suite_properties(const std::string& suite) {
  const auto it = registry().find(suite);
  if (it == registry().end()) fail(ErrorCode::UnknownSuite, "unknown suite '" + suite + "'");
  std::vector<std::string> out;
  for (const auto& p : it->second) out.push_back(p.name);
  return out;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg, const std::vector<std::string>& only) {
  validate(cfg);
  std::vector<std::string> suites;
  if (name == "all")
    suites = module_suites();
  else if (registry().count(name))
    suites = {name};
  else
    fail(ErrorCode::UnknownSuite, "unknown suite '" + name + "'");

  const double saved_tol = sign_tolerance();
  if (cfg.tol) set_sign_tolerance(*cfg.tol);
  SuiteReport report{name, cfg, {}};
  for (const auto& s : suites) {
    SuiteSection section{s, {}};
    for (const auto& def : registry().at(s)) {
      if (!only.empty() && std::find(only.begin(), only.end(), def.name) == only.end()) continue;
      PropertyResult res;
      res.name = def.name;
      res.statement = def.statement;
      Rng rng(property_seed(cfg.seed, def.name));
      try {
        def.body(res, cfg, rng);
      } catch (const PoslabError& e) {
        res.error = std::string(error_name(e.code()));
        res.error_message = e.what();
      } catch (const std::exception& e) {
        res.error = "InternalError";
        res.error_message = e.what();
      }
      section.properties.push_back(std::move(res));
    }
    report.sections.push_back(std::move(section));
  }
  set_sign_tolerance(saved_tol);
  return report;
}

Json to_json(const SuiteConfig& c) {
  Json j{{"n", c.n}, {"trials", c.trials}, {"seed", c.seed}, {"mode", c.mode == Mode::Exact ? "exact" : "float"}};
  j["tol"] = c.tol ? Json(*c.tol) : Json(nullptr);
  j["workers"] = c.workers;
  return j;
}

Json to_json(const SuiteReport& r) {
  Json sections = Json::array();
  std::size_t total = 0, failed = 0;
  for (const auto& s : r.sections) {
    Json props = Json::array();
    for (const auto& p : s.properties) {
      Json pj{{"name", p.name},       {"statement", p.statement}, {"pass", p.pass()},
              {"trials", p.trials},   {"failures", p.failures},   {"stats", p.stats}};
      if (!p.error.empty()) pj["error"] = Json{{"code", p.error}, {"message", p.error_message}};
      props.push_back(pj);
      ++total;
      if (!p.pass()) ++failed;
    }
    sections.push_back(Json{{"suite", s.name}, {"pass", s.pass()}, {"properties", props}});
  }
  return Json{{"schema", "poslab/1"},
              {"suite", r.suite},
              {"config", to_json(r.config)},
              {"pass", r.pass()},
              {"summary", Json{{"properties", total}, {"failed", failed}}},
              {"sections", sections}};
}

}  // namespace poslab
