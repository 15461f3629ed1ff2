#include <cmath>

#include "doctest.h"
#include "poslab/configurations.hpp"
#include "poslab/tripods.hpp"

using namespace poslab;

namespace {

Rational q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

template <class T>
Flag<T> pt(const T& x, const T& y) {
  return projective_point<T>(x, y);
}

// (standard, exp(e) + 2 eps E_13, antistandard): a positive triple off every circle for eps != 0
FlagD perturbed_apex(double eps) {
  MatrixD u = exp_nilpotent(principal_sl2<double>(3).e);
  u(0, 2) += 2 * eps;
  return act(u, antistandard_flag<double>(3));
}

Tripod<Rational> random_tripod(std::size_t n, Rng& rng) {
  return act(random_sl<Rational>(n, rng), standard_tripod<Rational>(n));
}

}  // namespace

TEST_CASE("projective line tripod coordinates") {
  // tau = (infinity, 1, 0)
  const auto tau = make_tripod(pt<Rational>(1, 0), pt<Rational>(1, 1), pt<Rational>(0, 1));
  for (long x : {1L, 2L, 5L}) {
    auto s = tripod_coordinates(tau, pt<Rational>(x, 1));
    CHECK(s.params_plus.t == std::vector<Rational>{Rational(x)});
    CHECK(s.params_minus.t == std::vector<Rational>{q(1, x)});
  }
  auto d = tripod_distance(tau, pt<Rational>(1, 1), pt<Rational>(2, 1));
  CHECK(d.plus == doctest::Approx(1.0));
  CHECK(d.minus == doctest::Approx(0.5));
  CHECK(d.chordal == doctest::Approx(std::sqrt(5.0) / 2));
  auto zero = tripod_distance(tau, pt<Rational>(3, 1), pt<Rational>(3, 1));
  CHECK(zero.chordal == 0.0);
  CHECK_THROWS_AS(tripod_coordinates(tau, pt<Rational>(-1, 1)), PoslabError);
}

TEST_CASE("apex normalization and roundtrip") {
  Rng rng(21);
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto h = principal_params<Rational>(n);
    for (int k = 0; k < 5; ++k) {
      const auto tau = random_tripod(n, rng);
      auto s = tripod_coordinates(tau, tau.zero);
      CHECK(s.params_plus.t == h.t);
      CHECK(s.params_minus.t == h.t);
      const auto p = random_params<Rational>(n, rng);
      const auto f = tripod_point(tau, p);
      CHECK(tripod_coordinates(tau, f).params_plus.t == p.t);
      CHECK(flags_equal(tripod_point(tau.reversed(), tripod_coordinates(tau, f).params_minus), f));
      CHECK(flags_equal(tau.circle.at(CirclePoint<Rational>{1, 0}), tau.minus));
      CHECK(flags_equal(tau.circle.at(CirclePoint<Rational>{1, 1}), tau.zero));
      CHECK(flags_equal(tau.circle.at(CirclePoint<Rational>{0, 1}), tau.plus));
      CHECK(is_positive_triple(tau.minus, tau.zero, tau.plus));
    }
  }
}

TEST_CASE("tripod recognition") {
  const auto x = standard_flag<Rational>(3), y = antistandard_flag<Rational>(3);
  MatrixQ u = exp_nilpotent(principal_sl2<Rational>(3).e);
  CHECK(is_tripod(x, act(u, y), y));
  // any circle point through x, y
  auto c = circle_through(x, y, {Rational(3), q(1, 2)});
  CHECK(is_tripod(x, c.at(CirclePoint<Rational>{q(2, 3), 1}), y));
  u(0, 2) += 1;
  CHECK(is_positive_triple(x, act(u, y), y));
  CHECK_FALSE(is_tripod(x, act(u, y), y));
  CHECK_THROWS_AS(make_tripod(x, act(u, y), y), PoslabError);
  CHECK_FALSE(is_tripod(x, x, y));
}

TEST_CASE("distance axioms, duality and equivariance") {
  Rng rng(22);
  for (std::size_t n : {2u, 3u}) {
    const auto tauq = random_tripod(n, rng);
    const auto tau = to_double(tauq);
    std::vector<FlagD> pts;
    for (int k = 0; k < 12; ++k) pts.push_back(tripod_point(tau, random_params<double>(n, rng)));
    const MatrixD g = to_double(random_sl<Rational>(n, rng));
    const auto gtau = act(g, tau);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j) {
        const auto dij = tripod_distance(tau, pts[i], pts[j]);
        const auto dji = tripod_distance(tau, pts[j], pts[i]);
        CHECK(dij.chordal == doctest::Approx(dji.chordal).epsilon(1e-8));
        CHECK(std::max(dij.plus, dij.minus) <= dij.chordal + 1e-12);
        CHECK(dij.chordal <= dij.plus + dij.minus + 1e-12);
        if (i == j) CHECK(dij.chordal < 1e-8);
        else CHECK(dij.chordal > 1e-6);
        const auto k = (i + j) % pts.size();
        CHECK(dij.chordal <= tripod_distance(tau, pts[i], pts[k]).chordal + tripod_distance(tau, pts[k], pts[j]).chordal + 1e-8);
        const auto bar = tripod_distance(tau.reversed(), pts[i], pts[j]);
        CHECK(bar.plus == doctest::Approx(dij.minus).epsilon(1e-8));
        CHECK(bar.minus == doctest::Approx(dij.plus).epsilon(1e-8));
        const auto moved = tripod_distance(gtau, act(g, pts[i]), act(g, pts[j]));
        CHECK(std::fabs(moved.chordal - dij.chordal) <= 1e-8 * (1 + dij.chordal));
      }
  }
}

TEST_CASE("completeness probe") {
  const auto tau1 = standard_tripod<Rational>(2);
  std::vector<FlagQ> path;
  for (long k = 1; k <= 100000; k *= 10) path.push_back(pt<Rational>(q(1, k), Rational(1)));
  auto rep = completeness_probe(tau1, path);
  CHECK(rep.divergent);
  CHECK(rep.verdict == "divergent");
  CHECK(rep.min_minors.back() < rep.min_minors.front());

  const auto tau = standard_tripod<Rational>(3);
  for (std::size_t slot = 0; slot < 3; ++slot)
    for (bool shrink : {true, false}) {
      std::vector<FlagQ> p3;
      for (long k = 1; k <= 10000000; k *= 10) {
        LusztigParams<Rational> prm{default_reduced_word(3), {Rational(1), Rational(2), Rational(1)}};
        prm.t[slot] = shrink ? q(1, k) : Rational(k);
        p3.push_back(tripod_point(tau, prm));
      }
      CHECK(completeness_probe(tau, p3).divergent);
    }
  auto constant = completeness_probe(tau, std::vector<FlagQ>(4, tau.zero));
  CHECK(constant.verdict == "interior");
  CHECK_FALSE(constant.divergent);
}

TEST_CASE("tripod norm") {
  SUBCASE("tripods have norm zero") {
    Rng rng(23);
    for (std::size_t n : {2u, 3u}) {
      const auto tau = to_double(random_tripod(n, rng));
      CHECK(tripod_norm(tau.minus, tau.zero, tau.plus).value <= 1e-6);
    }
  }
  SUBCASE("every positive triple on the projective line is a tripod") {
    Rng rng(24);
    for (int k = 0; k < 5; ++k) {
      auto t = random_positive_triple<double>(2, rng);
      CHECK(tripod_norm(t[0], t[1], t[2]).value <= 1e-6);
    }
  }
  SUBCASE("norm decreases to zero as the triple approaches a tripod") {
    const auto x = standard_flag<double>(3), y = antistandard_flag<double>(3);
    std::vector<double> ks;
    for (double eps : {0.5, 0.1, 0.01}) ks.push_back(tripod_norm(x, perturbed_apex(eps), y).value);
    CHECK(ks[0] > ks[1]);
    CHECK(ks[1] > ks[2]);
    CHECK(ks[2] <= 0.1);
    CHECK(ks[2] > 1e-6);
  }
  SUBCASE("invariance under the group") {
    Rng rng(25);
    const auto x = standard_flag<double>(3), y = antistandard_flag<double>(3);
    const auto z = perturbed_apex(0.3);
    const double k0 = tripod_norm(x, z, y).value;
    for (int k = 0; k < 3; ++k) {
      const MatrixD g = to_double(random_sl<Rational>(3, rng));
      CHECK(std::fabs(tripod_norm(act(g, x), act(g, z), act(g, y)).value - k0) <= 1e-4);
    }
  }
  SUBCASE("minus-side triples") {
    // z on the opposite side of (x, y): apexes come from exp(-e)
    const auto x = standard_flag<double>(3), y = antistandard_flag<double>(3);
    const auto tau = make_tripod(x, act(exp_nilpotent(-1.0 * principal_sl2<double>(3).e), y), y);
    CHECK(tripod_norm(tau.minus, tau.zero, tau.plus).value <= 1e-6);
  }
}

TEST_CASE("diamond metric") {
  const auto x = standard_flag<double>(3), y = antistandard_flag<double>(3);
  MatrixD v(3, 3);
  v(0, 1) = 0.3;
  v(0, 2) = -0.2;
  v(1, 2) = 0.5;
  const auto z = perturbed_apex(0.2);
  const auto norm = tripod_norm(x, z, y);
  CHECK(norm.slack_set.size() >= 1);
  const double g1 = diamond_metric_eval(norm, x, y, z, v);
  CHECK(g1 > 0);
  CHECK(diamond_metric_eval(norm, x, y, z, MatrixD(3, 3)) == 0.0);
  CHECK(diamond_metric_eval(norm, x, y, z, 2.0 * v) == doctest::Approx(4 * g1).epsilon(1e-6));
  CHECK(diamond_metric_eval(x, z, y, z, v) == doctest::Approx(g1).epsilon(1e-9));

  const auto tau = to_double(standard_tripod<Rational>(3));
  const auto p = tripod_point(tau, LusztigParams<double>{default_reduced_word(3), {0.7, 1.9, 1.3}});
  const double single = tripod_metric_eval(tau, x, y, p, v);
  CHECK(diamond_metric_eval(x, tau.zero, y, p, v) == doctest::Approx(single).epsilon(1e-6));
  CHECK_THROWS_AS(diamond_metric_eval(x, tau.zero, y, act(exp_nilpotent(-1.0 * principal_sl2<double>(3).e), y), v),
                  PoslabError);
}

TEST_CASE("contraction for tripods") {
  SUBCASE("projective line: quadratic forms shrink by 16 per step") {
    const auto tau0 = make_tripod(pt<double>(1, 1), pt<double>(1, 0), pt<double>(-1, 1));
    const MatrixD gamma = MatrixD::diagonal({2.0, 0.5});
    const auto rep = contraction_experiment(gamma, tau0, 5, 1.0);
    CHECK(rep.k[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.contracting);
    for (std::size_t m = 1; m < rep.k.size(); ++m) {
      const double ratio = rep.k[m] / rep.k[m - 1];
      CHECK(ratio > 1.0 / 32);
      CHECK(ratio < 1.0 / 8);
    }
  }
  SUBCASE("principal hyperbolic in dimension three") {
    const auto tau0 = to_double(make_tripod(circle_map(CirclePoint<Rational>{1, 1}, 3), circle_map(CirclePoint<Rational>{1, 0}, 3),
                                            circle_map(CirclePoint<Rational>{-1, 1}, 3)));
    const MatrixD gamma = sym_power(MatrixD::diagonal({2.0, 0.5}), 3);
    const auto rep = contraction_experiment(gamma, tau0, 5, 1.0);
    CHECK(rep.monotone);
    CHECK(rep.contracting);
    CHECK(rep.k[5] < 1e-2);
    CHECK(rep.k[1] < 1.0);
  }
  SUBCASE("identity does not contract; the inverse is refused") {
    const auto tau0 = make_tripod(pt<double>(1, 1), pt<double>(1, 0), pt<double>(-1, 1));
    const auto rep = contraction_experiment(MatrixD::identity(2), tau0, 3, 1.0);
    CHECK_FALSE(rep.contracting);
    for (double k : rep.k) CHECK(k == doctest::Approx(1.0).epsilon(1e-5));
    CHECK_THROWS_AS(contraction_experiment(MatrixD::diagonal({0.5, 2.0}), tau0, 3, 1.0), PoslabError);
  }
}

TEST_CASE("contraction in corners") {
  Rng rng(26);
  for (std::size_t n : {2u, 3u}) {
    const auto taus = corner_sequence(n, 4.0, 14);
    const auto x0 = standard_flag<double>(n);
    auto rep = corner_contraction_probe(taus, x0, rng);
    CHECK(rep.precondition);
    CHECK(rep.converged == 20);
    CHECK(rep.pass);
    auto refused = corner_contraction_probe(taus, antistandard_flag<double>(n), rng);
    CHECK_FALSE(refused.precondition);
    CHECK_FALSE(refused.pass);
  }
}
