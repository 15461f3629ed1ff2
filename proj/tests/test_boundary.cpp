#include <cmath>

#include "doctest.h"
#include "poslab/boundary.hpp"
#include "poslab/errors.hpp"
#include "poslab/sampling.hpp"

using namespace poslab;

namespace {

Rational q(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

std::vector<Rational> grid(long count) {
  std::vector<Rational> out;
  for (long i = 0; i < count; ++i) out.push_back(q(i, count));
  return out;
}

// theta +- 2^-k for k = 2..kmax, plus theta + 1/2.
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

}  // namespace

TEST_CASE("turn_of inverts turn_point") {
  for (int i = 0; i < 64; ++i) {
    const double th = (i + 0.5) / 64.0;
    const auto p = turn_point(th);
    CHECK(turn_of(p.x, p.y) == doctest::Approx(th).epsilon(1e-13));
  }
  CHECK(turn_of(1.0, 0.0) == 0.0);
  CHECK(turn_of(0.0, 1.0) == doctest::Approx(0.5));
  CHECK(turn_of(1.0, 1.0) < 0.5);  // positive affine coordinates come first
}

TEST_CASE("positive map check on circle samples") {
  for (std::size_t n : {2u, 3u, 4u}) {
    auto s = circle_sample<Rational>(n, grid(12));
    auto res = positive_map_check(s);
    CHECK(res.positive);
    CHECK(res.exhaustive);
    CHECK(res.triples_checked == 220);
    CHECK(res.quadruples_checked == 495);
  }
  auto big = circle_sample<double>(3, grid(40));
  auto res = positive_map_check(big, 7, 14, 800);
  CHECK(res.positive);
  CHECK_FALSE(res.exhaustive);
  CHECK(res.quadruples_checked == 800);

  // Two flags exchanged: the order is broken somewhere.
  auto bad = circle_sample<Rational>(3, grid(10));
  std::swap(bad.entries[2].flag, bad.entries[6].flag);
  auto r2 = positive_map_check(bad);
  CHECK_FALSE(r2.positive);
  REQUIRE(r2.witness.size() >= 3);
  std::vector<FlagQ> w;
  for (auto i : r2.witness) w.push_back(bad.entries[i].flag);
  CHECK_FALSE(is_positive_configuration(w));

  // A flag off the circle with mixed-sign coordinates.
  auto mixed = circle_sample<double>(3, grid(9));
  MatrixD u = MatrixD::identity(3);
  u(0, 1) = 1.0;
  u(1, 2) = -1.0;
  u(0, 2) = 0.2;
  mixed.entries[4].flag = make_flag(u * antistandard_flag<double>(3).basis);
  auto r3 = positive_map_check(mixed);
  CHECK_FALSE(r3.positive);
  CHECK(r3.exact_rechecks >= 1);
}

TEST_CASE("one-sided limits on dense circle samples") {
  const std::size_t n = 3;
  for (long j = 0; j < 10; ++j) {
    const Rational theta = q(2 * j + 1, 21);
    auto s = circle_sample<double>(n, approach(theta, 42));
    const auto target = circle_map(turn_point(theta.get_d()), n);
    for (auto side : {LimitSide::Left, LimitSide::Right}) {
      auto lim = left_right_limits(s, theta, side);
      CHECK(flag_distance(lim.flag, target) < 1e-8);
      CHECK(lim.residual < 1e-8);
      CHECK(lim.in_closed_diamond);
      CHECK(lim.terms <= 60);
    }
  }
  // Depth cap.
  auto deep = circle_sample<double>(2, approach(q(1, 3), 80));
  CHECK(left_right_limits(deep, q(1, 3), LimitSide::Left).terms == 60);
}

TEST_CASE("limits: non-Cauchy and constant tails") {
  auto coarse = circle_sample<double>(3, approach(q(1, 5), 10));
  try {
    left_right_limits(coarse, q(1, 5), LimitSide::Left);
    FAIL("expected NotCauchyError");
  } catch (const NotCauchyError& e) {
    CHECK(e.residual() >= 1e-8);
    CHECK(e.code() == ErrorCode::NotCauchyAtDepth);
  }
  auto s = circle_sample<double>(3, approach(q(1, 5), 12));
  const auto frozen = circle_map(turn_point(0.19), 3);
  for (auto& e : s.entries)
    if (e.angle < q(1, 5) && e.angle > q(1, 5) - q(1, 64)) e.flag = frozen;
  auto lim = left_right_limits(s, q(1, 5), LimitSide::Left);
  CHECK(lim.residual == 0.0);
  CHECK(flag_distance(lim.flag, frozen) == 0.0);
}

TEST_CASE("triples suffice on finely spaced samples") {
  std::vector<Rational> turns;
  for (long i = 0; i < 30; ++i) turns.push_back(q(12 + i, 120));
  auto s = circle_sample<double>(3, turns);
  auto res = triples_suffice_check(s);
  CHECK(res.precondition);
  CHECK(res.spacing < 1e-2);
  CHECK(res.pass);
  CHECK(res.quadruples.quadruples_checked == 5000);

  auto sparse = circle_sample<double>(3, grid(8));
  CHECK_FALSE(triples_suffice_check(sparse).precondition);

  // Any three circle points are a positive triple, so a permutation passes the
  // triple precondition and is caught by the quadruples.
  auto permuted = s;
  std::swap(permuted.entries[3].flag, permuted.entries[20].flag);
  auto rp = triples_suffice_check(permuted);
  CHECK(rp.precondition);
  CHECK_FALSE(rp.pass);
  CHECK(rp.quadruples.witness.size() == 4);

  auto three = circle_sample<Rational>(3, {q(1, 10), q(11, 100), q(12, 100)});
  auto r3 = triples_suffice_check(three);
  CHECK(r3.pass);
  CHECK(r3.quadruples.quadruples_checked == 0);
}

TEST_CASE("limits from mixed sides form positive triples") {
  const std::vector<Rational> thetas{q(1, 7), q(3, 7), q(5, 7)};
  std::vector<Rational> turns;
  for (const auto& th : thetas) {
    auto a = approach(th, 40);
    turns.insert(turns.end(), a.begin(), a.end());
  }
  auto s = circle_sample<double>(3, turns);
  for (int mask = 0; mask < 8; ++mask) {
    CyclicSample<double> lim;
    for (int i = 0; i < 3; ++i) {
      const auto side = (mask >> i) & 1 ? LimitSide::Right : LimitSide::Left;
      lim.entries.push_back({thetas[i], left_right_limits(s, thetas[i], side).flag, ""});
    }
    CHECK(positive_map_check(lim).positive);
  }
}

TEST_CASE("free words") {
  CHECK(reduced_words(1).size() == 4);
  CHECK(reduced_words(3).size() == 4 + 12 + 36);
  for (const auto& w : reduced_words(4)) CHECK(is_reduced(w));
  CHECK_FALSE(is_reduced({0, 1}));
  CHECK_FALSE(is_reduced({2, 4}));
  CHECK(reduce_word({0, 2, 3, 1, 2}) == FreeWord{2});
  CHECK(word_name(inverse_word({0, 2, 3})) == "bBA");
  CHECK(word_name({}) == "1");
}

TEST_CASE("Schottky construction and ping-pong") {
  const auto r = make_schottky(Rational(3), q(70, 169), 2);
  CHECK(ping_pong_certified(r));
  for (const auto& g : r.gens) CHECK(g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0) == 1);
  // Arc half-width below pi/8.
  const Rational w = *r.attracting[0].start;
  CHECK(std::atan(1.0 / w.get_d()) < M_PI / 8);
  // Each generator's word matrix fixes its attracting point in its attracting arc.
  const auto p = attracting_point(r.gens[2]);
  const auto img = apply(to_double(r.gens[2]), p);
  CHECK(std::fabs(img.x * p.y - img.y * p.x) < 1e-12);

  CHECK_THROWS_AS(make_schottky(Rational(6, 5), q(70, 169), 2), PoslabError);
  try {
    make_schottky(Rational(3), q(1, 20), 2);  // rotation too small: arcs overlap
    FAIL("expected PingPongViolated");
  } catch (const PoslabError& e) {
    CHECK(e.code() == ErrorCode::PingPongViolated);
  }
  auto rd = make_schottky(3.0, M_PI / 4, 3);
  CHECK(rd.rotation == q(70, 169));
}

TEST_CASE("Schottky boundary map") {
  const auto r2 = make_schottky(Rational(3), q(70, 169), 2);
  auto one = schottky_boundary_map(r2, 1);
  REQUIRE(one.entries.size() == 4);
  CHECK(positive_map_check(one).positive);
  for (int l = 0; l < 4; ++l) {
    const auto p = attracting_point(r2.gens[static_cast<std::size_t>(l)]);
    const Arc& arc = r2.attracting[static_cast<std::size_t>(l)];
    // The fixed point sits strictly inside its attracting arc.
    const double t = p.x / p.y, s0 = arc.start ? arc.start->get_d() : INFINITY, s1 = arc.end ? arc.end->get_d() : INFINITY;
    const bool wraps = s0 > s1;
    CHECK((wraps ? (t > s0 || t < s1) : (t > s0 && t < s1)));
  }
  for (const auto& w : reduced_words(3)) {
    const auto p = attracting_point(word_matrix(r2, w));
    CHECK(flag_distance(boundary_flag(r2, w), circle_map(p, 2)) < 1e-12);
  }
  const auto r3 = make_schottky(Rational(3), q(70, 169), 3);
  auto s = schottky_boundary_map(r3, 4);
  // Proper powers share the attracting point of their root.
  CHECK(s.entries.size() < 160);
  for (std::size_t i = 1; i < s.entries.size(); ++i) CHECK(s.entries[i - 1].angle < s.entries[i].angle);
  auto pos = positive_map_check(s, 3, 14, 2000);
  CHECK(pos.positive);

  // Equivariance: flag(g w g^-1) = rho(g).flag(w).
  Rng rng(11);
  auto words = reduced_words(3);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  int checked = 0;
  while (checked < 50) {
    const auto& g = words[pick(rng)];
    const auto& w = words[pick(rng)];
    FreeWord c = g;
    c.insert(c.end(), w.begin(), w.end());
    const auto gi = inverse_word(g);
    c.insert(c.end(), gi.begin(), gi.end());
    c = reduce_word(c);
    if (c.empty()) continue;
    const auto lhs = boundary_flag(r3, c);
    const auto rhs = act(to_double(sym_power(word_matrix(r3, g), 3)), boundary_flag(r3, w));
    CHECK(flag_distance(lhs, rhs) < 1e-9);
    ++checked;
  }
}

TEST_CASE("triple boundedness") {
  const auto r = make_schottky(Rational(3), q(70, 169), 3);
  auto rep = triple_boundedness_report(schottky_boundary_map(r, 3));
  REQUIRE(rep.window_minimum.size() == 3);
  CHECK(rep.pass);
  CHECK(rep.floor >= 1e-10);
  CHECK(rep.window_pairs[2] >= rep.window_pairs[0]);
  // Coarser separation, larger floor.
  CHECK(rep.window_minimum[0] >= rep.window_minimum[2]);
}

TEST_CASE("Anosov contraction along nested words") {
  const auto r2 = make_schottky(Rational(3), q(70, 169), 2);
  auto rep = anosov_contraction_report(r2, 6);
  CHECK(rep.monotone);
  CHECK(rep.pass);
  CHECK(rep.rate == doctest::Approx(-2.0 * std::log(3.0)).epsilon(0.10));

  const auto r3 = make_schottky(Rational(3), q(70, 169), 3);
  for (int letter = 0; letter < 4; ++letter) {
    auto rep3 = anosov_contraction_report(r3, 5, {}, letter);
    CHECK(rep3.pass);
    CHECK(rep3.rate < -0.05);
  }
  auto mixed = anosov_contraction_report(r3, 5, {2, 0}, 2);
  CHECK(mixed.pass);

  CHECK_THROWS_AS(anosov_contraction_report(r3, 4, {0}, 1), PoslabError);
  CHECK_THROWS_AS(anosov_contraction_report(r3, 4, {0, 1}, 0), PoslabError);
}
