#include "doctest.h"
#include "poslab/positivity.hpp"

using namespace poslab;

namespace {

MatrixQ unip3(long a, long b, long c) {
  MatrixQ u = MatrixQ::identity(3);
  u(0, 1) = a;
  u(0, 2) = b;
  u(1, 2) = c;
  return u;
}

FlagQ line(long x, long y) {
  MatrixQ m(2, 2);
  m(0, 0) = x;
  m(1, 0) = y;
  if (y != 0) m(0, 1) = 1; else m(1, 1) = 1;
  return make_flag(m);
}

}  // namespace

TEST_CASE("psi examples") {
  LusztigParams<Rational> p2{{1}, {Rational(1)}};
  MatrixQ e{{Rational(1), Rational(1)}, {Rational(0), Rational(1)}};
  CHECK(psi(p2) == e);

  LusztigParams<Rational> p3{{1, 2, 1}, {Rational(1), Rational(1), Rational(1)}};
  CHECK(psi(p3) == unip3(2, 1, 1));

  // (1,2) = a + c, (1,3) = ab, (2,3) = b
  const Rational a(3, 2), b(5), c(2, 7);
  auto u = psi(LusztigParams<Rational>{{1, 2, 1}, {a, b, c}});
  CHECK(u(0, 1) == a + c);
  CHECK(u(0, 2) == a * b);
  CHECK(u(1, 2) == b);

  CHECK_THROWS_AS(psi(LusztigParams<Rational>{{1, 2, 1}, {a, Rational(0), c}}), PoslabError);
  CHECK_THROWS_AS(psi(LusztigParams<Rational>{{1, 1, 2}, {a, b, c}}), PoslabError);
  CHECK(default_reduced_word(4) == Word{1, 2, 1, 3, 2, 1});
  CHECK(is_reduced_word_for_w0(4, {3, 2, 1, 3, 2, 3}));
}

TEST_CASE("semigroup membership examples") {
  CHECK_FALSE(in_positive_semigroup(MatrixQ::identity(3)));
  CHECK_FALSE(in_positive_semigroup(unip3(1, 1, 1)));  // rows {1,2}, cols {2,3} vanishes
  CHECK(in_positive_semigroup(unip3(2, 1, 1)));
  Rng rng(1);
  for (std::size_t n : {3u, 4u})
    for (int k = 0; k < 200; ++k) CHECK(in_positive_semigroup(psi(random_params<Rational>(n, rng))));
}

TEST_CASE("factorize examples and roundtrips") {
  MatrixQ u2{{Rational(1), Rational(3)}, {Rational(0), Rational(1)}};
  CHECK(factorize(u2).t == std::vector<Rational>{Rational(3)});
  auto p = factorize(unip3(2, 1, 1), {1, 2, 1});
  CHECK(p.t == std::vector<Rational>{Rational(1), Rational(1), Rational(1)});
  CHECK_THROWS_AS(factorize(unip3(1, 1, 1)), PoslabError);

  Rng rng(2);
  for (std::size_t n : {2u, 3u, 4u, 5u})
    for (int k = 0; k < 100; ++k) {
      auto q = random_params<Rational>(n, rng);
      auto u = psi(q);
      auto f = factorize(u);
      CHECK(f.t == q.t);
      CHECK(psi(f) == u);
    }
  // a non-default reduced word
  for (int k = 0; k < 50; ++k) {
    auto q = random_params<Rational>(4, rng, {3, 2, 3, 1, 2, 3});
    CHECK(factorize(psi(q), q.word).t == q.t);
  }
}

TEST_CASE("float factorization is accurate") {
  Rng rng(3);
  for (std::size_t n : {3u, 4u, 5u})
    for (int k = 0; k < 100; ++k) {
      auto q = random_params<double>(n, rng);
      auto f = factorize(psi(q));
      for (std::size_t i = 0; i < q.t.size(); ++i) CHECK(f.t[i] == doctest::Approx(q.t[i]).epsilon(1e-8));
    }
}

TEST_CASE("semigroup closure, torus invariance and salience") {
  Rng rng(4);
  for (std::size_t n : {2u, 3u, 4u})
    for (int k = 0; k < 100; ++k) {
      auto u = psi(random_params<Rational>(n, rng));
      auto v = psi(random_params<Rational>(n, rng));
      CHECK(in_positive_semigroup(u * v));
      CHECK_FALSE(in_positive_semigroup(inverse(u)));
      std::vector<Rational> d;
      for (std::size_t i = 0; i < n; ++i) d.push_back(lognormal_scalar<Rational>(rng));
      MatrixQ D = MatrixQ::diagonal(d);
      CHECK(in_positive_semigroup(D * u * inverse(D)));
    }
}

TEST_CASE("salience on a closed-cone grid") {
  // u v = 1 with u, v in the closure forces u = v = 1
  const std::vector<Rational> grid{Rational(0), Rational(1, 2), Rational(2)};
  std::vector<MatrixQ> closure;
  for (auto& a : grid)
    for (auto& b : grid)
      for (auto& c : grid) closure.push_back(psi_closed(LusztigParams<Rational>{{1, 2, 1}, {a, b, c}}));
  const MatrixQ id = MatrixQ::identity(3);
  for (auto& u : closure)
    for (auto& v : closure)
      if (u * v == id) {
        CHECK(u == id);
        CHECK(v == id);
      }
}

TEST_CASE("psi is injective on a grid") {
  const std::vector<Rational> grid{Rational(1, 3), Rational(1), Rational(2)};
  std::vector<std::pair<std::vector<Rational>, MatrixQ>> seen;
  for (auto& a : grid)
    for (auto& b : grid)
      for (auto& c : grid) {
        std::vector<Rational> t{a, b, c};
        MatrixQ u = psi(LusztigParams<Rational>{{1, 2, 1}, t});
        for (auto& [s, v] : seen) CHECK((v == u) == (s == t));
        seen.emplace_back(t, u);
      }
}

TEST_CASE("component certificates in P^1") {
  auto inf = line(1, 0), zero = line(0, 1);
  auto c = component_certificate(inf, zero, line(1, 1));
  REQUIRE(c);
  CHECK(c->side == Side::Plus);
  auto m = component_certificate(inf, zero, line(-1, 1));
  REQUIRE(m);
  CHECK(m->side == Side::Minus);
  CHECK(*m == opposite_certificate(*c));
  // every point transverse to both is in a diamond
  for (long x = -5; x <= 5; ++x)
    if (x != 0) CHECK(component_certificate(inf, zero, line(x, 1)));
}

TEST_CASE("component certificates at n=3") {
  const auto a = standard_flag<Rational>(3);
  const auto b = antistandard_flag<Rational>(3);
  Rng rng(6);
  for (int k = 0; k < 50; ++k) {
    auto c = act(psi(random_params<Rational>(3, rng)), b);
    auto cert = component_certificate(a, b, c);
    REQUIRE(cert);
    CHECK(cert->side == Side::Plus);
    CHECK(cert->sign_class == trivial_sign_class(3));
  }
  // mixed superdiagonal signs, generic: u12 > 0, u23 < 0 with positive (1,3)
  auto mixed = act(unip3(1, 3, -1), b);
  CHECK_FALSE(component_certificate(a, b, mixed));
  CHECK_THROWS_AS(component_certificate(a, b, a), PoslabError);
}

TEST_CASE("certificates identify diamonds") {
  // Sign conjugates of N and N^{-1} by the SL torus. Conjugation by +-diag(1,-1,1,...)
  // maps N^{-1} onto N, so whenever one of those lies in SL the labels collapse.
  for (auto [n, expected] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 4}, {4, 4}}) {
    const auto a = standard_flag<Rational>(n);
    const auto b = antistandard_flag<Rational>(n);
    Rng rng(8);
    std::vector<Certificate<Rational>> distinct;
    for (const auto& sc : sign_classes(n))
      for (Side side : {Side::Plus, Side::Minus}) {
        auto u = psi(random_params<Rational>(n, rng));
        if (side == Side::Minus) u = inverse(u);
        auto eps = full_signs(sc);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c)
            if (eps[r] * eps[c] < 0) u(r, c) = -u(r, c);
        auto x = act(u, b);
        auto cert = component_certificate(a, b, x);
        REQUIRE(cert);
        Diamond<Rational> d = make_diamond(a, b, x);
        for (int k = 0; k < 5; ++k) CHECK(diamond_contains(d, sample_diamond(d, rng)));
        if (std::find(distinct.begin(), distinct.end(), *cert) == distinct.end()) distinct.push_back(*cert);
      }
    CHECK(distinct.size() == expected);
  }
}

TEST_CASE("diamonds and their opposites") {
  Rng rng(10);
  for (std::size_t n : {2u, 3u, 4u}) {
    auto a = random_flag<Rational>(n, rng);
    auto b = random_flag<Rational>(n, rng);
    while (!is_transverse(a, b)) b = random_flag<Rational>(n, rng);
    auto fr = normalize_pair(a, b, trivial_sign_class(n));
    auto c = act(inverse(fr.g) * psi(random_params<Rational>(n, rng)), antistandard_flag<Rational>(n));
    auto d = make_diamond(a, b, c);
    auto o = opposite(d);
    CHECK(diamond_contains(d, c));
    CHECK_FALSE(diamond_contains(d, o.witness));
    CHECK(diamond_contains(o, o.witness));
    CHECK(opposite(o).cert == d.cert);
    for (int k = 0; k < 20; ++k) {
      auto x = sample_diamond(d, rng);
      auto y = sample_diamond(o, rng);
      CHECK(diamond_contains(d, x));
      CHECK_FALSE(diamond_contains(d, y));
      CHECK(is_transverse(x, y));
    }
  }
}

TEST_CASE("membership is frame independent") {
  Rng rng(12);
  const auto a = standard_flag<Rational>(3), b = antistandard_flag<Rational>(3);
  for (int k = 0; k < 30; ++k) {
    auto c = act(psi(random_params<Rational>(3, rng)), b);
    auto x = act(inverse(psi(random_params<Rational>(3, rng))), b);
    auto g = random_sl<Rational>(3, rng);
    auto d = make_diamond(act(g, a), act(g, b), act(g, c));
    CHECK(diamond_contains(d, act(g, c)));
    CHECK_FALSE(diamond_contains(d, act(g, x)));
  }
}

TEST_CASE("nesting") {
  Rng rng(13);
  auto inf = line(1, 0), zero = line(0, 1), one = line(1, 1);
  CHECK(nesting_check(inf, zero, one, 50, rng));
  // V(c,b) is the interval (0,1)
  auto vcb = opposite(make_diamond(one, zero, inf));
  CHECK(diamond_contains(vcb, make_flag(MatrixQ{{Rational(1, 2), Rational(1)}, {Rational(1), Rational(0)}})));
  CHECK_FALSE(diamond_contains(vcb, line(2, 1)));
  CHECK(nesting_check(inf, zero, one, 0, rng));

  const auto a = standard_flag<Rational>(3), b = antistandard_flag<Rational>(3);
  auto c = act(psi(random_params<Rational>(3, rng)), b);
  CHECK(nesting_check(a, b, c, 100, rng));
}
