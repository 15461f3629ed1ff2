#include "doctest.h"
#include "poslab/flags.hpp"
#include "poslab/positivity.hpp"
#include "poslab/sampling.hpp"

using namespace poslab;

namespace {
MatrixQ mq(std::initializer_list<std::initializer_list<long>> rows) {
  MatrixQ m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (auto& row : rows) {
    std::size_t c = 0;
    for (long v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}
}  // namespace

TEST_CASE("standard and antistandard flags") {
  CHECK(standard_flag<Rational>(3).basis == MatrixQ::identity(3));
  auto w0 = longest_element_matrix<Rational>(3);
  CHECK(determinant(w0) == 1);
  CHECK(flags_equal(act(w0, standard_flag<Rational>(3)), antistandard_flag<Rational>(3)));
  auto w4 = longest_element_matrix<Rational>(4);
  CHECK(determinant(w4) == 1);
  CHECK(flags_equal(act(w4, standard_flag<Rational>(4)), antistandard_flag<Rational>(4)));
}

TEST_CASE("transversality examples") {
  auto s = standard_flag<Rational>(3);
  auto a = antistandard_flag<Rational>(3);
  CHECK(is_transverse(s, a));
  CHECK_FALSE(is_transverse(s, s));
  // columns (1,1,1),(0,1,2),(0,0,1): determinants 1 and 1 against e1 / e1,e2
  auto b = make_flag(mq({{1, 0, 0}, {1, 1, 0}, {1, 2, 1}}));
  CHECK(is_transverse(s, b));
}

TEST_CASE("canonical form is invariant under upper triangular change of basis") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = random_flag<Rational>(4, rng);
    MatrixQ t = MatrixQ::identity(4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = r; c < 4; ++c) {
        t(r, c) = Rational(static_cast<long>((r + 2 * c + trial) % 5) + 1, 3);
        t(r, c).canonicalize();
      }
    // rescale so det = 1
    t(0, 0) /= determinant(t);
    CHECK(flags_equal(make_flag(f.basis * t), f));
  }
}

TEST_CASE("transversality is symmetric and G-invariant") {
  Rng rng(11);
  int transverse = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto a = random_flag<Rational>(3, rng, 2);
    auto b = random_flag<Rational>(3, rng, 2);
    const bool t = is_transverse(a, b);
    transverse += t;
    CHECK(t == is_transverse(b, a));
    if (trial % 10 == 0) {
      auto g = random_sl<Rational>(3, rng);
      CHECK(t == is_transverse(act(g, a), act(g, b)));
    }
  }
  CHECK(transverse > 100);
  CHECK(transverse < 1000);
}

TEST_CASE("act is an action") {
  Rng rng(3);
  auto x = random_flag<Rational>(3, rng);
  auto g = random_sl<Rational>(3, rng);
  auto h = random_sl<Rational>(3, rng);
  CHECK(flags_equal(act(g * h, x), act(g, act(h, x))));
  CHECK(flags_equal(act(MatrixQ::identity(3), x), x));
  CHECK(flags_equal(act(g, act(inverse(g), x)), x));
  // exp(e_1) fixes the first line of the standard flag
  auto e1 = elementary<Rational>(3, 1, Rational(1));
  auto y = act(e1, standard_flag<Rational>(3));
  CHECK(flags_equal(y, standard_flag<Rational>(3)));
}

TEST_CASE("normalize_pair roundtrip for every sign class") {
  Rng rng(5);
  auto s = standard_flag<Rational>(3);
  auto anti = antistandard_flag<Rational>(3);
  auto id = normalize_pair(s, anti, trivial_sign_class(3));
  CHECK(id.g == MatrixQ::identity(3));
  int done = 0;
  while (done < 50) {
    auto a = random_flag<Rational>(3, rng);
    auto b = random_flag<Rational>(3, rng);
    if (!is_transverse(a, b)) continue;
    ++done;
    for (const auto& sc : sign_classes(3)) {
      auto fr = normalize_pair(a, b, sc);
      CHECK(determinant(fr.g) == 1);
      CHECK(flags_equal(act(fr.g, a), s));
      CHECK(flags_equal(act(fr.g, b), anti));
      CHECK(flags_equal(act(inverse(fr.g), s), a));
    }
  }
  CHECK_THROWS_AS(normalize_pair(s, s, trivial_sign_class(3)), PoslabError);
}

TEST_CASE("sign classes enumerate the torus components") {
  CHECK(sign_classes(2).size() == 2);
  CHECK(sign_classes(4).size() == 8);
  CHECK(sign_classes(4).front() == trivial_sign_class(4));
}

TEST_CASE("unipotent coordinate") {
  auto s = standard_flag<Rational>(3);
  auto anti = antistandard_flag<Rational>(3);
  CHECK(unipotent_coordinate(MatrixQ::identity(3), anti) == MatrixQ::identity(3));
  auto u = mq({{1, 2, 5}, {0, 1, 3}, {0, 0, 1}});
  auto c = act(u, anti);
  CHECK(unipotent_coordinate(MatrixQ::identity(3), c) == u);
  CHECK_THROWS_AS(unipotent_coordinate(MatrixQ::identity(3), s), PoslabError);
}

TEST_CASE("float flags") {
  Rng rng(9);
  auto f = random_flag<Rational>(4, rng);
  auto fd = to_double(f);
  CHECK(flag_distance(fd, fd) < 1e-14);
  CHECK(flag_distance(to_double(rationalize(fd, 50)), fd) < 1e-13);
  CHECK(flag_distance(standard_flag<double>(3), antistandard_flag<double>(3)) > 0.5);
  CHECK(is_transverse(standard_flag<double>(3), antistandard_flag<double>(3)));
  CHECK_THROWS_AS(is_transverse(standard_flag<double>(3), standard_flag<double>(3)), PoslabError);
}
