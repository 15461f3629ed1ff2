#include "doctest.h"
#include "poslab/numeric.hpp"

using namespace poslab;

TEST_CASE("determinant and inverse agree in both modes") {
  MatrixQ m{{Rational(2), Rational(1), Rational(0)},
            {Rational(1), Rational(3), Rational(1)},
            {Rational(0), Rational(1), Rational(4)}};
  CHECK(determinant(m) == 18);  // 2*(12-1) - 1*(4-0)
  CHECK(inverse(m) * m == MatrixQ::identity(3));

  MatrixD d = to_double(m);
  CHECK(determinant(d) == doctest::Approx(18.0));
  MatrixD e = inverse(d) * d - MatrixD::identity(3);
  CHECK(frobenius_norm(e) < 1e-14);
}

TEST_CASE("zero leading pivot needs a row swap") {
  MatrixQ m{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
  CHECK(determinant(m) == -1);
  CHECK(rank(m) == 2);
  MatrixQ s{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
  CHECK(determinant(s) == 0);
  CHECK(rank(s) == 1);
  CHECK_THROWS_AS(inverse(s), PoslabError);
}

TEST_CASE("kernel vector of an n x (n+1) matrix") {
  MatrixQ m{{Rational(1), Rational(0), Rational(2)}, {Rational(0), Rational(1), Rational(3)}};
  auto k = kernel_vector(m);
  // (2, 3, -1) up to scale
  CHECK(k[0] * 3 == k[1] * 2);
  CHECK(k[2] * -2 == k[0]);
  for (std::size_t r = 0; r < 2; ++r) {
    Rational s = 0;
    for (std::size_t c = 0; c < 3; ++c) s += m(r, c) * k[c];
    CHECK(s == 0);
  }
}

TEST_CASE("float sign refuses values inside the tolerance") {
  CHECK(Field<double>::sign(1e-3) == 1);
  CHECK(Field<double>::sign(-2.0) == -1);
  CHECK_THROWS_AS(Field<double>::sign(1e-12), PoslabError);
  set_sign_tolerance(1e-14);
  CHECK(Field<double>::sign(1e-12) == 1);
  set_sign_tolerance(kDefaultSignTolerance);
}

TEST_CASE("rational helpers") {
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(format_rational(Rational(-3, 2)) == "-3/2");
  CHECK(dyadic_round(0.5) == Rational(1, 2));
  CHECK(rational_approx(0.333333333, 100) == Rational(1, 3));
  CHECK(Rational(0.1) != Rational(1, 10));  // exact binary value of the double
  CHECK(subsets(4, 2).size() == 6);
  CHECK(subsets(5, 0).size() == 1);
}
