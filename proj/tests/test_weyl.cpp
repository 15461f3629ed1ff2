#include <set>

#include "doctest.h"
#include "poslab/sampling.hpp"
#include "poslab/weyl.hpp"

using namespace poslab;

namespace {

// Oracle: u <= w iff some subword of a fixed reduced word of w multiplies to u.
std::set<Perm> lower_interval_by_subwords(const Perm& w) {
  const auto word = reduced_word(w);
  std::set<Perm> out;
  const std::size_t n = w.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << word.size()); ++mask) {
    std::vector<int> sub;
    for (std::size_t k = 0; k < word.size(); ++k)
      if (mask & (std::size_t{1} << k)) sub.push_back(word[k]);
    out.insert(from_word(n, sub));
  }
  return out;
}

MatrixQ random_upper(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<int> v(-4, 4);
  std::uniform_int_distribution<int> d(1, 3);
  MatrixQ b(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    b(r, r) = Rational(d(rng) * (v(rng) >= 0 ? 1 : -1), d(rng));
    for (std::size_t c = r + 1; c < n; ++c) b(r, c) = v(rng);
  }
  return b;
}

}  // namespace

TEST_CASE("permutation basics") {
  auto w0 = longest_perm(4);
  CHECK(inversions(w0) == 6);
  for (const Perm& p : all_permutations(4)) {
    CHECK(from_word(4, reduced_word(p)) == p);
    CHECK(static_cast<int>(reduced_word(p).size()) == inversions(p));
    CHECK(inversions(p) <= inversions(w0));
    if (p != w0) CHECK(inversions(p) < inversions(w0));
  }
  CHECK(involutions(3).size() == 4);
  CHECK(involutions(5).size() == 26);
}

TEST_CASE("bruhat_cell on identity and antidiagonal") {
  CHECK(bruhat_cell(MatrixQ::identity(3)).perm == identity_perm(3));
  MatrixQ a(3, 3);
  a(2, 0) = 1;
  a(1, 1) = -1;
  a(0, 2) = 1;
  CHECK(determinant(a) == 1);
  CHECK(bruhat_cell(a).perm == longest_perm(3));
  CHECK_THROWS_AS(bruhat_cell(MatrixD::identity(3)), PoslabError);
}

TEST_CASE("bruhat_cell recovers w from b1 P_w b2") {
  Rng rng(17);
  for (const Perm& w : all_permutations(4))
    for (int trial = 0; trial < 20; ++trial) {
      MatrixQ g = random_upper(4, rng) * permutation_matrix<Rational>(w) * random_upper(4, rng);
      CellLabel c = bruhat_cell(g);
      CHECK(c.perm == w);
      CHECK(c.length == inversions(w));
      CellLabel ci = bruhat_cell(inverse(g));
      CHECK(ci.perm == inverse_perm(w));
    }
}

TEST_CASE("Bruhat order agrees with the subword oracle in S3 and S4") {
  for (std::size_t n : {3u, 4u}) {
    const auto perms = all_permutations(n);
    for (const Perm& w : perms) {
      const auto lower = lower_interval_by_subwords(w);
      for (const Perm& u : perms) CHECK(bruhat_leq(u, w) == (lower.count(u) > 0));
    }
  }
  // s1 <= s1 s2, s1 s2 and s2 s1 incomparable
  const Perm s1 = from_word(3, {0});
  const Perm s1s2 = from_word(3, {0, 1});
  const Perm s2s1 = from_word(3, {1, 0});
  CHECK(bruhat_leq(s1, s1s2));
  CHECK_FALSE(bruhat_leq(s1s2, s2s1));
  CHECK(bruhat_leq(identity_perm(3), longest_perm(3)));
  CHECK_FALSE(bruhat_leq(longest_perm(2), identity_perm(2)));
}

TEST_CASE("closure semicontinuity along P_w + tE") {
  Rng rng(23);
  std::uniform_int_distribution<int> v(-3, 3);
  for (const Perm& w : all_permutations(3))
    for (int trial = 0; trial < 10; ++trial) {
      MatrixQ e(3, 3);
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) e(r, c) = v(rng);
      MatrixQ g1 = permutation_matrix<Rational>(w) + Rational(1, 7) * e;
      if (sgn(determinant(g1)) == 0) continue;
      // g(t) at t = 1/7 is in some cell s; the limit t -> 0 is P_w
      CHECK(bruhat_leq(w, bruhat_cell(g1).perm));
    }
}

TEST_CASE("involution lemma") {
  CHECK(check_involution_lemma(2).checked == 1);  // only the identity
  auto r3 = check_involution_lemma(3);
  CHECK(r3.checked == 3);
  CHECK(r3.pass());
  auto r5 = check_involution_lemma(5);
  CHECK(r5.checked == 25);
  CHECK(r5.pass());
  for (std::size_t n = 2; n <= 7; ++n) CHECK(check_involution_lemma(n).pass());
}

TEST_CASE("transversality scan") {
  auto idr = transversality_scan({MatrixQ::identity(3)}, 3);
  REQUIRE(idr.dominating_cell);
  CHECK(idr.dominating_cell->perm == identity_perm(3));
  CHECK_FALSE(idr.witness);

  MatrixQ d = MatrixQ::diagonal({Rational(2), Rational(1), Rational(1, 2)});
  MatrixQ g{{Rational(1), Rational(2), Rational(0)},
            {Rational(1), Rational(3), Rational(1)},
            {Rational(2), Rational(1), Rational(1)}};
  auto sr = transversality_scan({g * d * inverse(g)}, 3);
  CHECK(sr.witness);
  CHECK(bruhat_cell(*sr.witness).perm == longest_perm(3));

  MatrixQ u1 = MatrixQ::identity(3), u2 = MatrixQ::identity(3);
  u1(0, 1) = 1;
  u2(1, 2) = 2;
  u2(0, 2) = -1;
  auto ur = transversality_scan({u1, u2}, 4);
  REQUIRE(ur.dominating_cell);
  CHECK(ur.dominating_cell->perm == identity_perm(3));

  CHECK_THROWS_AS(transversality_scan({}, 2), PoslabError);
}
