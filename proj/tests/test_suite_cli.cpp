#include <set>

#include "doctest.h"
#include "poslab/errors.hpp"
#include "poslab/suite.hpp"

using namespace poslab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const PoslabError& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

SuiteConfig small(std::size_t n = 3, std::size_t trials = 10) {
  SuiteConfig c;
  c.n = n;
  c.trials = trials;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  SuiteConfig c;
  CHECK_NOTHROW(validate(c));
  c.n = 1;
  CHECK(code_of([&] { validate(c); }) == ErrorCode::ConfigInvalid);
  c.n = 7;
  CHECK(code_of([&] { validate(c); }) == ErrorCode::ConfigInvalid);
  c.n = 3;
  c.tol = 0.0;
  CHECK(code_of([&] { run_suite("bruhat", c); }) == ErrorCode::ConfigInvalid);
  c.tol = 1e-12;
  c.workers = 0;
  CHECK(code_of([&] { validate(c); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { run_suite("nope", SuiteConfig{}); }) == ErrorCode::UnknownSuite);
  CHECK(code_of([] { suite_properties("all"); }) == ErrorCode::UnknownSuite);
}

TEST_CASE("registry lists unique property names per suite") {
  std::set<std::string> names;
  std::size_t total = 0;
  for (const auto& s : module_suites()) {
    const auto props = suite_properties(s);
    CHECK(!props.empty());
    total += props.size();
    names.insert(props.begin(), props.end());
  }
  CHECK(names.size() == total);
  CHECK(module_suites().size() == 5);
}

TEST_CASE("zero trials give a vacuous pass with zero counts") {
  auto c = small(3, 0);
  const auto rep = run_suite("all", c);
  CHECK(rep.pass());
  CHECK(rep.sections.size() == 5);
  for (const auto& s : rep.sections)
    for (const auto& p : s.properties) {
      CHECK_MESSAGE(p.trials == 0, p.name);
      CHECK(p.failures == 0);
    }
  const Json j = to_json(rep);
  CHECK(j["schema"] == "poslab/1");
  CHECK(j["pass"] == true);
  CHECK(j["summary"]["failed"] == 0);
}

TEST_CASE("small module suites pass") {
  for (const auto& s : {"combinatorial", "circles", "bruhat"}) {
    const auto rep = run_suite(s, small());
    for (const auto& p : rep.sections.front().properties) CHECK_MESSAGE(p.pass(), p.name << " " << p.error_message);
  }
  const auto bruhat4 = run_suite("bruhat", small(4, 50));
  CHECK(bruhat4.pass());
  // float mode at n = 3
  auto f = small();
  f.mode = Mode::Float;
  CHECK(run_suite("combinatorial", f).pass());
  CHECK(run_suite("circles", f).pass());
}

TEST_CASE("only filter and failure reporting") {
  const auto rep = run_suite("boundary", small(2), {"schottky.ping_pong", "anosov.mobius_rate"});
  REQUIRE(rep.sections.size() == 1);
  REQUIRE(rep.sections[0].properties.size() == 2);
  CHECK(rep.pass());
  CHECK(rep.sections[0].properties[0].stats["rotation"] == "70/169");
  const auto none = run_suite("metrics", small(), {"no.such.property"});
  CHECK(none.sections[0].properties.empty());
  CHECK(none.pass());
}

TEST_CASE("reports are byte-deterministic and seed-dependent") {
  auto c = small(3, 20);
  const std::string a = to_json(run_suite("combinatorial", c, {"semigroup.closure", "configuration.exclusion"})).dump();
  const std::string b = to_json(run_suite("combinatorial", c, {"semigroup.closure", "configuration.exclusion"})).dump();
  CHECK(a == b);
  c.seed = 7;
  const std::string d = to_json(run_suite("combinatorial", c, {"semigroup.closure", "configuration.exclusion"})).dump();
  CHECK(a != d);
}

TEST_CASE("tolerance override is scoped to the run") {
  const double before = sign_tolerance();
  auto c = small(3, 2);
  c.tol = 1e-12;
  c.mode = Mode::Float;
  run_suite("circles", c, {"circle.one_parameter"});
  CHECK(sign_tolerance() == before);
  CHECK(to_json(c)["tol"] == 1e-12);
  CHECK(to_json(SuiteConfig{})["tol"].is_null());
}

TEST_CASE("rational json") {
  CHECK(rational_from_json(Json("3/6")) == Rational(1, 2));
  CHECK(rational_from_json(Json("-1.25")) == Rational(-5, 4));
  CHECK(rational_from_json(Json("0.1")) == Rational(1, 10));
  CHECK(rational_from_json(Json(7)) == 7);
  CHECK(rational_from_json(Json(0.5)) == Rational(1, 2));
  CHECK(rational_from_json(Json("2.5e1")) == 25);
  CHECK(to_json(Rational(-2, 3)) == "-2/3");
  CHECK(code_of([] { rational_from_json(Json("x")); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { rational_from_json(Json::array()); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("flag and matrix json roundtrip") {
  Rng rng(5);
  const auto f = random_flag<Rational>(4, rng);
  const Json j = to_json(f);
  CHECK(j["mode"] == "exact");
  CHECK(flags_equal(flag_q_from_json(j), f));
  CHECK(flags_equal(flag_q_from_json(j["basis"]), f));
  const auto fd = to_double(f);
  const Json jd = to_json(fd);
  CHECK(jd["mode"] == "float");
  CHECK(flag_distance(flag_d_from_json(jd), fd) < 1e-15);
  CHECK(flag_distance(flag_d_from_json(j), fd) < 1e-12);
  CHECK(code_of([] { flag_q_from_json(Json::parse(R"([["1","2"],["2","4"]])")); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { matrix_q_from_json(Json::parse(R"([["1","2"],["2"]])")); }) == ErrorCode::InvalidArgument);
  CHECK(to_json(Perm{2, 0, 1}) == Json::parse("[3,1,2]"));
  CHECK(to_json(make_label(Perm{1, 0}))["length"] == 1);
}

TEST_CASE("sample and schottky json roundtrip") {
  const auto s = circle_sample<double>(3, {Rational(1, 3), Rational(0), Rational(1, 7)});
  const auto back = cyclic_sample_from_json(to_json(s));
  REQUIRE(back.entries.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.entries[i].angle == s.entries[i].angle);
    CHECK(flag_distance(back.entries[i].flag, s.entries[i].flag) < 1e-15);
  }
  const auto rep = make_schottky(Rational(3), Rational(70, 169), 3);
  const Json rj = to_json(rep);
  CHECK(rj["ping_pong_certified"] == true);
  const auto again = schottky_from_json(rj);
  CHECK(again.gens[2] == rep.gens[2]);
  CHECK(code_of([] { read_json_file("/nonexistent/file.json"); }) == ErrorCode::ConfigInvalid);
}
