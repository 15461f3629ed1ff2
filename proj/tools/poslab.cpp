// poslab: command-line front end. Every command prints one JSON document;
// exit status is 0 on success, 1 when a check fails, 2 on errors.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "poslab/errors.hpp"
#include "poslab/suite.hpp"

using namespace poslab;

namespace {

struct Global {
  std::size_t n = 3;
  std::size_t trials = 200;
  std::optional<std::uint64_t> seed;
  std::string mode = "exact";
  std::optional<double> tol;
  std::size_t workers = 1;
  std::string out;
};

SuiteConfig make_config(const Global& g) {
  SuiteConfig c;
  c.n = g.n;
  c.trials = g.trials;
  c.mode = g.mode == "float" ? Mode::Float : Mode::Exact;
  c.tol = g.tol;
  c.workers = g.workers;
  if (g.seed) {
    c.seed = *g.seed;
  } else if (const char* env = std::getenv("POSLAB_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      fail(ErrorCode::ConfigInvalid, "POSLAB_SEED is not an unsigned integer");
    }
  }
  validate(c);
  return c;
}

bool exact(const Global& g) { return g.mode == "exact"; }

// A file holds one flag or an array of flags.
template <class T>
std::vector<Flag<T>> read_flags(const std::vector<std::string>& files) {
  std::vector<Flag<T>> out;
  for (const auto& f : files) {
    const Json j = read_json_file(f);
    const bool many = j.is_array() && !j.empty() && (j.front().is_object() || (j.front().is_array() && !j.front().empty() && j.front().front().is_array()));
    const std::vector<Json> items = many ? std::vector<Json>(j.begin(), j.end()) : std::vector<Json>{j};
    for (const auto& item : items) {
      if constexpr (std::is_same_v<T, Rational>)
        out.push_back(flag_q_from_json(item));
      else
        out.push_back(flag_d_from_json(item));
    }
  }
  return out;
}

template <class T>
Flag<T> read_flag(const std::string& file) {
  auto v = read_flags<T>({file});
  require(v.size() == 1, ErrorCode::InvalidArgument, file + " must hold exactly one flag");
  return v.front();
}

// {"minus","zero","plus"} or an array of three flags
Tripod<double> read_tripod(const std::string& file) {
  const Json j = read_json_file(file);
  if (j.is_object() && j.contains("zero"))
    return make_tripod(flag_d_from_json(j.at("minus")), flag_d_from_json(j.at("zero")), flag_d_from_json(j.at("plus")));
  const auto f = read_flags<double>({file});
  require(f.size() == 3, ErrorCode::InvalidArgument, "a tripod needs three flags");
  return make_tripod(f[0], f[1], f[2]);
}

std::vector<Rational> parse_turns(const std::string& list) {
  std::vector<Rational> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(rational_from_json(Json(item)));
  require(!out.empty(), ErrorCode::InvalidArgument, "no points given");
  return out;
}

template <class T>
Json check_points(const std::vector<Flag<T>>& pts, std::size_t want, bool& ok) {
  require(want == 0 ? pts.size() >= 3 : pts.size() == want, ErrorCode::InvalidArgument,
          want ? "expected " + std::to_string(want) + " flags" : "expected at least three flags");
  if (want == 3) ok = is_positive_triple(pts[0], pts[1], pts[2]);
  else if (want == 4) ok = is_positive_quadruple(pts[0], pts[1], pts[2], pts[3]);
  else ok = is_positive_configuration(pts);
  Json j{{"n", pts.front().n()}, {"points", pts.size()}, {"positive", ok}};
  if (want == 3) {
    if (auto cert = component_certificate(pts[0], pts[1], pts[2])) j["certificate"] = to_json(*cert);
  }
  return j;
}

template <class T>
Json diamond_membership(const std::string& a, const std::string& b, const std::string& c, const std::string& x,
                        bool& ok) {
  const auto d = make_diamond(read_flag<T>(a), read_flag<T>(b), read_flag<T>(c));
  Json j{{"n", d.a.n()}, {"certificate", to_json(d.cert)}};
  ok = true;
  if (!x.empty()) {
    const auto fx = read_flag<T>(x);
    ok = diamond_contains(d, fx);
    j["contains"] = ok;
    if (auto cert = component_certificate(d.a, fx, d.b)) j["point_certificate"] = to_json(*cert);
  }
  return j;
}

template <class T>
Json nesting(const SuiteConfig& cfg, std::size_t samples, bool& ok) {
  Rng rng(cfg.seed);
  const auto t = random_positive_triple<T>(cfg.n, rng);
  ok = nesting_check(t[0], t[2], t[1], samples, rng);
  return Json{{"n", cfg.n}, {"samples", samples}, {"seed", cfg.seed}, {"pass", ok}};
}

template <class T>
Json circle_points(std::size_t n, const std::vector<Rational>& turns) {
  Json entries = Json::array();
  for (const auto& th : turns) {
    Json flag;
    if constexpr (std::is_same_v<T, Rational>)
      flag = to_json(circle_map(turn_point(th), n));
    else
      flag = to_json(circle_map(turn_point(th.get_d()), n));
    entries.push_back(Json{{"angle", th.get_str()}, {"flag", flag}});
  }
  return Json{{"n", n}, {"entries", entries}};
}

// every k-subset of an m-point turn grid, in cyclic order, must be positive
template <class T>
Json circle_config_check(std::size_t n, std::size_t k, std::size_t m, bool& ok) {
  require(k >= 3 && k <= m, ErrorCode::InvalidArgument, "need 3 <= k <= grid");
  std::vector<Flag<T>> pts;
  for (std::size_t i = 0; i < m; ++i) {
    Rational th(static_cast<long>(i), static_cast<long>(m));
    th.canonicalize();
    if constexpr (std::is_same_v<T, Rational>)
      pts.push_back(circle_map(turn_point(th), n));
    else
      pts.push_back(circle_map(turn_point(th.get_d()), n));
  }
  PositivityOracle<T> oracle(pts);
  std::size_t checked = 0, failures = 0;
  for (const auto& sub : subsets(m, k)) {
    bool good = true;
    for (const auto& t : subsets(k, 3)) good = good && oracle.triple(sub[t[0]], sub[t[1]], sub[t[2]]);
    for (const auto& t : subsets(k, 4)) good = good && oracle.quadruple(sub[t[0]], sub[t[1]], sub[t[2]], sub[t[3]]);
    ++checked;
    if (!good) ++failures;
  }
  ok = failures == 0;
  return Json{{"n", n}, {"k", k}, {"grid", m}, {"subsets_checked", checked}, {"failures", failures}, {"pass", ok}};
}

Json word_list(const std::vector<FreeWord>& ws) {
  Json j = Json::array();
  for (const auto& w : ws) j.push_back(word_name(w));
  return j;
}

void emit(const Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) fail(ErrorCode::ConfigInvalid, "cannot write " + out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positivity lab for SL(n, R) with full flags"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--n", g.n, "dimension (2..6)");
  app.add_option("--trials", g.trials, "trials per property");
  app.add_option("--seed", g.seed, "random seed (fallback: POSLAB_SEED, then 42)");
  app.add_option("--mode", g.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--tol", g.tol, "float sign tolerance");
  app.add_option("--workers", g.workers, "worker count (runs are sequential)");
  app.add_option("--out", g.out, "write the JSON report to FILE");

  std::string matrix_file, gens_file, fa, fb, fc, fx, triple_file, p_file, q_file, gamma_file, tripod_file, rep_file,
      sample_file, points, theta_turn, side = "left", suite_name, only;
  std::vector<std::string> flag_files;
  int depth = 3;
  std::size_t samples = 200, k = 4, grid = 8, m_max = 5, L = 4;
  double radius = 1.0, lambda = 3.0, theta = 0.7853981633974483;
  int letter = 0;

  auto* bc = app.add_subcommand("bruhat-cell", "Bruhat cell of an invertible matrix");
  bc->add_option("--matrix", matrix_file)->required();
  auto* iw = app.add_subcommand("invw-check", "involution lemma, exhaustive at --n");
  auto* ts = app.add_subcommand("transversality-scan", "search words in the generators for an open-cell element");
  ts->add_option("--gens", gens_file)->required();
  ts->add_option("--depth", depth);
  auto* dm = app.add_subcommand("diamond-membership", "diamond over (a, b) containing c; optional membership of x");
  dm->add_option("--a", fa)->required();
  dm->add_option("--b", fb)->required();
  dm->add_option("--c", fc)->required();
  dm->add_option("--x", fx);
  auto* nc = app.add_subcommand("nesting-check", "sampled nesting for a random positive triple");
  nc->add_option("--samples", samples);
  auto* ct = app.add_subcommand("check-triple", "positivity of a triple of flags");
  ct->add_option("files", flag_files)->required();
  auto* cq = app.add_subcommand("check-quad", "positivity of a quadruple of flags");
  cq->add_option("files", flag_files)->required();
  auto* cc = app.add_subcommand("check-config", "positivity of a cyclic configuration");
  cc->add_option("files", flag_files)->required();
  auto* su = app.add_subcommand("suite", "run a property suite");
  su->add_option("name", suite_name)->required();
  su->add_option("--only", only, "comma-separated property names");
  auto* ci = app.add_subcommand("circle", "flags on the principal circle at the given turns");
  ci->add_option("--points", points)->required();
  auto* ck = app.add_subcommand("circle-config-check", "all k-subsets of a circle grid are positive");
  ck->add_option("--k", k);
  ck->add_option("--grid", grid);
  auto* td = app.add_subcommand("tripod-distance", "tripod distance between two flags");
  td->add_option("--tripod", tripod_file, "tripod (default: standard)");
  td->add_option("--p", p_file)->required();
  td->add_option("--q", q_file)->required();
  auto* tn = app.add_subcommand("tripod-norm", "tripod norm of a positive triple");
  tn->add_option("--triple", triple_file)->required();
  auto* co = app.add_subcommand("contraction", "metric contraction along gamma^m");
  co->add_option("--gamma", gamma_file)->required();
  co->add_option("--m-max", m_max);
  co->add_option("--radius", radius);
  co->add_option("--tripod", tripod_file, "initial tripod (default: principal circle tripod)");
  auto* sc = app.add_subcommand("schottky", "Schottky representation and its boundary sample");
  sc->add_option("--lambda", lambda);
  sc->add_option("--theta", theta, "rotation angle in radians");
  sc->add_option("--depth", L);
  auto* an = app.add_subcommand("anosov-report", "cylinder diameter decay");
  an->add_option("--rep", rep_file)->required();
  an->add_option("--depth", L);
  an->add_option("--letter", letter, "0..3 for a, A, b, B");
  auto* ex = app.add_subcommand("extend", "one-sided limit of a cyclic sample");
  ex->add_option("--sample", sample_file)->required();
  ex->add_option("--theta", theta_turn, "turn in [0, 1), rational")->required();
  ex->add_option("--side", side)->check(CLI::IsMember({"left", "right"}));

  CLI11_PARSE(app, argc, argv);

  bool ok = true;
  try {
    const SuiteConfig cfg = make_config(g);
    Json j;
    if (*bc) {
      j = Json{{"cell", to_json(bruhat_cell(matrix_q_from_json(read_json_file(matrix_file))))}};
    } else if (*iw) {
      const auto rep = check_involution_lemma(cfg.n);
      Json failing = Json::array();
      for (const auto& p : rep.failing) failing.push_back(to_json(p));
      ok = rep.pass();
      j = Json{{"n", rep.n}, {"checked", rep.checked}, {"failures", rep.failures}, {"failing", failing}, {"pass", ok}};
    } else if (*ts) {
      const Json gj = read_json_file(gens_file);
      std::vector<MatrixQ> gens;
      for (const auto& m : gj.is_object() ? gj.at("generators") : gj) gens.push_back(matrix_q_from_json(m));
      const auto rep = transversality_scan(gens, depth);
      j = Json{{"depth", depth}, {"samples_checked", rep.samples_checked}};
      j["witness"] = rep.witness ? to_json(*rep.witness) : Json(nullptr);
      j["witness_word"] = rep.witness_word ? Json(*rep.witness_word) : Json(nullptr);
      j["dominating_cell"] = rep.dominating_cell ? to_json(*rep.dominating_cell) : Json(nullptr);
    } else if (*dm) {
      j = exact(g) ? diamond_membership<Rational>(fa, fb, fc, fx, ok) : diamond_membership<double>(fa, fb, fc, fx, ok);
    } else if (*nc) {
      j = exact(g) ? nesting<Rational>(cfg, samples, ok) : nesting<double>(cfg, samples, ok);
    } else if (*ct || *cq || *cc) {
      const std::size_t want = *ct ? 3 : *cq ? 4 : 0;
      j = exact(g) ? check_points(read_flags<Rational>(flag_files), want, ok)
                   : check_points(read_flags<double>(flag_files), want, ok);
    } else if (*su) {
      std::vector<std::string> filter;
      std::stringstream ss(only);
      for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) filter.push_back(item);
      const auto report = run_suite(suite_name, cfg, filter);
      ok = report.pass();
      j = to_json(report);
    } else if (*ci) {
      j = exact(g) ? circle_points<Rational>(cfg.n, parse_turns(points)) : circle_points<double>(cfg.n, parse_turns(points));
    } else if (*ck) {
      j = exact(g) ? circle_config_check<Rational>(cfg.n, k, grid, ok) : circle_config_check<double>(cfg.n, k, grid, ok);
    } else if (*td) {
      const auto tau = tripod_file.empty() ? to_double(standard_tripod<Rational>(cfg.n)) : read_tripod(tripod_file);
      const auto d = tripod_distance(tau, read_flag<double>(p_file), read_flag<double>(q_file));
      j = Json{{"plus", d.plus}, {"minus", d.minus}, {"chordal", d.chordal}};
    } else if (*tn) {
      const auto f = read_flags<double>({triple_file});
      require(f.size() == 3, ErrorCode::InvalidArgument, "a triple needs three flags");
      const auto res = tripod_norm(f[0], f[1], f[2]);
      j = Json{{"value", res.value},
               {"converged", res.converged},
               {"evaluations", res.evaluations},
               {"minimizer_log_torus", res.minimizer_log_torus},
               {"minimizer_apex", to_json(res.minimizer.zero)},
               {"slack_values", res.slack_values}};
    } else if (*co) {
      const MatrixD gamma = matrix_d_from_json(read_json_file(gamma_file));
      const std::size_t n = gamma.rows();
      const auto tau0 = tripod_file.empty()
                            ? to_double(make_tripod(circle_map(CirclePoint<Rational>{1, 1}, n),
                                                    circle_map(CirclePoint<Rational>{1, 0}, n),
                                                    circle_map(CirclePoint<Rational>{-1, 1}, n)))
                            : read_tripod(tripod_file);
      const auto rep = contraction_experiment(gamma, tau0, m_max, radius);
      ok = rep.contracting;
      j = Json{{"k", rep.k}, {"monotone", rep.monotone}, {"contracting", rep.contracting}};
    } else if (*sc) {
      const auto rep = make_schottky(lambda, theta, cfg.n);
      j = Json{{"representation", to_json(rep)}, {"depth", L}, {"sample", to_json(schottky_boundary_map(rep, L))}};
    } else if (*an) {
      const auto rep = anosov_contraction_report(schottky_from_json(read_json_file(rep_file)), L, {}, letter);
      ok = rep.pass;
      j = Json{{"words", word_list(rep.words)}, {"diameters", rep.diameters}, {"rate", rep.rate},
               {"predicted", rep.predicted}, {"monotone", rep.monotone}, {"pass", rep.pass}};
    } else if (*ex) {
      const Json sj = read_json_file(sample_file);
      const auto s = cyclic_sample_from_json(sj.contains("sample") ? sj.at("sample") : sj);
      const auto res = left_right_limits(s, rational_from_json(Json(theta_turn)),
                                         side == "left" ? LimitSide::Left : LimitSide::Right);
      ok = res.in_closed_diamond;
      j = Json{{"theta", theta_turn},
               {"side", side},
               {"flag", to_json(res.flag)},
               {"residual", res.residual},
               {"terms", res.terms},
               {"in_closed_diamond", res.in_closed_diamond}};
    }
    emit(j, g.out);
  } catch (const PoslabError& e) {
    Json err{{"error", Json{{"code", error_name(e.code())}, {"message", e.what()}}}};
    if (const auto* nc_err = dynamic_cast<const NotCauchyError*>(&e)) err["error"]["residual"] = nc_err->residual();
    std::cout << err.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << Json{{"error", Json{{"code", "InternalError"}, {"message", e.what()}}}}.dump(2) << "\n";
    return 2;
  }
  return ok ? 0 : 1;
}
