#include "poslab/json_io.hpp"

#include <fstream>
#include <sstream>

#include "poslab/errors.hpp"

namespace poslab {

namespace {

// "p/q", "p", "-1.25" (exact decimal) or anything strtod accepts.
Rational rational_from_string(const std::string& s) {
  if (s.find_first_of("eEnN") == std::string::npos && s.find('.') != std::string::npos) {
    const auto dot = s.find('.');
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+") fail(ErrorCode::InvalidArgument, "bad number '" + s + "'");
    Rational q(mpz_class(digits, 10), mpz_class(1));
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
    q /= Rational(den);
    q.canonicalize();
    return q;
  }
  if (s.find_first_of("eE") != std::string::npos) {
    std::size_t used = 0;
    const double d = std::stod(s, &used);
    if (used != s.size()) fail(ErrorCode::InvalidArgument, "bad number '" + s + "'");
    return Rational(d);
  }
  return parse_rational(s);
}

template <class T>
Json matrix_json(const Matrix<T>& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if constexpr (std::is_same_v<T, Rational>)
        row.push_back(m(r, c).get_str());
      else
        row.push_back(m(r, c));
    }
    rows.push_back(row);
  }
  return rows;
}

template <class T>
Matrix<T> matrix_from(const Json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    fail(ErrorCode::InvalidArgument, "matrix must be a non-empty array of rows");
  Matrix<T> m(j.size(), j.front().size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != m.cols()) fail(ErrorCode::InvalidArgument, "ragged matrix");
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if constexpr (std::is_same_v<T, Rational>)
        m(r, c) = rational_from_json(j[r][c]);
      else
        m(r, c) = j[r][c].is_number() ? j[r][c].get<double>() : rational_from_json(j[r][c]).get_d();
    }
  }
  return m;
}

template <class T>
Flag<T> flag_from(const Json& j) {
  const Json& b = j.is_object() ? j.at("basis") : j;
  auto m = matrix_from<T>(b);
  require(m.rows() == m.cols(), ErrorCode::InvalidArgument, "flag basis must be square");
  require(rank(m) == m.rows(), ErrorCode::InvalidArgument, "flag basis must be invertible");
  return make_flag(m);
}

Json arc_json(const Arc& a) {
  auto end = [](const std::optional<Rational>& p) { return p ? Json(p->get_str()) : Json("inf"); };
  return Json{{"start", end(a.start)}, {"end", end(a.end)}};
}

}  // namespace

Json to_json(const Rational& q) { return q.get_str(); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return rational_from_string(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return Rational(j.get<double>());
  fail(ErrorCode::InvalidArgument, "expected a number or a rational string");
}

Json to_json(const MatrixQ& m) { return matrix_json(m); }
Json to_json(const MatrixD& m) { return matrix_json(m); }
MatrixQ matrix_q_from_json(const Json& j) { return matrix_from<Rational>(j); }
MatrixD matrix_d_from_json(const Json& j) { return matrix_from<double>(j); }

Json to_json(const FlagQ& f) { return Json{{"n", f.n()}, {"mode", "exact"}, {"basis", matrix_json(f.basis)}}; }
Json to_json(const FlagD& f) { return Json{{"n", f.n()}, {"mode", "float"}, {"basis", matrix_json(f.basis)}}; }
FlagQ flag_q_from_json(const Json& j) { return flag_from<Rational>(j); }
FlagD flag_d_from_json(const Json& j) { return flag_from<double>(j); }

// one-line notation on {1..n}
Json to_json(const Perm& p) {
  Json j = Json::array();
  for (auto v : p) j.push_back(static_cast<int>(v) + 1);
  return j;
}

Json to_json(const CellLabel& c) { return Json{{"perm", to_json(c.perm)}, {"length", c.length}}; }

Json to_json(const SignClass& sc) { return Json(sc.eps); }

template <class T>
Json to_json(const Certificate<T>& c) {
  Json j{{"sign_class", to_json(c.sign_class)}, {"side", side_name(c.side)}};
  if constexpr (std::is_same_v<T, Rational>)
    j["min_minor"] = c.min_minor.get_str();
  else
    j["min_minor"] = c.min_minor;
  return j;
}
template Json to_json<Rational>(const Certificate<Rational>&);
template Json to_json<double>(const Certificate<double>&);

Json to_json(const CyclicSample<double>& s) {
  Json entries = Json::array();
  for (const auto& e : s.entries)
    entries.push_back(Json{{"angle", e.angle.get_str()}, {"label", e.label}, {"flag", matrix_json(e.flag.basis)}});
  return Json{{"n", s.entries.empty() ? 0 : s.entries.front().flag.n()}, {"entries", entries}};
}

CyclicSample<double> cyclic_sample_from_json(const Json& j) {
  CyclicSample<double> s;
  for (const auto& e : j.at("entries")) {
    Rational a = rational_from_json(e.at("angle"));
    s.entries.push_back({a, flag_d_from_json(e.at("flag")), e.value("label", std::string())});
  }
  s.sort();
  return s;
}

Json to_json(const SchottkyRep& r) {
  Json arcs = Json::array();
  for (const auto& a : r.attracting) arcs.push_back(arc_json(a));
  return Json{{"lambda", r.lambda.get_str()},
              {"rotation", r.rotation.get_str()},
              {"n", r.n},
              {"A", matrix_json(r.gens[0])},
              {"B", matrix_json(r.gens[2])},
              {"attracting_arcs", arcs},
              {"ping_pong_certified", ping_pong_certified(r)}};
}

SchottkyRep schottky_from_json(const Json& j) {
  return make_schottky(rational_from_json(j.at("lambda")), rational_from_json(j.at("rotation")),
                       j.at("n").get<std::size_t>());
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigInvalid, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const std::exception& e) {
    fail(ErrorCode::ConfigInvalid, "cannot parse " + path + ": " + e.what());
  }
}

}  // namespace poslab
