#include "poslab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "poslab/errors.hpp"

namespace poslab {

namespace {

// x - floor(x), in [0, 1).
Rational fractional(const Rational& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational r = x - Rational(fl);
  r.canonicalize();
  return r;
}

}  // namespace

template <class T>
void CyclicSample<T>::sort() {
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.angle < b.angle; });
}

template <class T>
std::vector<Flag<T>> CyclicSample<T>::flags() const {
  std::vector<Flag<T>> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.flag);
  return out;
}

double turn_of(double x, double y) {
  const long double X = x, Y = y;
  if (Y == 0) return 0.0;
  const long double t = X / Y;
  // theta = 1 / (1 + t + sqrt(t^2 + 1)), with t + sqrt(t^2 + 1) evaluated stably.
  const long double r = std::sqrt(t * t + 1.0L);
  const long double s = t >= 0 ? t + r : 1.0L / (r - t);
  long double theta = 1.0L / (1.0L + s);
  if (!std::isfinite(static_cast<double>(theta))) theta = 0;
  if (theta >= 1.0L) theta = 0;
  return static_cast<double>(theta);
}

template <class T>
CyclicSample<T> circle_sample(std::size_t n, const std::vector<Rational>& turns) {
  CyclicSample<T> s;
  for (const auto& th : turns) {
    const Rational a = fractional(th);
    Flag<T> f;
    if constexpr (std::is_same_v<T, Rational>) {
      f = circle_map(turn_point(a), n);
    } else {
      f = circle_map(turn_point(a.get_d()), n);
    }
    s.entries.push_back({a, f, format_rational(a)});
  }
  s.sort();
  return s;
}

namespace {

// Positivity of index tuples with float decisions backed by exact rechecks.
template <class T>
class TupleChecker {
 public:
  explicit TupleChecker(const std::vector<Flag<T>>& flags) : flags_(flags), oracle_(flags) {}

  bool triple(std::size_t i, std::size_t j, std::size_t k) {
    return decide([&](auto& o) { return o.triple(i, j, k); });
  }
  bool quadruple(std::size_t i, std::size_t x, std::size_t j, std::size_t y) {
    return decide([&](auto& o) { return o.quadruple(i, x, j, y); });
  }
  std::size_t rechecks = 0;

 private:
  template <class F>
  bool decide(F&& f) {
    if constexpr (std::is_same_v<T, Rational>) {
      return f(oracle_);
    } else {
      try {
        if (f(oracle_)) return true;
      } catch (const PoslabError& e) {
        if (e.code() != ErrorCode::FloatAmbiguous && e.code() != ErrorCode::NotTransverse) throw;
      }
      ++rechecks;
      if (!exact_) {
        std::vector<FlagQ> q;
        q.reserve(flags_.size());
        for (const auto& fl : flags_) q.push_back(to_rational(fl));
        exact_.emplace(q);
      }
      return f(*exact_);
    }
  }

  std::vector<Flag<T>> flags_;
  PositivityOracle<T> oracle_;
  std::optional<PositivityOracle<Rational>> exact_;
};

}  // namespace

template <class T>
PositiveMapResult positive_map_check(const CyclicSample<T>& s, std::uint64_t seed, std::size_t exhaustive_cap,
                                     std::size_t samples) {
  const std::size_t k = s.entries.size();
  PositiveMapResult res;
  TupleChecker<T> chk(s.flags());
  auto finish = [&](std::vector<std::size_t> w) {
    res.positive = false;
    res.witness = std::move(w);
    res.exact_rechecks = chk.rechecks;
    return res;
  };

  if (k <= exhaustive_cap) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        for (std::size_t l = j + 1; l < k; ++l) {
          ++res.triples_checked;
          if (!chk.triple(i, j, l)) return finish({i, j, l});
        }
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        for (std::size_t l = j + 1; l < k; ++l)
          for (std::size_t m = l + 1; m < k; ++m) {
            ++res.quadruples_checked;
            if (!chk.quadruple(i, j, l, m)) return finish({i, j, l, m});
          }
  } else {
    res.exhaustive = false;
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    for (std::size_t t = 0; t < samples; ++t) {
      std::array<std::size_t, 4> q{};
      do {
        for (auto& v : q) v = pick(rng);
        std::sort(q.begin(), q.end());
      } while (q[0] == q[1] || q[1] == q[2] || q[2] == q[3]);
      for (const auto& tri : {std::array{q[0], q[1], q[2]}, std::array{q[0], q[1], q[3]}, std::array{q[0], q[2], q[3]},
                              std::array{q[1], q[2], q[3]}}) {
        ++res.triples_checked;
        if (!chk.triple(tri[0], tri[1], tri[2])) return finish({tri[0], tri[1], tri[2]});
      }
      ++res.quadruples_checked;
      if (!chk.quadruple(q[0], q[1], q[2], q[3])) return finish({q[0], q[1], q[2], q[3]});
    }
  }
  res.exact_rechecks = chk.rechecks;
  return res;
}

LimitResult left_right_limits(const CyclicSample<double>& s, const Rational& theta, LimitSide side, std::size_t depth,
                              double cauchy_tol) {
  // Offset of each entry from theta measured against the approach direction.
  struct Item {
    double offset;
    std::size_t index;
  };
  std::vector<Item> behind, ahead;
  const Rational half(1, 2);
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    const Rational d =
        fractional(side == LimitSide::Left ? Rational(theta - s.entries[i].angle) : Rational(s.entries[i].angle - theta));
    if (d == 0) continue;
    if (d < half)
      behind.push_back({d.get_d(), i});
    else
      ahead.push_back({1.0 - d.get_d(), i});
  }
  require(!behind.empty() && !ahead.empty(), ErrorCode::InvalidArgument, "no sample point beyond the target");
  // Extremities a (behind) and c (beyond) as close as possible to a quarter turn
  // away, so that the limit stays well inside the diamond over (a, c).
  auto quarter = [](const Item& x, const Item& y) { return std::fabs(x.offset - 0.25) < std::fabs(y.offset - 0.25); };
  const auto a_it = std::min_element(behind.begin(), behind.end(), quarter);
  const auto c_it = std::min_element(ahead.begin(), ahead.end(), quarter);
  const double a_off = a_it->offset;
  std::vector<Item> terms;
  for (const auto& it : behind)
    if (it.offset < a_off) terms.push_back(it);
  require(terms.size() >= 2, ErrorCode::InvalidArgument, "too few sample points approaching the target");
  std::sort(terms.begin(), terms.end(), [](const Item& x, const Item& y) { return x.offset > y.offset; });
  if (terms.size() > depth) terms.erase(terms.begin(), terms.end() - static_cast<std::ptrdiff_t>(depth));

  LimitResult res;
  res.a = s.entries[a_it->index].flag;
  res.c = s.entries[c_it->index].flag;
  std::vector<FlagD> seq;
  for (const auto& it : terms) seq.push_back(s.entries[it.index].flag);
  res.terms = seq.size();
  res.residual = flag_distance(seq[seq.size() - 1], seq[seq.size() - 2]);
  if (!(res.residual < cauchy_tol))
    throw NotCauchyError(res.residual, "sequence not Cauchy at depth " + std::to_string(seq.size()));
  res.flag = seq.back();

  // Closed diamond over (a, c) containing the approximating terms.
  std::optional<Certificate<double>> cert;
  for (const auto& x : seq) {
    try {
      cert = component_certificate(res.a, res.c, x);
    } catch (const PoslabError&) {
      cert.reset();
    }
    if (cert) break;
  }
  if (cert) {
    const auto frame = normalize_pair(res.a, res.c, cert->sign_class);
    try {
      MatrixD u = unipotent_coordinate(frame.g, res.flag);
      if (cert->side == Side::Minus) u = inverse(u);
      const double scale = std::max(1.0, frobenius_norm(u));
      res.in_closed_diamond = min_positivity_minor(u) >= -1e-8 * scale;
    } catch (const PoslabError&) {
      res.in_closed_diamond = false;
    }
  }
  return res;
}

template <class T>
TriplesSufficeResult triples_suffice_check(const CyclicSample<T>& s, double max_gap, std::uint64_t seed) {
  TriplesSufficeResult res;
  const std::size_t k = s.entries.size();
  for (std::size_t i = 1; i < k; ++i)
    res.spacing = std::max(res.spacing, Rational(s.entries[i].angle - s.entries[i - 1].angle).get_d());
  TupleChecker<T> chk(s.flags());
  bool triples = true;
  for (std::size_t i = 0; i < k && triples; ++i)
    for (std::size_t j = i + 1; j < k && triples; ++j)
      for (std::size_t l = j + 1; l < k && triples; ++l) triples = chk.triple(i, j, l);
  res.precondition = triples && res.spacing <= max_gap;
  if (!res.precondition) return res;
  res.quadruples = positive_map_check(s, seed);
  res.pass = res.quadruples.positive;
  return res;
}

// ---------------------------------------------------------------------------
// Schottky groups

bool is_reduced(const FreeWord& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0 || w[i] > 3) return false;
    if (i > 0 && w[i] == (w[i - 1] ^ 1)) return false;
  }
  return true;
}

std::vector<FreeWord> reduced_words(std::size_t max_len) {
  std::vector<FreeWord> out, layer{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<FreeWord> next;
    for (const auto& w : layer)
      for (int l = 0; l < 4; ++l) {
        if (!w.empty() && l == (w.back() ^ 1)) continue;
        auto v = w;
        v.push_back(l);
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer.swap(next);
  }
  return out;
}

FreeWord reduce_word(const FreeWord& w) {
  FreeWord out;
  for (int l : w) {
    if (!out.empty() && out.back() == (l ^ 1))
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

FreeWord inverse_word(const FreeWord& w) {
  FreeWord out;
  for (auto l = w.rbegin(); l != w.rend(); ++l) out.push_back(*l ^ 1);
  return out;
}

std::string word_name(const FreeWord& w) {
  static const char* names = "aAbB";
  std::string s;
  for (int l : w) s += names[l];
  return s.empty() ? "1" : s;
}

namespace {

using Point = std::optional<Rational>;  // nullopt = infinity

bool less(const Point& a, const Point& b) {
  if (!a) return false;
  if (!b) return true;
  return *a < *b;
}

bool equal(const Point& a, const Point& b) { return (!a && !b) || (a && b && *a == *b); }

// a, b, c distinct and met in this order going in the positive direction.
bool cyclic(const Point& a, const Point& b, const Point& c) {
  if (equal(a, b) || equal(b, c) || equal(a, c)) return false;
  return (less(a, b) && less(b, c)) || (less(b, c) && less(c, a)) || (less(c, a) && less(a, b));
}

bool in_closed(const Arc& arc, const Point& p) {
  return equal(p, arc.start) || equal(p, arc.end) || cyclic(arc.start, p, arc.end);
}

bool in_open(const Arc& arc, const Point& p) { return cyclic(arc.start, p, arc.end); }

// Closed inner arc inside the open outer arc.
bool strictly_inside(const Arc& inner, const Arc& outer) {
  return in_open(outer, inner.start) && in_open(outer, inner.end) && !in_closed(inner, outer.start);
}

bool disjoint(const Arc& a, const Arc& b) {
  return !in_closed(a, b.start) && !in_closed(a, b.end) && !in_closed(b, a.start) && !in_closed(b, a.end);
}

Point mobius(const MatrixQ& g, const Point& p) {
  Rational x = p ? *p : Rational(1), y = p ? Rational(1) : Rational(0);
  const Rational X = g(0, 0) * x + g(0, 1) * y, Y = g(1, 0) * x + g(1, 1) * y;
  if (Y == 0) return std::nullopt;
  Rational q = X / Y;
  q.canonicalize();
  return q;
}

Arc image(const MatrixQ& g, const Arc& a) { return Arc{mobius(g, a.start), mobius(g, a.end)}; }

}  // namespace

bool ping_pong_certified(const SchottkyRep& r) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!disjoint(r.attracting[i], r.attracting[j])) return false;
  for (int l = 0; l < 4; ++l) {
    const Arc& rep = r.attracting[l ^ 1];
    const Arc complement{rep.end, rep.start};
    if (!strictly_inside(image(r.gens[l], complement), r.attracting[l])) return false;
  }
  return true;
}

SchottkyRep make_schottky(const Rational& lambda, const Rational& rotation, std::size_t n) {
  require(n >= 2, ErrorCode::InvalidArgument, "n must be at least 2");
  require(lambda > 1, ErrorCode::InvalidArgument, "lambda must exceed 1");
  SchottkyRep r;
  r.lambda = lambda;
  r.rotation = rotation;
  r.n = n;
  const Rational m = rotation, den = 1 + m * m;
  Rational c = (1 - m * m) / den, s = 2 * m / den;
  c.canonicalize();
  s.canonicalize();
  const MatrixQ R{{c, -s}, {s, c}}, Rt{{c, s}, {-s, c}};
  Rational inv = 1 / lambda;
  inv.canonicalize();
  r.gens[0] = MatrixQ{{lambda, 0}, {0, inv}};
  r.gens[1] = MatrixQ{{inv, 0}, {0, lambda}};
  r.gens[2] = R * r.gens[0] * Rt;
  r.gens[3] = R * r.gens[1] * Rt;

  // A's arcs: |t| > w around infinity and |t| < 1/w around 0. Containment needs
  // w < lambda; disjointness from B's arcs needs the half-width atan(1/w) below
  // half the angular gap psi between the fixed points of A and B.
  const double phi = std::atan2(s.get_d(), c.get_d());  // rotation of lines
  double gap = std::fmod(std::fabs(phi), M_PI / 2);
  gap = std::min(gap, M_PI / 2 - gap);
  const double lo = 1.0 / std::tan(gap / 2), hi = lambda.get_d();
  if (!(gap > 0) || !(lo < hi)) fail(ErrorCode::PingPongViolated, "no ping-pong arcs for these parameters");
  Rational w = rational_approx((lo + hi) / 2, 1000);
  Rational winv = 1 / w;
  winv.canonicalize();
  r.attracting[0] = Arc{w, Rational(-w)};
  r.attracting[1] = Arc{Rational(-winv), winv};
  r.attracting[2] = image(R, r.attracting[0]);
  r.attracting[3] = image(R, r.attracting[1]);
  if (!ping_pong_certified(r)) fail(ErrorCode::PingPongViolated, "ping-pong arcs fail the exact check");
  for (int l = 0; l < 4; ++l) r.images[l] = to_double(sym_power(r.gens[l], n));
  return r;
}

SchottkyRep make_schottky(double lambda, double theta, std::size_t n) {
  return make_schottky(rational_approx(lambda, 1000), rational_approx(std::tan(theta / 2), 200), n);
}

MatrixQ word_matrix(const SchottkyRep& r, const FreeWord& w) {
  MatrixQ g = MatrixQ::identity(2);
  for (int l : w) g = g * r.gens.at(static_cast<std::size_t>(l));
  return g;
}

CirclePoint<double> attracting_point(const MatrixQ& g) {
  const long double a = g(0, 0).get_d(), b = g(0, 1).get_d(), c = g(1, 0).get_d(), d = g(1, 1).get_d();
  const long double tr = a + d, det = a * d - b * c, disc = tr * tr - 4 * det;
  require(disc > 0, ErrorCode::InvalidArgument, "matrix is not hyperbolic");
  const long double mu = (tr + (tr >= 0 ? 1 : -1) * std::sqrt(disc)) / 2;
  long double x1 = b, y1 = mu - a, x2 = mu - d, y2 = c;
  long double x = x1, y = y1;
  if (std::hypot(x2, y2) > std::hypot(x1, y1)) x = x2, y = y2;
  const long double nrm = std::hypot(x, y);
  return CirclePoint<double>{static_cast<double>(x / nrm), static_cast<double>(y / nrm)};
}

FlagD boundary_flag(const SchottkyRep& r, const FreeWord& w, double tol) {
  require(!w.empty() && is_reduced(w), ErrorCode::InvalidArgument, "word must be nonempty and reduced");
  const std::size_t n = r.n;
  // Generic start (Hilbert matrix columns).
  MatrixD q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = 1.0 / static_cast<double>(i + j + 1);
  FlagD cur = make_flag(q);
  for (int it = 0; it < 500; ++it) {
    for (auto l = w.rbegin(); l != w.rend(); ++l) q = orthonormal_basis(r.images[static_cast<std::size_t>(*l)] * q);
    FlagD next = make_flag(q);
    const double step = flag_distance(cur, next);
    cur = next;
    if (step < tol) break;
  }
  return cur;
}

CyclicSample<double> schottky_boundary_map(const SchottkyRep& r, std::size_t L) {
  CyclicSample<double> s;
  for (const auto& w : reduced_words(L)) {
    const auto p = attracting_point(word_matrix(r, w));
    const Rational angle(turn_of(p.x, p.y));
    s.entries.push_back({angle, boundary_flag(r, w), word_name(w)});
  }
  s.sort();
  // Powers share their attracting point; keep the shortest word.
  std::vector<CyclicSample<double>::Entry> kept;
  for (auto& e : s.entries) {
    if (!kept.empty() && Rational(e.angle - kept.back().angle).get_d() < 1e-13) {
      if (e.label.size() < kept.back().label.size()) kept.back() = std::move(e);
      continue;
    }
    kept.push_back(std::move(e));
  }
  if (kept.size() > 1 && Rational(kept.front().angle + 1 - kept.back().angle).get_d() < 1e-13) kept.pop_back();
  s.entries = std::move(kept);
  return s;
}

double transversality_measure(const FlagD& a, const FlagD& b) {
  const std::size_t n = a.n();
  const MatrixD qa = orthonormal_basis(a.basis), qb = orthonormal_basis(b.basis);
  double best = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    MatrixD m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < i; ++c) m(r, c) = qa(r, c);
      for (std::size_t c = 0; c < n - i; ++c) m(r, i + c) = qb(r, c);
    }
    best = std::min(best, std::fabs(determinant(m)));
  }
  return best;
}

TripleBoundednessReport triple_boundedness_report(const CyclicSample<double>& s, const std::vector<double>& separations,
                                                  double floor) {
  TripleBoundednessReport rep;
  rep.separations = separations;
  const std::size_t k = s.entries.size();
  std::vector<double> ang(k);
  std::vector<FlagD> ortho(k);
  for (std::size_t i = 0; i < k; ++i) {
    ang[i] = s.entries[i].angle.get_d();
    ortho[i] = FlagD{orthonormal_basis(s.entries[i].flag.basis)};
  }
  auto sep = [&](std::size_t i, std::size_t j) {
    const double d = std::fabs(ang[i] - ang[j]);
    return std::min(d, 1.0 - d);
  };
  std::map<std::pair<std::size_t, std::size_t>, double> memo;
  // The triple minimum is a minimum over its pairs, so it suffices to visit the
  // pairs that belong to at least one separated triple.
  for (double sv : separations) {
    double mn = 1.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        if (sep(i, j) < sv) continue;
        bool third = false;
        for (std::size_t l = 0; l < k && !third; ++l) third = sep(i, l) >= sv && sep(j, l) >= sv;
        if (!third) continue;
        ++pairs;
        auto it = memo.find({i, j});
        if (it == memo.end()) it = memo.emplace(std::pair{i, j}, transversality_measure(ortho[i], ortho[j])).first;
        mn = std::min(mn, it->second);
      }
    rep.window_minimum.push_back(mn);
    rep.window_pairs.push_back(pairs);
    rep.floor = std::min(rep.floor, mn);
  }
  rep.pass = rep.floor >= floor;
  return rep;
}

AnosovReport anosov_contraction_report(const SchottkyRep& r, std::size_t L, const FreeWord& base, int letter) {
  require(L >= 2, ErrorCode::InvalidArgument, "need at least two nested words");
  FreeWord probe = base;
  probe.push_back(letter);
  probe.push_back(letter);
  require(letter >= 0 && letter < 4 && is_reduced(probe), ErrorCode::InvalidArgument, "nested words are not reduced");

  if (!positive_map_check(schottky_boundary_map(r, L)).positive)
    fail(ErrorCode::PositivityFailed, "boundary sample is not positive");

  AnosovReport rep;
  rep.predicted = -2.0 * std::log(r.lambda.get_d());
  const auto tails = reduced_words(2);
  FreeWord w = base;
  for (std::size_t k = 1; k <= L; ++k) {
    w.push_back(letter);
    // Attracting points of w.v lie in the cylinder of w when w.v is cyclically reduced.
    std::vector<FlagD> pts{boundary_flag(r, w)};
    for (const auto& v : tails) {
      if (v.front() == (w.back() ^ 1) || v.back() == (w.front() ^ 1)) continue;
      FreeWord wv = w;
      wv.insert(wv.end(), v.begin(), v.end());
      pts.push_back(boundary_flag(r, wv));
    }
    double diam = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) diam = std::max(diam, flag_distance(pts[i], pts[j]));
    rep.words.push_back(w);
    rep.diameters.push_back(diam);
  }
  const double m = static_cast<double>(L);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < L; ++k) {
    const double x = static_cast<double>(k + 1), y = std::log(rep.diameters[k]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  rep.rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  rep.monotone = true;
  for (std::size_t k = 1; k < L; ++k) rep.monotone = rep.monotone && rep.diameters[k] < rep.diameters[k - 1];
  rep.pass = rep.monotone && rep.rate < -0.05;
  return rep;
}

#define POSLAB_INSTANTIATE(T)                                                                                     \
  template struct CyclicSample<T>;                                                                                \
  template CyclicSample<T> circle_sample<T>(std::size_t, const std::vector<Rational>&);                           \
  template PositiveMapResult positive_map_check<T>(const CyclicSample<T>&, std::uint64_t, std::size_t, std::size_t); \
  template TriplesSufficeResult triples_suffice_check<T>(const CyclicSample<T>&, double, std::uint64_t);

POSLAB_INSTANTIATE(Rational)
POSLAB_INSTANTIATE(double)
#undef POSLAB_INSTANTIATE

}  // namespace poslab
