#include "poslab/tripods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "poslab/optimize.hpp"

namespace poslab {

namespace {

template <class T>
Matrix<T> principal_unipotent(std::size_t n) {
  return exp_nilpotent(principal_sl2<T>(n).e);
}

// GL frame F with F.a = standard, F.b = antistandard, F.z = exp(e).antistandard.
template <class T>
Matrix<T> tripod_frame(const Flag<T>& a, const Flag<T>& b, const Flag<T>& z) {
  const std::size_t n = a.n();
  const Matrix<T> g = normalize_pair(a, b, trivial_sign_class(n)).g;
  Matrix<T> u0;
  try {
    u0 = unipotent_coordinate(g, z);
  } catch (const PoslabError& err) {
    if (err.code() == ErrorCode::NotTransverse) fail(ErrorCode::NotInDiamond, "apex not transverse to an extremity");
    throw;
  }
  std::vector<T> d(n);
  d[0] = T(1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const T s = u0(i, i + 1);
    if (Field<T>::is_zero(s)) fail(ErrorCode::NotInDiamond, "apex in no diamond over the extremities");
    d[i + 1] = d[i] * s / T(static_cast<long>((i + 1) * (n - i - 1)));
  }
  const Matrix<T> dm = Matrix<T>::diagonal(d);
  const Matrix<T> frame = dm * g;
  const Matrix<T> v = dm * u0 * inverse(dm);
  const Matrix<T> target = principal_unipotent<T>(n);
  if constexpr (Field<T>::exact) {
    require(v == target, ErrorCode::InvalidArgument, "triple does not lie on a positive circle");
  } else {
    double err = 0.0, scale = 1.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        err = std::max(err, std::fabs(v(r, c) - target(r, c)));
        scale = std::max(scale, std::fabs(v(r, c)));
      }
    require(err <= 1e-7 * scale, ErrorCode::InvalidArgument, "triple does not lie on a positive circle");
  }
  return frame;
}

template <class T>
std::vector<double> as_doubles(const std::vector<T>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(Field<T>::to_double(x));
  return out;
}

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double norm2(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

template <class T>
std::vector<T> coordinates_in(const Matrix<T>& frame, const Flag<T>& p) {
  Matrix<T> u;
  try {
    u = unipotent_coordinate(frame, p);
  } catch (const PoslabError& err) {
    if (err.code() == ErrorCode::NotTransverse) fail(ErrorCode::NotInDiamond, "point not transverse to an extremity");
    throw;
  }
  if (!in_positive_semigroup(u)) fail(ErrorCode::NotInDiamond, "point outside the tripod diamond");
  return factorize(u).t;
}

std::vector<double> plus_coordinates(const Tripod<double>& tau, const FlagD& p) {
  return coordinates_in(tau.frame_plus, p);
}
std::vector<double> minus_coordinates(const Tripod<double>& tau, const FlagD& p) {
  return coordinates_in(tau.frame_minus, p);
}

LusztigParams<double> with_values(std::size_t n, std::vector<double> t) {
  return LusztigParams<double>{default_reduced_word(n), std::move(t)};
}

}  // namespace

template <class T>
Tripod<T> Tripod<T>::reversed() const {
  Tripod<T> r;
  r.minus = plus;
  r.zero = zero;
  r.plus = minus;
  r.frame_plus = frame_minus;
  r.frame_minus = frame_plus;
  r.circle = PositiveCircle<T>{inverse(frame_minus), n()};
  return r;
}

template <class T>
Tripod<T> make_tripod(const Flag<T>& minus, const Flag<T>& zero, const Flag<T>& plus) {
  Tripod<T> tau;
  tau.minus = minus;
  tau.zero = zero;
  tau.plus = plus;
  tau.frame_plus = tripod_frame(minus, plus, zero);
  tau.frame_minus = tripod_frame(plus, minus, zero);
  tau.circle = PositiveCircle<T>{inverse(tau.frame_plus), zero.n()};
  return tau;
}

template <class T>
bool is_tripod(const Flag<T>& minus, const Flag<T>& zero, const Flag<T>& plus) {
  try {
    make_tripod(minus, zero, plus);
    return true;
  } catch (const PoslabError& err) {
    if (err.code() == ErrorCode::FloatAmbiguous) throw;
    return false;
  }
}

template <class T>
Tripod<T> act(const Matrix<T>& g, const Tripod<T>& tau) {
  // the frames transport directly; no renormalization needed
  const Matrix<T> gi = inverse(g);
  Tripod<T> out;
  out.minus = act(g, tau.minus);
  out.zero = act(g, tau.zero);
  out.plus = act(g, tau.plus);
  out.frame_plus = tau.frame_plus * gi;
  out.frame_minus = tau.frame_minus * gi;
  out.circle = PositiveCircle<T>{g * tau.circle.base, tau.n()};
  return out;
}

Tripod<double> to_double(const Tripod<Rational>& tau) {
  Tripod<double> out;
  out.minus = to_double(tau.minus);
  out.zero = to_double(tau.zero);
  out.plus = to_double(tau.plus);
  out.frame_plus = to_double(tau.frame_plus);
  out.frame_minus = to_double(tau.frame_minus);
  out.circle = PositiveCircle<double>{to_double(tau.circle.base), tau.n()};
  return out;
}

template <class T>
Tripod<T> standard_tripod(std::size_t n) {
  return make_tripod(standard_flag<T>(n), circle_map(CirclePoint<T>{T(1), T(1)}, n), antistandard_flag<T>(n));
}

template <class T>
LusztigParams<T> principal_params(std::size_t n) {
  return factorize(principal_unipotent<T>(n));
}

template <class T>
MetricSample<T> tripod_coordinates(const Tripod<T>& tau, const Flag<T>& p) {
  const std::size_t n = tau.n();
  MetricSample<T> s;
  s.point = p;
  s.params_plus = LusztigParams<T>{default_reduced_word(n), coordinates_in(tau.frame_plus, p)};
  s.params_minus = LusztigParams<T>{default_reduced_word(n), coordinates_in(tau.frame_minus, p)};
  return s;
}

template <class T>
Flag<T> tripod_point(const Tripod<T>& tau, const LusztigParams<T>& params) {
  return act(Matrix<T>(inverse(tau.frame_plus) * psi(params)), antistandard_flag<T>(tau.n()));
}

template <class T>
TripodDistance tripod_distance(const Tripod<T>& tau, const Flag<T>& p, const Flag<T>& q) {
  const auto sp = tripod_coordinates(tau, p);
  const auto sq = tripod_coordinates(tau, q);
  TripodDistance d;
  d.plus = euclid(as_doubles(sp.params_plus.t), as_doubles(sq.params_plus.t));
  d.minus = euclid(as_doubles(sp.params_minus.t), as_doubles(sq.params_minus.t));
  d.chordal = std::hypot(d.plus, d.minus);
  return d;
}

template <class T>
CompletenessReport completeness_probe(const Tripod<T>& tau, const std::vector<Flag<T>>& path, double threshold) {
  require(!path.empty(), ErrorCode::InvalidArgument, "empty path");
  CompletenessReport rep;
  for (const auto& p : path) {
    rep.distances.push_back(tripod_distance(tau, path.front(), p).chordal);
    rep.min_minors.push_back(Field<T>::to_double(min_positivity_minor(unipotent_coordinate(tau.frame_plus, p))));
  }
  rep.monotone = true;
  for (std::size_t k = 1; k < rep.distances.size(); ++k)
    if (rep.distances[k] < rep.distances[k - 1] * (1 - 1e-12)) rep.monotone = false;
  const double last = rep.distances.back();
  rep.divergent = rep.monotone && last > threshold;
  rep.verdict = rep.divergent ? "divergent" : (last <= threshold ? "interior" : "inconclusive");
  return rep;
}

TripodNormResult tripod_norm(const FlagD& x, const FlagD& z, const FlagD& y, const TripodNormOptions& opts) {
  const std::size_t n = x.n();
  const auto cert = component_certificate(x, y, z);
  require(cert.has_value(), ErrorCode::NotInDiamond, "middle point in no diamond over the extremities");
  const MatrixD g = normalize_pair(x, y, cert->sign_class).g;
  const MatrixD gi = inverse(g);
  const double sigma = cert->side == Side::Plus ? 1.0 : -1.0;
  const MatrixD ex = exp_nilpotent(sigma * principal_sl2<double>(n).e);
  const MatrixD uz = unipotent_coordinate(g, z);
  const auto apex_of = [&](const std::vector<double>& lam) {
    std::vector<double> d(n, 1.0);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = std::exp(lam[i]);
    return act(MatrixD(gi * MatrixD::diagonal(d) * ex), antistandard_flag<double>(n));
  };

  // start: the torus element matching the superdiagonal of z's coordinate
  std::vector<double> lam0(n - 1, 0.0);
  {
    double acc = 0.0;
    for (std::size_t i = n - 1; i-- > 0;) {
      const double r = uz(i, i + 1) / (sigma * static_cast<double>((i + 1) * (n - i - 1)));
      acc += r > 0 ? std::log(r) : 0.0;
      lam0[i] = acc;
    }
  }

  std::vector<std::pair<std::vector<double>, double>> evaluated;
  const auto objective = [&](const std::vector<double>& lam) {
    double v = std::numeric_limits<double>::infinity();
    try {
      const auto tau = make_tripod(x, apex_of(lam), y);
      v = tripod_distance(tau, z, tau.zero).chordal;
    } catch (const PoslabError&) {
    }
    evaluated.emplace_back(lam, v);
    return v;
  };

  TripodNormResult res;
  res.value = std::numeric_limits<double>::infinity();
  NelderMeadOptions nm;
  nm.ftol = opts.tolerance;
  nm.max_evaluations = opts.max_evaluations;
  std::normal_distribution<double> jitter(0.0, 1.0);
  for (int s = 0; s < opts.starts; ++s) {
    std::vector<double> start = lam0;
    if (s > 0) {
      Rng rng(opts.seed + static_cast<std::uint64_t>(s));
      for (auto& v : start) v += jitter(rng);
    }
    const auto r = nelder_mead(objective, start, nm);
    res.evaluations += r.evaluations;
    if (r.value < res.value) {
      res.value = r.value;
      res.minimizer_log_torus = r.x;
      res.converged = r.converged;
    }
  }
  if (!std::isfinite(res.value)) fail(ErrorCode::DegenerateSlackSet, "objective never finite");
  res.minimizer = make_tripod(x, apex_of(res.minimizer_log_torus), y);

  const double cut = (1.0 + opts.slack_relative) * res.value + opts.slack_absolute;
  std::map<std::vector<double>, double> slack;
  for (const auto& [lam, v] : evaluated)
    if (v <= cut) slack.emplace(lam, v);
  for (const auto& [lam, v] : slack) {
    res.slack_set.push_back(make_tripod(x, apex_of(lam), y));
    res.slack_values.push_back(v);
  }
  if (res.slack_set.empty()) fail(ErrorCode::DegenerateSlackSet, "empty slack set");
  return res;
}

double tripod_metric_eval(const Tripod<double>& tau, const FlagD& x, const FlagD& y, const FlagD& p, const MatrixD& v) {
  const std::size_t n = x.n();
  const MatrixD g = normalize_pair(x, y, trivial_sign_class(n)).g;
  const MatrixD gi = inverse(g);
  const MatrixD u = unipotent_coordinate(g, p);
  double scale = 1.0, vnorm = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      scale = std::max(scale, std::fabs(u(r, c)));
      vnorm = std::max(vnorm, std::fabs(v(r, c)));
    }
  if (vnorm == 0.0) return 0.0;
  const double h = 1e-6 * scale / vnorm;
  const FlagD pp = act(MatrixD(gi * (u + h * v)), antistandard_flag<double>(n));
  const FlagD pm = act(MatrixD(gi * (u - h * v)), antistandard_flag<double>(n));
  double total = 0.0;
  for (const MatrixD* frame : {&tau.frame_plus, &tau.frame_minus}) {
    const auto a = coordinates_in(*frame, pp);
    const auto b = coordinates_in(*frame, pm);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = (a[i] - b[i]) / (2 * h);
      total += d * d;
    }
  }
  return total;
}

double diamond_metric_eval(const TripodNormResult& norm, const FlagD& x, const FlagD& y, const FlagD& p,
                           const MatrixD& v) {
  if (norm.slack_set.empty()) fail(ErrorCode::DegenerateSlackSet, "empty slack set");
  double sum = 0.0;
  for (const auto& tau : norm.slack_set) sum += tripod_metric_eval(tau, x, y, p, v);
  return sum / static_cast<double>(norm.slack_set.size());
}

double diamond_metric_eval(const FlagD& x, const FlagD& z, const FlagD& y, const FlagD& p, const MatrixD& v,
                           const TripodNormOptions& opts) {
  if (!diamond_contains(make_diamond(x, y, z), p)) fail(ErrorCode::NotInDiamond, "point outside the diamond");
  return diamond_metric_eval(tripod_norm(x, z, y, opts), x, y, p, v);
}

ContractionReport contraction_experiment(const MatrixD& gamma, const Tripod<double>& tau0, std::size_t m_max,
                                         double radius, const ContractionOptions& opts) {
  const std::size_t n = tau0.n();
  {
    Rng rng(opts.seed);
    for (std::size_t s = 0; s < opts.nesting_samples; ++s) {
      const FlagD p = act(gamma, tripod_point(tau0, random_params<double>(n, rng)));
      bool inside = false;
      try {
        inside = in_positive_semigroup(unipotent_coordinate(tau0.frame_plus, p));
      } catch (const PoslabError&) {
      }
      if (!inside) fail(ErrorCode::NestingNotCertified, "gamma does not map the diamond into itself");
    }
  }

  const auto h = principal_params<double>(n).t;
  const std::size_t dim = h.size();
  ContractionReport rep;
  MatrixD gm = MatrixD::identity(n);
  for (std::size_t m = 0; m <= m_max; ++m) {
    if (m > 0) gm = gamma * gm;
    const Tripod<double> tau = act(gm, tau0);
    Rng rng(opts.seed + 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto random_unit = [&] {
      std::vector<double> w(dim);
      double s = 0.0;
      for (auto& x : w) {
        x = normal(rng);
        s += x * x;
      }
      for (auto& x : w) x /= std::sqrt(s);
      return w;
    };
    double k = 0.0;
    for (std::size_t pt = 0; pt < opts.points; ++pt) {
      std::vector<double> center = h;
      if (pt > 0) {
        const auto dir = random_unit();
        double r = radius * unif(rng);
        for (int tries = 0; tries < 60; ++tries, r /= 2) {
          std::vector<double> c(dim);
          bool positive = true;
          for (std::size_t i = 0; i < dim; ++i) {
            c[i] = h[i] + r * dir[i];
            positive = positive && c[i] > 0;
          }
          if (!positive) continue;
          try {
            if (tripod_distance(tau, tripod_point(tau, with_values(n, c)), tau.zero).chordal <= radius) {
              center = c;
              break;
            }
          } catch (const PoslabError&) {
          }
        }
      }
      double scale = 0.0;
      for (double c : center) scale = std::max(scale, std::fabs(c));
      const double step = 1e-6 * scale;
      for (std::size_t dnum = 0; dnum < opts.directions; ++dnum) {
        const auto w = random_unit();
        std::vector<double> cp(center), cm(center);
        for (std::size_t i = 0; i < dim; ++i) {
          cp[i] += step * w[i];
          cm[i] -= step * w[i];
        }
        const FlagD fp = tripod_point(tau, with_values(n, cp));
        const FlagD fm = tripod_point(tau, with_values(n, cm));
        auto deriv2 = [&](const std::vector<double>& a, const std::vector<double>& b) {
          double s = 0.0;
          for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = (a[i] - b[i]) / (2 * step);
            s += d * d;
          }
          return s;
        };
        const double den = norm2(w) + deriv2(minus_coordinates(tau, fp), minus_coordinates(tau, fm));
        const double num = deriv2(plus_coordinates(tau0, fp), plus_coordinates(tau0, fm)) +
                           deriv2(minus_coordinates(tau0, fp), minus_coordinates(tau0, fm));
        k = std::max(k, num / den);
      }
    }
    rep.k.push_back(k);
  }
  rep.monotone = true;
  rep.contracting = rep.k.back() < 1.0;
  for (std::size_t m = 1; m < rep.k.size(); ++m) {
    if (rep.k[m] > rep.k[m - 1] * (1 + 1e-6)) rep.monotone = false;
    if (!(rep.k[m] < rep.k[m - 1] * (1 - 1e-6))) rep.contracting = false;
  }
  return rep;
}

CornerProbeReport corner_contraction_probe(const std::vector<Tripod<double>>& taus, const FlagD& x0, Rng& rng,
                                           std::size_t sequences, double threshold) {
  require(!taus.empty(), ErrorCode::InvalidArgument, "empty tripod sequence");
  const std::size_t n = x0.n();
  CornerProbeReport rep;
  const FlagD& y = taus.front().plus;
  bool ok = true;
  for (const auto& tau : taus) ok = ok && flag_distance(tau.plus, y) <= 1e-9;
  try {
    ok = ok && is_transverse(x0, y);
  } catch (const PoslabError&) {
    ok = false;
  }
  const auto h = principal_params<double>(n);
  for (const auto& tau : taus) rep.base_distances.push_back(flag_distance(tau.zero, x0));
  rep.precondition = ok && rep.base_distances.back() < threshold;
  if (!rep.precondition) return rep;

  const std::size_t last = taus.size() - 1;
  const Tripod<double> fixing_y = taus[last].reversed();  // frame pins y, moves x_m
  for (std::size_t s = 0; s < sequences; ++s) {
    const auto a = random_params<double>(n, rng);
    const auto b = random_params<double>(n, rng);
    // k'_m = a + (b - a)/(m + 1), a convergent sequence in the cone; only the last term is tested
    std::vector<double> k(a.t.size());
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = a.t[i] + (b.t[i] - a.t[i]) / static_cast<double>(last + 1);
    const double d = flag_distance(tripod_point(fixing_y, with_values(n, k)), x0);
    rep.final_distances.push_back(d);
    if (d < threshold) ++rep.converged;
  }
  rep.pass = rep.converged == sequences;
  return rep;
}

std::vector<Tripod<double>> corner_sequence(std::size_t n, double ratio, std::size_t count) {
  std::vector<double> d(n, 1.0);
  for (std::size_t i = n - 1; i-- > 0;) d[i] = d[i + 1] * ratio;
  const MatrixD step = MatrixD::diagonal(d);
  std::vector<Tripod<double>> out;
  Tripod<double> tau = standard_tripod<double>(n);
  for (std::size_t m = 0; m < count; ++m) {
    out.push_back(tau);
    tau = act(step, tau);
  }
  return out;
}

#define POSLAB_INSTANTIATE(T)                                                                             \
  template struct Tripod<T>;                                                                              \
  template Tripod<T> make_tripod<T>(const Flag<T>&, const Flag<T>&, const Flag<T>&);                      \
  template bool is_tripod<T>(const Flag<T>&, const Flag<T>&, const Flag<T>&);                             \
  template Tripod<T> act<T>(const Matrix<T>&, const Tripod<T>&);                                          \
  template Tripod<T> standard_tripod<T>(std::size_t);                                                     \
  template LusztigParams<T> principal_params<T>(std::size_t);                                             \
  template MetricSample<T> tripod_coordinates<T>(const Tripod<T>&, const Flag<T>&);                       \
  template Flag<T> tripod_point<T>(const Tripod<T>&, const LusztigParams<T>&);                            \
  template TripodDistance tripod_distance<T>(const Tripod<T>&, const Flag<T>&, const Flag<T>&);           \
  template CompletenessReport completeness_probe<T>(const Tripod<T>&, const std::vector<Flag<T>>&, double);

POSLAB_INSTANTIATE(Rational)
POSLAB_INSTANTIATE(double)
#undef POSLAB_INSTANTIATE

}  // namespace poslab
