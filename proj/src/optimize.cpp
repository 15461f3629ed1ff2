#include "poslab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace poslab {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x0,
                             const NelderMeadOptions& opts) {
  const std::size_t d = x0.size();
  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> pts(d + 1, x0);
  std::vector<double> vals(d + 1);
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += opts.initial_step;
  for (std::size_t i = 0; i <= d; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(d + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2;
    std::vector<double> v2;
    for (auto i : order) {
      p2.push_back(pts[i]);
      v2.push_back(vals[i]);
    }
    pts.swap(p2);
    vals.swap(v2);
  };
  auto combine = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> out(d);
    for (std::size_t i = 0; i < d; ++i) out[i] = c[i] + t * (w[i] - c[i]);
    return out;
  };

  while (true) {
    sort_simplex();
    double diam = 0.0;
    for (std::size_t i = 1; i <= d; ++i)
      for (std::size_t k = 0; k < d; ++k) diam = std::max(diam, std::fabs(pts[i][k] - pts[0][k]));
    const double spread = vals[d] - vals[0];
    if (std::isfinite(spread) && (spread <= opts.ftol * std::fabs(vals[0]) + 1e-14 || diam <= opts.xtol)) {
      res.converged = true;
      break;
    }
    if (res.evaluations >= opts.max_evaluations) break;

    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) centroid[k] += pts[i][k] / static_cast<double>(d);

    const auto xr = combine(centroid, pts[d], -1.0);
    const double fr = eval(xr);
    if (fr < vals[0]) {
      const auto xe = combine(centroid, pts[d], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[d] = xe;
        vals[d] = fe;
      } else {
        pts[d] = xr;
        vals[d] = fr;
      }
      continue;
    }
    if (fr < vals[d - 1]) {
      pts[d] = xr;
      vals[d] = fr;
      continue;
    }
    const bool outside = fr < vals[d];
    const auto xc = combine(centroid, outside ? xr : pts[d], 0.5);
    const double fc = eval(xc);
    if (fc < std::min(fr, vals[d])) {
      pts[d] = xc;
      vals[d] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= d; ++i) {
      pts[i] = combine(pts[0], pts[i], 0.5);
      vals[i] = eval(pts[i]);
    }
  }
  res.x = pts[0];
  res.value = vals[0];
  return res;
}

}  // namespace poslab
