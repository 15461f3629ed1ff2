#pragma once

#include <functional>
#include <vector>

namespace poslab {

struct NelderMeadOptions {
  double initial_step = 0.5;
  double ftol = 1e-6;   // relative spread of simplex values
  double xtol = 1e-10;  // absolute simplex diameter
  int max_evaluations = 2000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Standard reflection/expansion/contraction/shrink simplex search. Non-finite
/// values are treated as +infinity.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x0,
                             const NelderMeadOptions& opts = {});

}  // namespace poslab
