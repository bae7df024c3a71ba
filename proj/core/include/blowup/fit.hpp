#pragma once

#include <vector>

#include "blowup/grid.hpp"
#include "blowup/profile.hpp"

namespace blowup {

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // root mean square
  std::size_t count = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct PowerFit {
  double exponent = 0;
  double coefficient = 0;  // signed
  double residual = 0;
  std::size_t count = 0;
};

// Least squares of log|f| against log r over nodes with r in [ra, rb].
PowerFit fit_power_law(const RadialGrid& g, const std::vector<double>& f, double ra, double rb);
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// Tolerance used by exponent checks: relative, floored so that exponents near zero stay meaningful.
bool exponent_close(double fitted, double target, double rel, double abs_floor = 0.0);

}  // namespace blowup
