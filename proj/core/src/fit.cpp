#include "blowup/fit.hpp"

#include <cmath>

#include "blowup/error.hpp"

namespace blowup {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(Errc::WindowTooShort, "need at least two points for a line fit");
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) throw Error(Errc::DegenerateFit, "abscissae coincide");
  LineFit lf;
  lf.slope = sxy / sxx;
  lf.intercept = my - lf.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (lf.intercept + lf.slope * x[i]);
    ss += e * e;
  }
  lf.residual = std::sqrt(ss / n);
  lf.count = n;
  return lf;
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  double sign = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || y[i] == 0 || !std::isfinite(y[i])) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
    sign += y[i] > 0 ? 1 : -1;
  }
  if (lx.size() < 4) throw Error(Errc::WindowTooShort, "fewer than four usable samples in the fit window");
  const LineFit lf = fit_line(lx, ly);
  PowerFit pf;
  pf.exponent = lf.slope;
  pf.coefficient = (sign >= 0 ? 1.0 : -1.0) * std::exp(lf.intercept);
  pf.residual = lf.residual;
  pf.count = lf.count;
  return pf;
}

PowerFit fit_power_law(const RadialGrid& g, const std::vector<double>& f, double ra, double rb) {
  if (f.size() != g.size()) throw Error(Errc::GridMismatch, "sample count differs from grid size");
  if (rb > g.r_max() * (1 + 1e-12) || ra <= 0 || rb <= ra)
    throw Error(Errc::WindowTooShort, "fit window outside the grid");
  std::vector<double> x, y;
  for (std::size_t j = g.lower_index(ra); j < g.size() && g[j] <= rb; ++j) {
    x.push_back(g[j]);
    y.push_back(f[j]);
  }
  return fit_power_law(x, y);
}

bool exponent_close(double fitted, double target, double rel, double abs_floor) {
  return std::abs(fitted - target) <= std::max(rel * std::abs(target), abs_floor);
}

}  // namespace blowup
