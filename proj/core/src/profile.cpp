#include "blowup/profile.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/error.hpp"

namespace blowup {

RadialProfile make_profile(std::shared_ptr<const RadialGrid> grid, std::string name, std::vector<double> f,
                           int parity) {
  if (f.size() != grid->size()) throw Error(Errc::GridMismatch, "profile " + name + " does not match grid");
  RadialProfile p;
  p.grid = std::move(grid);
  p.name = std::move(name);
  p.f = std::move(f);
  p.parity = parity;
  differentiate(p);
  return p;
}

void differentiate(RadialProfile& p) { p.df = derivative(*p.grid, p.f, p.parity); }

void require_same_grid(const RadialProfile& a, const RadialProfile& b) {
  if (a.grid != b.grid && !(a.grid->spec() == b.grid->spec()))
    throw Error(Errc::GridMismatch, a.name + " and " + b.name + " live on different grids");
}

double weighted_norm(const RadialGrid& g, const std::vector<double>& f, int d, double a, double b) {
  std::vector<double> sq(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) sq[j] = f[j] * f[j];
  return std::sqrt(std::max(0.0, g.quadrature(d - 1).integral(sq, a, b)));
}

double weighted_inner(const RadialGrid& g, const std::vector<double>& f, const std::vector<double>& h, int d) {
  std::vector<double> prod(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) prod[j] = f[j] * h[j];
  return g.quadrature(d - 1).total(prod);
}

void fill_origin(const RadialGrid& g, std::vector<double>& f, int parity) {
  if (parity < 0) {
    f[0] = 0.0;
    return;
  }
  // quadratic in r^2 through nodes 1..3, evaluated at 0
  const double x1 = g[1] * g[1], x2 = g[2] * g[2], x3 = g[3] * g[3];
  const double l1 = x2 * x3 / ((x1 - x2) * (x1 - x3));
  const double l2 = x1 * x3 / ((x2 - x1) * (x2 - x3));
  const double l3 = x1 * x2 / ((x3 - x1) * (x3 - x2));
  f[0] = l1 * f[1] + l2 * f[2] + l3 * f[3];
}

double interpolate(const RadialGrid& g, const std::vector<double>& f, double x) {
  if (x < 0 || x > g.r_max() * (1 + 1e-12)) throw Error(Errc::InvalidInput, "interpolation point outside the grid");
  const std::size_t n = g.size();
  std::size_t j = g.lower_index(x);
  if (j < n && g[j] == x) return f[j];
  const std::size_t lo = std::min(j >= 3 ? j - 3 : 0, n - 6);
  double out = 0.0;
  for (std::size_t a = lo; a < lo + 6; ++a) {
    double w = 1.0;
    for (std::size_t b = lo; b < lo + 6; ++b)
      if (b != a) w *= (x - g[b]) / (g[a] - g[b]);
    out += w * f[a];
  }
  return out;
}

}  // namespace blowup
