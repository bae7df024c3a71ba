#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blowup/grid.hpp"

namespace blowup {

struct TailFit {
  double r_a = 0;
  double r_b = 0;
  double exponent = 0;
  double coefficient = 0;
  double residual = 0;
  bool has_sub = false;
  double sub_exponent = 0;
  double sub_coefficient = 0;
  double sub_residual = 0;
};

struct RadialProfile {
  std::shared_ptr<const RadialGrid> grid;
  std::string name;
  std::vector<double> f;
  std::vector<double> df;
  int parity = 1;  // symmetry of the extension through r = 0
  bool singular_origin = false;
  std::optional<TailFit> tail;

  std::size_t size() const { return f.size(); }
  const std::vector<double>& r() const { return grid->r(); }
};

RadialProfile make_profile(std::shared_ptr<const RadialGrid> grid, std::string name, std::vector<double> f,
                           int parity);

// Fills df by finite differences.
void differentiate(RadialProfile& p);

void require_same_grid(const RadialProfile& a, const RadialProfile& b);

// Weighted norm (int_{a}^{b} f^2 r^{d-1} dr)^{1/2}.
double weighted_norm(const RadialGrid& g, const std::vector<double>& f, int d, double a, double b);
double weighted_inner(const RadialGrid& g, const std::vector<double>& f, const std::vector<double>& h, int d);

// Sets the r = 0 sample from r > 0 data: zero for odd parity, an even fit in r^2 otherwise.
void fill_origin(const RadialGrid& g, std::vector<double>& f, int parity);

// Six-point Lagrange interpolation of grid samples at x in [0, r_max].
double interpolate(const RadialGrid& g, const std::vector<double>& f, double x);

}  // namespace blowup
