#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace blowup {

struct GridSpec {
  double h_core = 0.01;
  double r_core = 10.0;
  double r_max = 31622.776601683792;  // 10^4.5
  double tail_step = 0.0;  // log spacing of the tail; 0 selects h_core / r_core

  double log_step() const { return tail_step > 0 ? tail_step : h_core / r_core; }
  bool operator==(const GridSpec&) const = default;
};

// Finite difference weights (Fornberg) for derivatives 0..max_order at x0.
// Result is indexed [order][node].
std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& x, int max_order);

// One stencil entry: node index and whether the node is the mirror image -r_k.
struct StencilNode {
  std::size_t index = 0;
  bool mirrored = false;
};

template <std::size_t N>
struct Stencil {
  std::array<StencilNode, N> nodes{};
  std::array<double, N> d1{};
  std::array<double, N> d2{};
};

class RadialQuadrature;

// Uniform core [0, r_core] joined to a geometric tail up to r_max.
class RadialGrid {
 public:
  explicit RadialGrid(const GridSpec& spec);
  ~RadialGrid();
  RadialGrid(const RadialGrid&) = delete;
  RadialGrid& operator=(const RadialGrid&) = delete;
  static std::shared_ptr<const RadialGrid> make(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  const std::vector<double>& r() const { return r_; }
  double operator[](std::size_t j) const { return r_[j]; }
  std::size_t size() const { return r_.size(); }
  double r_max() const { return r_.back(); }
  std::size_t core_nodes() const { return n_core_; }
  double h_min() const { return r_[1] - r_[0]; }

  // First node with r_j >= x (size() if none).
  std::size_t lower_index(double x) const;

  // Five-point stencils for the first and second derivative at every node.
  const Stencil<5>& stencil(std::size_t j) const { return stencils_[j]; }

  // Product quadrature with weight s^power, built on first use.
  const RadialQuadrature& quadrature(int power) const;

 private:
  GridSpec spec_;
  std::vector<double> r_;
  std::size_t n_core_ = 0;
  std::vector<Stencil<5>> stencils_;
  mutable std::mutex cache_mutex_;
  mutable std::map<int, std::unique_ptr<RadialQuadrature>> quadratures_;
};

// f' and f'' on the grid; parity = +1 (even) or -1 (odd) closes the stencil at r = 0.
std::vector<double> derivative(const RadialGrid& g, const std::vector<double>& f, int parity);
std::vector<double> second_derivative(const RadialGrid& g, const std::vector<double>& f, int parity);

// Radial operator f'' + (d-1)/r f' - n(d+n-2)/r^2 f with the regular limit at r = 0.
std::vector<double> radial_laplacian(const RadialGrid& g, const std::vector<double>& f, int d, int n);

// Product integration of s^power * g(s), g replaced by its local cubic interpolant.
class RadialQuadrature {
 public:
  RadialQuadrature(const RadialGrid& grid, int power);

  const RadialGrid& grid() const { return grid_; }
  int power() const { return power_; }

  // I_j = int_0^{r_j} s^power g(s) ds
  std::vector<double> cumulative(const std::vector<double>& g) const;
  // J_j = int_{r_j}^{r_max} s^power g(s) ds, summed from the outer end
  std::vector<double> reverse_cumulative(const std::vector<double>& g) const;
  // int_{r_{j0}}^{r_j} s^power g(s) ds for j >= j0, zero below j0
  std::vector<double> cumulative_from(const std::vector<double>& g, std::size_t j0) const;
  double total(const std::vector<double>& g) const;
  // int_0^{min(B, r_max)} s^power g(s) ds
  double integral_to(const std::vector<double>& g, double B) const;
  // int_{a}^{b} s^power g(s) ds over the grid, endpoints clipped to the grid
  double integral(const std::vector<double>& g, double a, double b) const;

 private:
  struct Interval {
    std::array<std::size_t, 4> idx;
    std::array<double, 4> w;
  };
  double partial(const std::vector<double>& g, std::size_t k, double a, double b) const;

  const RadialGrid& grid_;
  int power_;
  std::vector<Interval> intervals_;
};

}  // namespace blowup
