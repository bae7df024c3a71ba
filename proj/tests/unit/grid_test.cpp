#include <cmath>

#include <gtest/gtest.h>

#include "blowup/grid.hpp"
#include "blowup/profile.hpp"

using namespace blowup;

namespace {
GridSpec small_spec() {
  GridSpec s;
  s.h_core = 0.01;
  s.r_core = 2.0;
  s.r_max = 50.0;
  return s;
}
}  // namespace

TEST(Grid, FornbergExactOnCubics) {
  const std::vector<double> x{0.0, 0.3, 0.7, 1.2, 2.0};
  const double x0 = 0.5;
  const auto w = fornberg_weights(x0, x, 2);
  double f = 0, f1 = 0, f2 = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double v = x[k] * x[k] * x[k] - 2 * x[k];
    f += w[0][k] * v;
    f1 += w[1][k] * v;
    f2 += w[2][k] * v;
  }
  EXPECT_NEAR(f, x0 * x0 * x0 - 2 * x0, 1e-13);
  EXPECT_NEAR(f1, 3 * x0 * x0 - 2, 1e-12);
  EXPECT_NEAR(f2, 6 * x0, 1e-11);
}

TEST(Grid, CoreThenGeometricTail) {
  const RadialGrid g(small_spec());
  EXPECT_DOUBLE_EQ(g[0], 0.0);
  EXPECT_NEAR(g.h_min(), 0.01, 1e-15);
  // the tail ends on the first node at or beyond r_max
  EXPECT_GE(g.r_max(), 50.0);
  EXPECT_LT(std::log(g.r_max() / 50.0), g.spec().log_step() + 1e-12);
  for (std::size_t j = g.core_nodes() + 1; j < g.size(); ++j)
    EXPECT_NEAR(std::log(g[j] / g[j - 1]), g.spec().log_step(), 1e-9);
}

TEST(Grid, LaplacianOfGaussian) {
  const auto g = RadialGrid::make(small_spec());
  const int d = 13;
  std::vector<double> f(g->size());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::exp(-(*g)[j] * (*g)[j]);
  const auto lap = radial_laplacian(*g, f, d, 0);
  double worst = 0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double r = (*g)[j];
    worst = std::max(worst, std::abs(lap[j] - (4 * r * r - 2 * d) * f[j]));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Grid, OddDerivativeAtOrigin) {
  const auto g = RadialGrid::make(small_spec());
  std::vector<double> f(g->size());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::sin((*g)[j]);
  const auto df = derivative(*g, f, -1);
  EXPECT_NEAR(df[0], 1.0, 1e-9);
  EXPECT_NEAR(df[100], std::cos((*g)[100]), 1e-9);
}

TEST(Grid, ProductQuadratureOfPolynomials) {
  const auto g = RadialGrid::make(small_spec());
  std::vector<double> f(g->size());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = 1.0 + (*g)[j];
  // int_0^2 s^12 (1 + s) ds
  const auto& q = g->quadrature(12);
  const double want = std::pow(2.0, 13) / 13 + std::pow(2.0, 14) / 14;
  EXPECT_NEAR(q.integral_to(f, 2.0) / want, 1.0, 1e-12);
  const auto cum = q.cumulative(f);
  const double R = g->r_max();
  EXPECT_NEAR(cum.back() / (std::pow(R, 13) / 13 + std::pow(R, 14) / 14), 1.0, 1e-10);
}

TEST(Grid, InterpolationAndWeightedNorm) {
  const auto g = RadialGrid::make(small_spec());
  std::vector<double> f(g->size());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::exp(-(*g)[j]);
  EXPECT_NEAR(interpolate(*g, f, 1.2345), std::exp(-1.2345), 1e-10);
  EXPECT_NEAR(interpolate(*g, f, 17.3), std::exp(-17.3), 1e-9);
  // int_0^inf e^{-2r} r^2 dr = 1/4
  EXPECT_NEAR(weighted_norm(*g, f, 3, 0.0, 50.0), 0.5, 1e-8);
}
