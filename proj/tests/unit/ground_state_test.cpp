#include <cmath>

#include <gtest/gtest.h>

#include "blowup/ground_state.hpp"
#include "support.hpp"

using namespace blowup;
using blowup::testing::basis135;
using blowup::testing::table135;

TEST(GroundState, OriginAndPositivity) {
  const GroundState& gs = basis135().gs;
  EXPECT_DOUBLE_EQ(gs.Q.f[0], 1.0);
  EXPECT_NEAR(gs.Q.df[0], 0.0, 1e-12);
  // Q = 1 - r^2 / (2d) + ...
  const auto& g = *gs.Q.grid;
  EXPECT_NEAR(gs.Q.f[5], 1 - g[5] * g[5] / 26.0, 1e-7);
  for (double q : gs.Q.f) ASSERT_GT(q, 0.0);
}

TEST(GroundState, SolvesTheElliptic) {
  const GroundState& gs = basis135().gs;
  const auto& g = *gs.Q.grid;
  const auto F = nonlinear_operator(g, gs.Q.f, 13, 5);
  for (double r : {0.5, 1.0, 3.0, 10.0}) {
    const std::size_t j = g.lower_index(r);
    EXPECT_LT(std::abs(F[j]), 1e-7 * std::abs(gs.Q.f[j] / (r * r))) << r;
  }
}

TEST(GroundState, TailConstants) {
  const TailFit tf = fit_tail(basis135().gs, table135());
  EXPECT_NEAR(tf.exponent, -0.5, 1e-3);
  EXPECT_NEAR(tf.coefficient / std::pow(5.25, 0.25), 1.0, 1e-3);
  ASSERT_TRUE(tf.has_sub);
  EXPECT_NEAR(tf.sub_exponent, -3.5, 0.07);
}

TEST(GroundState, BoundsAndPotential) {
  const BoundReport b = verify_bounds(basis135().gs, table135());
  EXPECT_TRUE(b.ok);
  EXPECT_TRUE(b.V_negative);
  // r^2 V + p c^{p-1} decays like r^{-(gamma - m)} = r^{-3}
  EXPECT_NEAR(b.potential_decay_exponent, -3.0, 0.1);
}

TEST(GroundState, LambdaQAgreesWithDirectFormula) {
  const GroundState& gs = basis135().gs;
  const RadialProfile a = lambda_Q(gs, table135());
  const RadialProfile b = lambda_op(gs.Q, 0.5);
  const auto& g = *gs.Q.grid;
  for (double r : {0.1, 1.0, 5.0, 30.0}) {
    const std::size_t j = g.lower_index(r);
    EXPECT_NEAR(a.f[j], b.f[j], 1e-8 * std::abs(gs.Q.f[j])) << r;
  }
}

// F(u_lambda) = lambda^2 (F u)_lambda with u_lambda(r) = lambda^{2/(p-1)} u(lambda r)
TEST(GroundState, ScalingEquivariance) {
  const GroundState& gs = basis135().gs;
  const auto& g = *gs.Q.grid;
  const auto F = nonlinear_operator(g, gs.Q.f, 13, 5);
  for (double lam : {0.5, 2.0}) {
    std::vector<double> u(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) u[j] = std::sqrt(lam) * interpolate(g, gs.Q.f, std::min(lam * g[j], g.r_max()));
    const auto Fl = nonlinear_operator(g, u, 13, 5);
    for (double r : {0.5, 2.0, 8.0}) {
      const std::size_t j = g.lower_index(r);
      const double want = lam * lam * std::sqrt(lam) * interpolate(g, F, lam * g[j]);
      EXPECT_NEAR(Fl[j], want, 1e-6 * std::abs(u[j]) / (g[j] * g[j])) << lam << " " << r;
    }
  }
}
