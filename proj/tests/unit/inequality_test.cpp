#include <cmath>

#include <gtest/gtest.h>

#include "blowup/error.hpp"
#include "blowup/inequality.hpp"
#include "support.hpp"

using namespace blowup;
using blowup::testing::basis135;
using blowup::testing::table135;

namespace {
// int_0^inf r^k e^{-2 r^2} dr
double I(int k) { return std::tgamma((k + 1) / 2.0) / (2 * std::pow(2.0, (k + 1) / 2.0)); }
}  // namespace

TEST(Inequality, RellichFormsOfAGaussian) {
  const int d = 13;
  const RadialFunction gauss = [](double r, double& u, double& up, double& upp) {
    const double e = std::exp(-r * r);
    u = e;
    up = -2 * r * e;
    upp = (4 * r * r - 2) * e;
  };
  const RellichForms f = rellich_forms(d, gauss, 1e-3, 10.0);
  EXPECT_NEAR(f.u2_r4 / I(d - 5), 1.0, 1e-10);
  EXPECT_NEAR(f.grad2_r2 / (4 * I(d - 1)), 1.0, 1e-10);
  const double lap = 16 * I(d + 3) - 16.0 * d * I(d + 1) + 4.0 * d * d * I(d - 1);
  EXPECT_NEAR(f.lap2 / lap, 1.0, 1e-10);
  EXPECT_GT(f.lap2 / f.u2_r4, std::pow((d - 4) * d / 4.0, 2));
  EXPECT_GT(f.lap2 / f.grad2_r2, d * d / 4.0);
}

TEST(Inequality, RandomBumpsAreNonzeroAndSupported) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const BumpSum b = random_bump_sum(rng, 0.0, std::log(1e3), 8);
    ASSERT_FALSE(b.coef.empty());
    double norm = 0;
    for (double c : b.coef) norm += c * c;
    EXPECT_GT(norm, 0.0);
    EXPECT_GE(b.support_lo(), 1.0 - 1e-12);
    EXPECT_LE(b.support_hi(), 1e3 * (1 + 1e-12));
  }
}

TEST(Inequality, RellichNeverViolated) {
  RellichOptions o;
  o.samples = 200;
  const RellichReport r = rellich_ratio(o);
  EXPECT_DOUBLE_EQ(r.const_u, std::pow(9 * 13 / 4.0, 2));
  EXPECT_DOUBLE_EQ(r.const_grad, 169 / 4.0);
  EXPECT_LE(r.worst_violation, 1e-6);
  EXPECT_GE(r.span_min_u, r.const_u);
}

TEST(Inequality, HardyTracksTheSharpConstant) {
  double previous = INFINITY;
  for (double q : {0.0, 2.0, 4.0}) {
    HardyOptions o;
    o.q = q;
    o.samples = 200;
    const HardyReport h = hardy_ratio(o);
    EXPECT_FALSE(h.boundary_branch);
    EXPECT_DOUBLE_EQ(h.sharp, (5.5 - q) * (5.5 - q));
    EXPECT_GE(h.span_min, h.sharp * (1 - 1e-9)) << q;
    EXPECT_GE(h.sample_min, h.span_min * (1 - 1e-9)) << q;
    EXPECT_LT(h.span_min, previous);
    previous = h.span_min;
  }
}

TEST(Inequality, HardyBoundaryBranchAndGap) {
  HardyOptions o;
  o.q = 7.0;
  o.samples = 100;
  const HardyReport h = hardy_ratio(o);
  EXPECT_TRUE(h.boundary_branch);
  EXPECT_GE(std::min(h.sample_min, h.span_min), h.proof_constant);
  o.q = 5.45;
  EXPECT_THROW(hardy_ratio(o), Error);
}

TEST(Inequality, CoercivityNeedsTheConstraint) {
  QuotientProblem p;
  p.nodes = 800;
  const CoercivityReport on = coercivity_spectrum(p, table135(), basis135());
  p.constraints = false;
  const CoercivityReport off = coercivity_spectrum(p, table135(), basis135());
  EXPECT_TRUE(on.converged);
  EXPECT_EQ(on.constraint_count, 1);
  EXPECT_GT(on.min_quotient, 1e-4);
  EXPECT_LT(off.min_quotient, 1e-3 * on.min_quotient);
  EXPECT_LT(on.kernel_quotient, 1e-3 * on.min_quotient);
}

TEST(Inequality, CoercivityRejectsBadPower) {
  QuotientProblem p;
  p.i = 0;
  EXPECT_THROW(coercivity_spectrum(p, table135(), basis135()), Error);
}
