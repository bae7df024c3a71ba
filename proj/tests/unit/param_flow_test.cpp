#include <cmath>

#include <gtest/gtest.h>

#include "blowup/param_flow.hpp"
#include "support.hpp"

using namespace blowup;
using blowup::testing::table135;

TEST(ParamFlow, SpecialCoefficientsSolveTheRecursion) {
  const double alpha = 3.0;
  for (int ell : {2, 3, 4}) {
    const auto c = special_coefficients(alpha, ell);
    ASSERT_EQ(static_cast<int>(c.size()), ell);
    // -i c_i = -(2i - alpha) c_1 c_i + c_{i+1}, c_{ell+1} = 0
    for (int i = 1; i <= ell; ++i) {
      const double next = i < ell ? c[i] : 0.0;
      EXPECT_NEAR(-i * c[i - 1], -(2 * i - alpha) * c[0] * c[i - 1] + next, 1e-12 * std::abs(c[i - 1])) << ell << i;
    }
  }
}

TEST(ParamFlow, LambdaClosedFormAgreesWithQuadrature) {
  // lambda_s / lambda = -b_1 = -c_1 / s, dt/ds = lambda^2
  const double alpha = 3.0, s0 = 10.0, lam0 = 0.7;
  const int ell = 2;
  const double c1 = special_coefficients(alpha, ell)[0];
  for (double s : {15.0, 40.0, 200.0}) {
    const int n = 20000;
    double t = 0;
    for (int k = 0; k < n; ++k) {
      const double a = s0 + (s - s0) * k / n, b = s0 + (s - s0) * (k + 1) / n, m = 0.5 * (a + b);
      auto f = [&](double x) { return lam0 * lam0 * std::pow(s0 / x, 2 * c1); };
      t += (b - a) / 6 * (f(a) + 4 * f(m) + f(b));
    }
    EXPECT_NEAR(special_lambda(alpha, ell, s0, lam0, t), lam0 * std::pow(s0 / s, c1), 1e-10) << s;
  }
  EXPECT_NEAR(special_blowup_time(alpha, ell, s0, lam0), lam0 * lam0 * (2 * ell - alpha) * s0 / alpha, 1e-14);
}

TEST(ParamFlow, RightHandSideVanishesOnTheSpecialSolution) {
  const auto& t = table135();
  FlowState st;
  st.s = 30.0;
  st.b = special_solution(t, 2, st.s);
  const FlowDerivative dv = flow_rhs(st, t);
  EXPECT_NEAR(dv.lambda_s, -st.b.b1() * st.lambda, 1e-15);
  const auto c = special_coefficients(t.alpha, 2);
  EXPECT_NEAR(dv.b_s[0], -c[0] / (st.s * st.s), 1e-15);
  EXPECT_NEAR(dv.b_s[1], -2 * c[1] / std::pow(st.s, 3), 1e-15);
  EXPECT_NEAR(dv.b_s[2], 0.0, 1e-15);
}

TEST(ParamFlow, LinearizationSpectrum) {
  const auto& t = table135();
  const LinearizationReport lin = linearize(t, 2, 4);
  EXPECT_LT(lin.max_eigen_deviation, 1e-10);
  EXPECT_TRUE(lin.counts_ok);
  ASSERT_EQ(lin.charpoly_numeric.size(), lin.charpoly_closed_form.size());
  // (X + 1)(6 - X) with 6 = 2 alpha / (4 - alpha); det(A - X) = (-1 - X)(6 - X) is its negative
  EXPECT_NEAR(lin.charpoly_closed_form[0], 6.0, 1e-12);
  for (std::size_t k = 0; k < lin.charpoly_numeric.size(); ++k)
    EXPECT_NEAR(lin.charpoly_numeric[k], -lin.charpoly_closed_form[k], 1e-10);
  // the stable tail: -(2i - alpha) ell / (2 ell - alpha) + ... is closed form; here only the count of nonnegatives
  int nonneg = 0;
  for (double e : lin.numeric) nonneg += e >= 0;
  EXPECT_EQ(nonneg, lin.radial_nonnegative);
}

TEST(ParamFlow, RenormalizedCoordinates) {
  const auto& t = table135();
  const double s = 20.0;
  const ParamFamily bbar = special_solution(t, 2, s);
  ParamFamily b = bbar;
  b.radial[1] += 3e-4;
  const auto U = renormalize(b, bbar.radial, s);
  EXPECT_NEAR(U[0], 0.0, 1e-15);
  EXPECT_NEAR(U[1], 3e-4 * s * s, 1e-12);
}

TEST(ParamFlow, ShootingTrapsTheSolution) {
  const ShootResult r = shoot_trapped(table135(), 2, 20.0, 2000.0);
  EXPECT_TRUE(r.trapped);
  EXPECT_LT(r.bracket_width, 1e-12);
  EXPECT_NE(r.lo_exit.kind, r.hi_exit.kind);
  EXPECT_EQ(r.certificate.exit.kind, ExitKind::None);
}
