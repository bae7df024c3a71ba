#include <cmath>

#include <gtest/gtest.h>

#include "blowup/blowup_profile.hpp"
#include "blowup/param_flow.hpp"
#include "support.hpp"

using namespace blowup;
using blowup::testing::basis135;
using blowup::testing::table135;

TEST(BlowupProfile, ZeroParametersGiveQ) {
  const ProfileBasis& B = basis135();
  const ApproximateProfile P = assemble(B, table135(), ParamFamily(std::vector<double>(4, 0.0)), true);
  for (std::size_t j = 0; j < B.gs.Q.f.size(); j += 97) EXPECT_DOUBLE_EQ(P.Qb.f[j], B.gs.Q.f[j]);
}

TEST(BlowupProfile, LinearInTheLadder) {
  const ProfileBasis& B = basis135();
  ParamFamily b({0.01, 1e-4, 0.0, 0.0});
  const ApproximateProfile P = assemble(B, table135(), b, false);
  for (std::size_t j = 0; j < B.gs.Q.f.size(); j += 131) {
    const double want = B.gs.Q.f[j] + 0.01 * B.ladder.T[1].f[j] + 1e-4 * B.ladder.T[2].f[j];
    EXPECT_NEAR(P.Qb.f[j], want, 1e-12 * (std::abs(want) + 1e-300));
  }
}

TEST(BlowupProfile, ParameterDerivative) {
  const ProfileBasis& B = basis135();
  ParamFamily b({0.02, 1e-4, 1e-6, 0.0});
  const auto d1 = dQb_db(B, b, 1, true);
  const double h = 1e-6;
  ParamFamily bp = b, bm = b;
  bp.radial[0] += h;
  bm.radial[0] -= h;
  const auto Pp = assemble(B, table135(), bp, true), Pm = assemble(B, table135(), bm, true);
  for (double r : {0.5, 2.0, 10.0}) {
    const std::size_t j = B.grid->lower_index(r);
    EXPECT_NEAR((Pp.Qb.f[j] - Pm.Qb.f[j]) / (2 * h), d1[j], 1e-6 * (std::abs(d1[j]) + 1e-12)) << r;
  }
}

TEST(BlowupProfile, SpecialSolutionMeetsSizeBounds) {
  EXPECT_TRUE(size_bounds_hold(special_solution(table135(), 2, 50.0), table135(), 10.0));
  EXPECT_FALSE(size_bounds_hold(ParamFamily({0.01, 0.5, 0.0, 0.0}), table135(), 10.0));
}

TEST(BlowupProfile, S2CorrectionSolvesItsEquation) { EXPECT_LT(basis135().S2_inversion_residual, 1e-6); }

TEST(BlowupProfile, ResidualLocalizesWithS2) {
  const ProfileBasis& B = basis135();
  const auto& t = table135();
  auto inner = [&](bool with) {
    ApproximateProfile P = assemble(B, t, special_solution(t, 2, 50.0), with);
    localize(P, B, t);
    residual(P, B, t);
    return P.residual.norms[1];
  };
  EXPECT_LT(inner(true), inner(false));
}
