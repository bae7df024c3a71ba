#include <cmath>

#include <gtest/gtest.h>

#include "blowup/spectral.hpp"
#include "support.hpp"

using namespace blowup;
using blowup::testing::basis135;
using blowup::testing::default_grid;
using blowup::testing::table135;

namespace {
std::vector<double> gaussian(const RadialGrid& g, double c, double w) {
  std::vector<double> f(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(-std::pow((g[j] - c) / w, 2));
  return f;
}
}  // namespace

TEST(Spectral, KernelPairZeroMode) {
  const KernelPair& pair = basis135().pair;
  EXPECT_EQ(pair.n, 0);
  EXPECT_DOUBLE_EQ(pair.gamma_n, 3.5);
  EXPECT_LT(pair.cross_check_deviation, 1e-6);
  EXPECT_NEAR(pair.T0_tail.exponent, -3.5, 0.02);
  EXPECT_NEAR(pair.T0_origin_exponent, 0.0, 1e-3);
  EXPECT_NEAR(pair.Gamma_origin_exponent, 2.0 - 13, 1e-2);
}

TEST(Spectral, HigherHarmonicPair) {
  const KernelPair pair = kernel_pair(table135(), 1, default_grid());
  EXPECT_LT(pair.cross_check_deviation, 1e-6);  // against -Q'
  EXPECT_NEAR(pair.T0_tail.exponent, -1.5, 0.02);
  EXPECT_NEAR(pair.T0_origin_exponent, 1.0, 1e-3);
}

TEST(Spectral, WronskianOfThePair) {
  // r^{d-1} (T0 Gamma' - T0' Gamma) is constant
  const KernelPair& pair = basis135().pair;
  const auto& g = pair.grid();
  auto w = [&](double r) {
    const std::size_t j = g.lower_index(r);
    return std::pow(g[j], 12) * (pair.T0.f[j] * pair.Gamma.df[j] - pair.T0.df[j] * pair.Gamma.f[j]);
  };
  const double w1 = w(1.0);
  for (double r : {0.2, 3.0, 20.0}) EXPECT_NEAR(w(r) / w1, 1.0, 1e-6) << r;
}

TEST(Spectral, InversionRoundTrip) {
  const KernelPair& pair = basis135().pair;
  const auto& g = pair.grid();
  const RadialProfile f = make_profile(default_grid(), "f", gaussian(g, 2.0, 0.7), 1);
  InversionRecord rec;
  const RadialProfile u = invert_H(pair, f, &rec);
  auto Hu = apply_H(pair, u.f);
  for (std::size_t j = 0; j < g.size(); ++j) Hu[j] -= f.f[j];
  EXPECT_LT(relative_residual(g, Hu, f.f, 13, g.h_min(), g.r_max() / 10), 1e-6);
}

TEST(Spectral, LadderRecursion) {
  const ProfileLadder& lad = basis135().ladder;
  ASSERT_EQ(static_cast<int>(lad.T.size()), table135().row(0).L + 1);
  EXPECT_TRUE(lad.invariants_ok);
  for (double res : lad.ladder_residual) EXPECT_LT(res, 1e-6);
  for (std::size_t i = 0; i < lad.T.size(); ++i) EXPECT_NEAR(lad.T_fit[i].exponent, -3.5 + 2.0 * i, 0.07) << i;
}

TEST(Spectral, ScaledLadderIsLinear) {
  const ProfileLadder& lad = basis135().ladder;
  const ProfileLadder s = scaled_ladder(lad, -2.0);
  for (std::size_t i = 0; i < lad.T.size(); ++i) EXPECT_DOUBLE_EQ(s.T[i].f[300], -2.0 * lad.T[i].f[300]);
}

TEST(Spectral, GeneratorsAreDualToTheLadder) {
  const KernelPair& pair = basis135().pair;
  const OrthoBasis ob = build_phi_basis(pair, basis135().ladder, 40.0);
  const GramReport G = orthogonality_matrix(ob, basis135().ladder, pair);
  EXPECT_LT(G.offdiag_scaled, 1e-4);
  EXPECT_LT(G.diagonal_spread, 1e-4);
  EXPECT_LT(G.diagonal_vs_pairing, 1e-6);
}
