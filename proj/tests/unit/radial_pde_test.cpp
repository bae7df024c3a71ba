#include <cmath>

#include <gtest/gtest.h>

#include "blowup/error.hpp"
#include "blowup/radial_pde.hpp"
#include "support.hpp"

using namespace blowup;
using blowup::testing::table135;

TEST(SinhGrid, SpacingAndQuadrature) {
  const SinhGrid g = SinhGrid::with_min_spacing(10.0, 2000, 1e-3);
  EXPECT_NEAR(g.h_min(), 1e-3, 1e-4);
  EXPECT_DOUBLE_EQ(g.r().back(), 10.0);
  // int_0^inf e^{-r^2} r^{d-1} dr = Gamma(d/2) / 2
  std::vector<double> f(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(-g.r()[j] * g.r()[j]);
  EXPECT_NEAR(g.weighted_integral(f, 13) / (std::tgamma(6.5) / 2), 1.0, 1e-8);
  const auto w = g.node_weights(13);
  double s = 0;
  for (std::size_t j = 0; j < g.size(); ++j) s += w[j] * f[j];
  EXPECT_NEAR(s, g.weighted_integral(f, 13), 1e-12 * s);
}

TEST(SinhGrid, Laplacian) {
  const SinhGrid g = SinhGrid::with_min_spacing(10.0, 2000, 1e-2);
  std::vector<double> f(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(-g.r()[j] * g.r()[j]);
  const auto lap = g.laplacian(f, 13);
  for (std::size_t j : {std::size_t{0}, std::size_t{100}, std::size_t{900}}) {
    const double r = g.r()[j];
    EXPECT_NEAR(lap[j], (4 * r * r - 26) * f[j], 1e-5) << r;
  }
}

TEST(RadialPde, ReactionOnlyMatchesTheOde) {
  SimConfig cfg;
  cfg.nodes = 200;
  cfg.diffusion = false;
  cfg.regrid = false;
  cfg.t_max = 0.2;
  cfg.init.kind = InitialData::Kind::Samples;
  cfg.init.samples = [](double) { return 1.0; };
  const SimState st = simulate(cfg, SimContext{&table135(), nullptr});
  // u' = u^5, u(0) = 1
  EXPECT_NEAR(st.u[0], std::pow(1 - 4 * 0.2, -0.25), 1e-9);
}

TEST(RadialPde, DiffusionOnlyMatchesTheHeatKernel) {
  SimConfig cfg;
  cfg.nodes = 1500;
  cfg.reaction = false;
  cfg.regrid = false;
  cfg.t_max = 0.05;
  cfg.dt_max = 1e-4;
  cfg.init.kind = InitialData::Kind::Samples;
  cfg.init.samples = [](double r) { return std::exp(-r * r); };
  const SimState st = simulate(cfg, SimContext{&table135(), nullptr});
  const double t = st.t, a = 1 + 4 * t;
  for (std::size_t j : {std::size_t{0}, std::size_t{300}, std::size_t{900}}) {
    const double r = st.grid->r()[j];
    EXPECT_NEAR(st.u[j], std::pow(a, -6.5) * std::exp(-r * r / a), 1e-5) << r;
  }
}

TEST(RadialPde, LargeBumpIsTypeOne) {
  SimConfig cfg;
  cfg.nodes = 1000;
  cfg.init.amplitude = 5.0;
  cfg.record_every = 2;
  const SimState st = simulate(cfg, SimContext{&table135(), nullptr});
  ASSERT_TRUE(st.overflow);
  const Classification c = classify_blowup(st.trace, table135());
  EXPECT_EQ(c.cls, BlowupClass::TypeI);
  EXPECT_NEAR(c.sup_exponent, -0.25, 0.01);
}

TEST(RadialPde, SmallDataDecays) {
  SimConfig cfg;
  cfg.nodes = 500;
  cfg.init.amplitude = 0.5;
  cfg.t_max = 1.0;
  const SimState st = simulate(cfg, SimContext{&table135(), nullptr});
  EXPECT_FALSE(st.overflow);
  EXPECT_LT(st.u[0], 0.5);
}

TEST(RadialPde, InvalidConfig) {
  SimConfig cfg;
  cfg.t_max = -1;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.init.kind = InitialData::Kind::Profile;
  EXPECT_THROW(simulate(cfg, SimContext{&table135(), nullptr}), Error);
}
