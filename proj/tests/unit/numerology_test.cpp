#include <cmath>

#include <gtest/gtest.h>

#include "blowup/error.hpp"
#include "blowup/numerology.hpp"

using namespace blowup;

namespace {

// roots of g^2 - (d-2) g + p c^{p-1} - n(n+d-2) = 0
double indicial_root(int d, int p, int n) {
  const double m = 2.0 / (p - 1);
  const double pc = p * m * (d - 2 - m);
  return (d - 2 - std::sqrt((d - 2.0) * (d - 2) - 4 * pc + 4.0 * n * (n + d - 2))) / 2;
}

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

Errc code_of(const ModelInput& in) {
  try {
    derive_constants(in);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return Errc::InvalidInput;
}

}  // namespace

TEST(Numerology, MainModel) {
  const ConstantsTable t = derive_constants(ModelInput{});
  EXPECT_DOUBLE_EQ(t.gamma, 3.5);
  EXPECT_DOUBLE_EQ(t.alpha, 3.0);
  EXPECT_DOUBLE_EQ(t.Delta, 16.0);
  EXPECT_DOUBLE_EQ(t.s_c, 6.0);
  EXPECT_NEAR(t.c_inf, std::pow(5.25, 0.25), 1e-14);
  EXPECT_NEAR(t.kappa, std::pow(4.0, -0.25), 1e-14);
  EXPECT_NEAR(t.row(1).gamma, 1.5, 1e-14);
}

TEST(Numerology, SecondModel) {
  ModelInput in;
  in.d = 11;
  in.p = 7;
  in.ell = 3;
  const ConstantsTable t = derive_constants(in);
  EXPECT_NEAR(t.gamma, 13.0 / 3, 1e-13);
  EXPECT_NEAR(t.alpha, 4.0, 1e-13);
  EXPECT_NEAR(t.Delta, 1.0 / 9, 1e-13);
}

TEST(Numerology, RowsMatchIndicialRoots) {
  for (int d = 11; d <= 16; ++d)
    for (int p = 3; p <= 15; p += 2) {
      if (!(p > joseph_lundgren(d))) continue;
      ModelInput in;
      in.d = d;
      in.p = p;
      const ConstantsTable t = derive_constants_unchecked(in);
      for (const auto& r : t.rows) {
        EXPECT_NEAR(r.gamma, indicial_root(d, p, r.n), 1e-12) << d << " " << p << " n=" << r.n;
        EXPECT_NEAR(gamma_n_of(d, p, r.n), r.gamma, 1e-12);
      }
    }
}

TEST(Numerology, JosephLundgren) {
  EXPECT_TRUE(std::isinf(joseph_lundgren(10)));
  EXPECT_NEAR(joseph_lundgren(11), 1 + 4 / (7 - 2 * std::sqrt(10.0)), 1e-14);
  // Delta vanishes exactly at p_JL
  for (int d = 11; d <= 20; ++d) EXPECT_NEAR(delta_of(d, joseph_lundgren(d)), 0.0, 1e-9) << d;
}

TEST(Numerology, HarmonicCounts) {
  for (int n = 0; n < 8; ++n) EXPECT_EQ(harmonic_count(3, n), 2 * n + 1);
  for (int d : {11, 13})
    for (int n = 2; n < 6; ++n) EXPECT_EQ(harmonic_count(d, n), binom(n + d - 1, d - 1) - binom(n + d - 3, d - 1));
}

TEST(Numerology, RejectsBadInput) {
  ModelInput in;
  in.d = 10;
  EXPECT_EQ(code_of(in), Errc::InvalidInput);
  in = {};
  in.p = 4;
  EXPECT_EQ(code_of(in), Errc::InvalidInput);
  in = {};
  in.d = 11;  // p_JL(11) is about 6.9
  EXPECT_EQ(code_of(in), Errc::SubcriticalP);
  in = {};
  in.ell = 1;  // 2 ell <= alpha
  EXPECT_EQ(code_of(in), Errc::BadEll);
  in = {};
  in.ell = 5;
  EXPECT_EQ(code_of(in), Errc::BadEll);
}

TEST(Numerology, InvariantsHold) { EXPECT_TRUE(check_table_invariants(derive_constants(ModelInput{})).empty()); }
