#pragma once

#include <vector>

namespace blowup {

struct ModelInput {
  int d = 13;
  int p = 5;
  int ell = 2;
  int L = 4;
  double eps_g = 1e-3;
  double eta = 0.05;
  double M = 40.0;
};

// Quantities attached to the spherical harmonic degree n.
struct HarmonicRow {
  int n = 0;
  double Delta = 0;
  double gamma = 0;
  double gamma_prime = 0;
  double alpha = 0;
  int m = 0;
  double delta = 0;
  long long k = 0;
  int L = 0;
  double i = 0;  // i_n = ell - (gamma - gamma_n)/2
};

struct ConstantsTable {
  ModelInput input;
  double p_jl = 0;
  double s_c = 0;
  double c_inf = 0;
  double c_inf_pm1 = 0;  // c_inf^{p-1}
  double gamma = 0;
  double Delta = 0;
  double alpha = 0;
  double kappa = 0;
  int s_L = 0;
  int n_0 = 0;
  int n_max = 0;
  double g = 0;
  double g_prime = 0;
  double delta0_prime = 0;
  std::vector<HarmonicRow> rows;  // n = 0..n_max

  int d() const { return input.d; }
  int p() const { return input.p; }
  double scaling_exponent() const { return 2.0 / (input.p - 1); }
  const HarmonicRow& row(int n) const;
  double B0(double b) const;
  double B1(double b) const;
};

double joseph_lundgren(int d);
double critical_exponent(int d, double p);
double delta_of(int d, double p);
double c_inf_pm1_of(int d, double p);
double gamma_n_of(int d, double p, int n);

// Dimension of degree-n spherical harmonics in d variables.
long long harmonic_count(int d, int n);
long long harmonic_count(const ConstantsTable& table, int n);

// Throws Error on any violated input invariant.
ConstantsTable derive_constants(const ModelInput& input);
// Fills the table without rejecting degenerate or subcritical inputs.
ConstantsTable derive_constants_unchecked(const ModelInput& input);

// Returns a list of human readable violations, empty when all hold.
std::vector<const char*> check_table_invariants(const ConstantsTable& table);

int instability_count(const ConstantsTable& table, int ell);
int radial_instability_count(const ConstantsTable& table, int ell);

}  // namespace blowup
