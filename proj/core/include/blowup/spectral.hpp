#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "blowup/fit.hpp"
#include "blowup/ground_state.hpp"
#include "blowup/numerology.hpp"
#include "blowup/profile.hpp"

namespace blowup {

struct KernelOptions {
  double r_start = 1e-3;
  double rtol = 1e-12;
  int series_terms = 10;
  double tail_a = 1e3;   // tail-fit window, clipped to the grid
  double tail_b = 31622.776601683792;
  double origin_b = 0.05;
  // Gamma = T0 G with G' = -(d+2n-2) r^{1-d} T0^{-2}; G follows the pure singular series up to gamma_match_r
  int gamma_series_terms = 24;
  double gamma_match_r = 1.0;
};

struct KernelPair {
  int n = 0;
  int d = 0;
  int p = 0;
  double gamma_n = 0;
  RadialProfile T0;     // regular zero, T0 = r^n (1 + O(r^2))
  RadialProfile Gamma;  // singular zero, pure series r^{2-d-n} (1 + O(r^2)) at the origin
  RadialProfile W;      // T0' / T0
  RadialProfile V;      // -p Q^{p-1}
  PowerFit T0_tail;
  PowerFit Gamma_tail;
  double T0_origin_exponent = 0;
  double Gamma_origin_exponent = 0;
  // n = 0, 1: max relative deviation from Lambda Q / C_0 resp. -Q' / C_1 on [0.1, 100]
  double cross_check_deviation = -1;
  double cross_check_constant = 0;

  int parity() const { return n % 2 == 0 ? 1 : -1; }
  const RadialGrid& grid() const { return *T0.grid; }
};

KernelPair kernel_pair(const ConstantsTable& table, int n, std::shared_ptr<const RadialGrid> grid,
                       const KernelOptions& opt = {});

enum class Operator { A, Astar, H };

RadialProfile apply_operator(const KernelPair& pair, const RadialProfile& f, Operator which);

struct InversionRecord {
  bool integrable_branch = false;
  double tail_exponent = 0;  // fitted exponent of u1 / T0
  double origin_exponent = 0;
  bool zero_tail = false;
};

struct InversionOptions {
  double dead_zone = 0.05;
  double origin_tol = 0.25;
  double origin_b = 0.05;
  double tail_a = 1e3;
  double tail_b = 31622.776601683792;
};

// Returns u with H^(n) u = f following the two-branch quadrature formula.
RadialProfile invert_H(const KernelPair& pair, const RadialProfile& f, InversionRecord* record = nullptr,
                       const InversionOptions& opt = {});

struct LadderOptions {
  int depth = -1;  // -1 selects L_n from the table
  InversionOptions inversion;
  double theta_fit_a = 1e2;
  double theta_fit_b = 1e3;
  double tail_rel_tol = 0.02;
  double tail_abs_floor = 0.0;
};

struct ProfileLadder {
  int n = 0;
  double gamma_n = 0;
  std::vector<RadialProfile> T;
  std::vector<RadialProfile> Theta;
  std::vector<InversionRecord> branches;  // branches[i] produced T[i+1]
  std::vector<PowerFit> T_fit;
  std::vector<PowerFit> Theta_fit;
  std::vector<double> ladder_residual;    // |H T_{i+1} + T_i| / |T_i|, weighted L2
  std::vector<bool> T_tail_ok;
  std::vector<bool> Theta_tail_ok;
  bool invariants_ok = true;
};

// Theta_i bound uses g' from the table.
ProfileLadder build_ladder(const KernelPair& pair, const ConstantsTable& table, const LadderOptions& opt = {});

// Scales every profile of the ladder by a constant (ladders are linear in T0).
ProfileLadder scaled_ladder(const ProfileLadder& ladder, double factor);

struct OrthoBasis {
  int n = 0;
  double M = 0;
  std::vector<double> c;
  RadialProfile Phi;
  double chiT0_T0 = 0;
  // (-H)^k (chi_M T0) for k = 0..L_n on the radial grid
  std::vector<std::vector<double>> powers;
  // a[k][i] = <(-H)^k (chi_M T0), T_i>
  std::vector<std::vector<double>> pairings;
};

OrthoBasis build_phi_basis(const KernelPair& pair, const ProfileLadder& ladder, double M);

struct GramReport {
  Eigen::MatrixXd G;
  double diagonal_spread = 0;     // max_i |G_ii - G_00| / G_00
  double diagonal_vs_pairing = 0;  // |G_00 - <chi_M T0, T0>| / <chi_M T0, T0>
  double offdiag_raw = 0;          // max_{i != j} |G_ji| / G_00
  double offdiag_scaled = 0;       // max_{i != j} |G_ji| / (G_00 M^{2(i-j)})
  double lower_raw = 0;            // max_{j > i} |G_ji| / G_00
};

// G[j][i] = <(-H)^j Phi_M, T_i>. With s = min(i, j) powers moved onto the ladder this is
// sum_k c_k <(-H)^{k+j-s} chi_M T0, T_{i-s}>; pairings with more than L_n powers of H on chi_M T0 are
// dropped, they equal <(-H)^{L_n} chi_M T0, (-H)^{...} T0> = 0.

GramReport orthogonality_matrix(const OrthoBasis& basis, const ProfileLadder& ladder, const KernelPair& pair);

// ||res|| / scale in weighted L2 over [a, b]
double relative_residual(const RadialGrid& g, const std::vector<double>& res, const std::vector<double>& scale,
                         int d, double a, double b);

// H^(n) f sample-wise: -(f'' + (d-1)/r f' - n(d+n-2)/r^2 f) + V f
std::vector<double> apply_H(const KernelPair& pair, const std::vector<double>& f);

}  // namespace blowup
