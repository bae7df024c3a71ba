#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blowup/blowup_profile.hpp"
#include "blowup/numerology.hpp"

namespace blowup {

// c_1 = ell / (2 ell - alpha), c_{i+1} = -alpha (ell - i) c_i / (2 ell - alpha)
std::vector<double> special_coefficients(double alpha, int ell);

// bbar_i(s) = c_i / s^i for i <= ell, zero up to depth L.
ParamFamily special_solution(const ConstantsTable& table, int ell, double s);

struct FlowState {
  double s = 0;
  double t = 0;
  double lambda = 1;
  std::vector<double> z;  // d components, empty in the purely radial setting
  ParamFamily b;
};

struct FlowDerivative {
  double lambda_s = 0;
  std::vector<double> z_s;
  std::vector<double> b_s;                    // radial block
  std::vector<std::vector<double>> trans_s;   // translation block, same layout as ParamFamily::translation
};

FlowDerivative flow_rhs(const FlowState& state, const ConstantsTable& table);

struct FlowOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  int samples = 200;  // log-spaced in s
  double overflow_guard = 1e6;
  int ell = -1;       // reference special solution for U and V, -1 takes the table value
};

struct TrajectorySample {
  double s = 0;
  double t = 0;
  double lambda = 0;
  std::vector<double> z;
  std::vector<double> b;
  std::vector<double> U;
  std::vector<double> V;
};

struct Trajectory {
  int ell = 0;
  std::vector<TrajectorySample> samples;
};

Trajectory integrate_flow(const FlowState& initial, double s_end, const ConstantsTable& table,
                          const FlowOptions& opt = {});

// lambda(t) along the special solution started at (s_0, lambda_0):
// lambda_0 (1 - t / T)^{ell / alpha}, T = lambda_0^2 (2 ell - alpha) s_0 / alpha.
double special_lambda(double alpha, int ell, double s0, double lambda0, double t);
double special_blowup_time(double alpha, int ell, double s0, double lambda0);

struct BlockReport {
  int n = 0;
  Eigen::MatrixXd A;
  std::vector<double> numeric;      // sorted
  std::vector<double> closed_form;  // sorted
  int nonnegative = 0;
  int nonnegative_rule = 0;
  double i_n = 0;
};

struct LinearizationReport {
  int ell = 0;
  int L = 0;
  double alpha = 0;
  Eigen::MatrixXd A_ell;
  Eigen::MatrixXd top_block;             // leading ell x ell block
  Eigen::MatrixXd eigvec_top;            // right eigenvectors of top_block, columns sorted by eigenvalue
  std::vector<double> numeric;           // eigenvalues of A_ell, sorted
  std::vector<double> closed_form;       // sorted
  double max_eigen_deviation = 0;
  // Coefficients of det(top_block - X I), lowest degree first, from Faddeev-LeVerrier
  std::vector<double> charpoly_numeric;
  // (X + 1) prod_{i=2}^{ell} (i alpha / (2 ell - alpha) - X), lowest degree first
  std::vector<double> charpoly_closed_form;
  int radial_nonnegative = 0;
  std::vector<BlockReport> blocks;  // n = 1..n_0
  bool counts_ok = true;
};

LinearizationReport linearize(const ConstantsTable& table, int ell, int L);

// Renormalized perturbation U_i = (b_i - bbar_i) s^i and V = P U (radial sector).
std::vector<double> renormalize(const ParamFamily& b, const std::vector<double>& bbar, double s);
Eigen::MatrixXd change_of_basis(const LinearizationReport& lin);  // P with P A P^{-1} as in the block form

struct ShootOptions {
  double eta_tilde = 0.05;
  double width_tol = 1e-12;
  int max_iterations = 200;
  bool nonlinear = true;
  double rtol = 1e-13;
  double atol = 1e-16;
  int samples = 200;
  std::vector<double> eps_stable;  // bounds for U_i, i > ell; defaults to 1
  // V_1(s_0) followed by U_{ell+1..L}(s_0); empty selects V_1 = 1 / (10 s_0^eta), U = 0
  std::vector<double> stable_init;
};

enum class ExitKind { None, Upper, Lower };

struct ExitEvent {
  ExitKind kind = ExitKind::None;
  int coordinate = 0;  // 1-based: V_1..V_ell, then U_{ell+1}..U_L
  double s = 0;
  std::string bound;   // which inequality broke
};

struct ShootTrace {
  std::vector<double> s;
  std::vector<std::vector<double>> V;  // ell entries per sample
  std::vector<std::vector<double>> U;
  ExitEvent exit;
};

// Runs the renormalized system from V(s_0) = x[0..ell) and U_i(s_0) = x[i-1] for i > ell.
ShootTrace run_renormalized(const ConstantsTable& table, int ell, double s0, double s_horizon,
                            const std::vector<double>& v0, const ShootOptions& opt = {});

struct ShootResult {
  int ell = 0;
  std::vector<double> v0;      // initial V_1..V_ell, then U_{ell+1}..U_L
  std::vector<double> bracket_lo;
  std::vector<double> bracket_hi;
  double bracket_width = 0;
  int iterations = 0;
  ExitEvent lo_exit;           // exits of the initial bracket endpoints
  ExitEvent hi_exit;
  ShootTrace certificate;
  bool trapped = false;
};

ShootResult shoot_trapped(const ConstantsTable& table, int ell, double s0, double s_horizon,
                          const ShootOptions& opt = {});

const char* exit_kind_name(ExitKind k);

}  // namespace blowup
