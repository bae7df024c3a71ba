#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blowup/blowup_profile.hpp"
#include "blowup/numerology.hpp"
#include "blowup/spectral.hpp"

namespace blowup {

// r_j = R sinh(beta j / N) / sinh(beta), j = 0..N; beta -> 0 is the uniform grid.
class SinhGrid {
 public:
  SinhGrid(double R, std::size_t N, double beta);
  // Chooses beta so the first spacing is (about) h_min, uniform when h_min >= R / N.
  static SinhGrid with_min_spacing(double R, std::size_t N, double h_min);

  double R() const { return R_; }
  double beta() const { return beta_; }
  std::size_t size() const { return r_.size(); }
  const std::vector<double>& r() const { return r_; }
  double h_min() const { return r_[1] - r_[0]; }

  // Six-point Lagrange interpolation, even extension through r = 0, zero beyond R.
  double interpolate(const std::vector<double>& f, double x) const;

  // Weights of the radial Laplacian f'' + (d-1)/r f' - n(n+d-2)/r^2 f at node j (5-point stencils,
  // parity (-1)^n at 0; for n > 0 the row at j = 0 is meaningless since f(0) = 0).
  struct Row {
    std::array<std::size_t, 5> idx{};
    std::array<double, 5> w{};
    int count = 0;
  };
  Row laplacian_row(std::size_t j, int d, int n = 0) const;
  Row derivative_row(std::size_t j, int parity) const;

  std::vector<double> laplacian(const std::vector<double>& f, int d) const;
  std::vector<double> derivative(const std::vector<double>& f, int parity) const;

  // Second-order (three point) variants, used to estimate stencil noise.
  std::vector<double> laplacian2(const std::vector<double>& f, int d) const;
  std::vector<double> derivative2(const std::vector<double>& f, int parity) const;

  // Integral of f r^{d-1} on [0, R], composite cubic rule.
  double weighted_integral(const std::vector<double>& f, int d) const;
  // Nodal weights w_j of the same rule, r^{d-1} included: integral = sum_j w_j f_j.
  std::vector<double> node_weights(int d) const;

 private:
  double R_;
  double beta_;
  std::vector<double> r_;
};

struct InitialData {
  enum class Kind { Bump, Profile, Samples } kind = Kind::Bump;
  double amplitude = 5.0;  // Bump: A exp(-r^2)
  // Profile: chi(r / cut) (Q~_b + a D)_{1/lambda0} with b = bbar(s0) and D the unstable direction
  int ell = 2;
  double s0 = 20.0;
  double shoot_amplitude = 0.0;
  double cut = 3.0;
  std::function<double(double)> samples;  // Samples: u0(r)
};

struct SimConfig {
  double R = 10.0;
  std::size_t nodes = 4000;
  double resolution = 100.0;  // target h_min = lambda_hat / resolution; regrid when it doubles
  bool regrid = true;
  double safety_r = 100.0;    // dt <= safety_r h_min^2
  double safety_f = 0.05;     // dt <= safety_f / |u|_inf^{p-1}
  double dt_max = 1e-3;
  double dt_min = 1e-300;
  double U_stop = 1e8;
  double t_max = 10.0;
  std::size_t max_steps = 2000000;
  bool diffusion = true;
  bool reaction = true;
  std::vector<int> sobolev;   // orders k for the trace, empty for none
  std::size_t record_every = 1;
  InitialData init;

  void validate() const;  // throws ConfigInvalid
};

struct TraceRow {
  double t = 0;
  double dt = 0;
  double elapsed = 0;  // exact sum of the steps since the previous row; T - t is rebuilt from these
  double sup = 0;
  double lambda_hat = 0;
  double h_min = 0;
  std::vector<double> sobolev;
};

struct PdeWorkspace;

struct SimState {
  std::shared_ptr<const SinhGrid> grid;
  double t = 0;
  double dt = 0;
  std::vector<double> u;
  std::vector<TraceRow> trace;
  std::size_t steps = 0;
  std::size_t regrids = 0;
  bool overflow = false;  // U_stop reached
  double since_record = 0;
  std::shared_ptr<PdeWorkspace> work;
};

struct SimContext {
  const ConstantsTable* table = nullptr;
  const ProfileBasis* basis = nullptr;  // required for profile initial data
};

SimState initial_state(const SimConfig& cfg, const SimContext& ctx);

// One Strang step: half reaction (exact), SDIRK2 diffusion (banded LU), half reaction.
// Returns false on Overflow (terminal) and throws StepUnderflow.
bool advance(SimState& state, const SimConfig& cfg, const ConstantsTable& table);

// Runs until U_stop, t_max or max_steps.
SimState simulate(const SimConfig& cfg, const SimContext& ctx);

// lambda_hat = u(0)^{-(p-1)/2}
double extract_scale_proxy(const SimState& state, const ConstantsTable& table);

struct ModulationResult {
  double lambda = 0;
  bool used_proxy = false;
  double proxy = 0;
};

// Solves <(u)_lambda - Q~_b, chi_M T_0> = 0 for lambda near the proxy value, b frozen.
// chi_M T_0 is the leading term of Phi_M; the full Phi_M carries the cut-off's high derivatives and
// amplifies relative errors in u by about 1e10 at M = 10.
ModulationResult extract_scale_modulation(const SimState& state, const ConstantsTable& table,
                                          const ProfileBasis& basis, const OrthoBasis& phi,
                                          const ParamFamily& b);

struct ClassifyOptions {
  double window = 0.3;         // trailing fraction of samples used in the fits
  int ell = 2;
  double type1_tol = 0.05;     // limit of |u|_inf (T-t)^{1/(p-1)} vs kappa
  double exponent_tol = 0.03;  // sup-norm exponent vs -1/(p-1)
  double type2_tol = 0.15;     // lambda exponent vs ell/alpha
  double min_decades = 1.0;
  double max_residual = 0.05;  // rms of the log-log fits; above it the run is undetermined
};

enum class BlowupClass { None, TypeI, TypeII, Undetermined };

struct Classification {
  BlowupClass cls = BlowupClass::Undetermined;
  double T_hat = 0;
  double time_left = 0;      // T_hat - t at the last sample
  double sup_exponent = 0;   // slope of log |u|_inf vs log(T-t)
  double sup_residual = 0;
  double lambda_exponent = 0;
  double lambda_residual = 0;
  double kappa_limit = 0;    // |u|_inf (T-t)^{1/(p-1)} at the last window sample
  double kappa_target = 0;
  double decades = 0;
  bool T_on_boundary = false;  // residual minimum at the edge of the T sweep
  std::size_t window_count = 0;
};

Classification classify_blowup(const std::vector<TraceRow>& trace, const ConstantsTable& table,
                               const ClassifyOptions& opt = {});

const char* blowup_class_name(BlowupClass c);

struct SobolevNorm {
  int k = 0;
  double value = 0;
  double noise = 0;  // relative difference to the second-order stencils
  bool noise_dominated = false;
};

// Homogeneous radial seminorms (int |D^k u|^2 r^{d-1} dr)^{1/2}, D^{2j} = Delta^j, D^{2j+1} = d/dr Delta^j.
std::vector<SobolevNorm> sobolev_diagnostics(const SinhGrid& grid, const std::vector<double>& u, int d,
                                             const std::vector<int>& orders);

struct PdeShootRun {
  double amplitude = 0;
  Classification cls;
  bool overflow = false;
  double final_sup = 0;
  std::size_t steps = 0;
};

struct PdeShootReport {
  std::vector<PdeShootRun> runs;
  double best_amplitude = 0;
  double best_lambda_exponent = 0;
  double target = 0;
  bool reached = false;
};

// One-parameter shooting on the unstable amplitude of profile data; lower side decays, upper blows up.
PdeShootReport shoot_pde(SimConfig cfg, const SimContext& ctx, double a_lo, double a_hi, int iterations,
                         const ClassifyOptions& copt = {});

}  // namespace blowup
