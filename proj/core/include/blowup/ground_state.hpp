#pragma once

#include <memory>
#include <vector>

#include "blowup/grid.hpp"
#include "blowup/numerology.hpp"
#include "blowup/profile.hpp"

namespace blowup {

struct GroundStateOptions {
  double r_start = 1e-3;
  double rtol = 1e-12;
  double atol = 1e-300;
  int series_terms = 8;
};

struct GroundState {
  RadialProfile Q;
  // w = r^{2/(p-1)} Q - c_inf, carried by the integrator so the tail keeps full relative precision
  std::vector<double> w;
  std::vector<double> w_t;   // d w / d log r
  std::vector<double> w_tt;
};

GroundState compute_ground_state(const ConstantsTable& table, std::shared_ptr<const RadialGrid> grid,
                                 const GroundStateOptions& opt = {});

struct TailWindows {
  double lead_a = 1e2;
  double lead_b = 1e3;
  double sub_a = 1e2;
  double sub_b = 31622.776601683792;
};

TailFit fit_tail(const GroundState& gs, const ConstantsTable& table, const TailWindows& win = {});

struct BoundReport {
  bool ok = true;
  std::size_t first_offending = 0;
  bool V_negative = true;
  double delta_hat = 0;    // inf_r r^2 (V + (d-2)^2 / (4 r^2))
  double delta_hat_r = 0;  // where the infimum is attained on the grid
  double potential_decay_exponent = 0;  // fit of r^2 V + p c_inf^{p-1}
  double potential_decay_residual = 0;
};

// Throws BoundViolated on the first node breaking 0 < Q < c_inf r^{-2/(p-1)}.
BoundReport verify_bounds(const GroundState& gs, const ConstantsTable& table, double fit_a = 1e2,
                          double fit_b = 1e4);

// V = -p Q^{p-1}
RadialProfile potential(const GroundState& gs, const ConstantsTable& table);

// Lambda u = 2/(p-1) u + r u'
RadialProfile lambda_op(const RadialProfile& u, double m);
// Lambda Q = r^{-2/(p-1)} w_t, free of the cancellation in the tail
RadialProfile lambda_Q(const GroundState& gs, const ConstantsTable& table);

// F(u) = Delta u + |u|^{p-1} u on the grid (radial, finite differences).
std::vector<double> nonlinear_operator(const RadialGrid& g, const std::vector<double>& u, int d, int p);

}  // namespace blowup
