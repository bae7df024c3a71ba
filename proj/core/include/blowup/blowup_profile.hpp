#pragma once

#include <memory>
#include <vector>

#include "blowup/ground_state.hpp"
#include "blowup/numerology.hpp"
#include "blowup/profile.hpp"
#include "blowup/spectral.hpp"

namespace blowup {

// Parameters b_i of the radial sector (i = 1..L) plus the optional translation block b_i^{(1,k)}.
struct ParamFamily {
  std::vector<double> radial;                    // radial[i-1] = b_i
  std::vector<std::vector<double>> translation;  // translation[k][i-1] = b_i^{(1,k)}, may be empty

  ParamFamily() = default;
  explicit ParamFamily(std::vector<double> b) : radial(std::move(b)) {}

  // b_i with the convention b_{L+1} = 0
  double operator()(int i) const {
    return i >= 1 && i <= static_cast<int>(radial.size()) ? radial[i - 1] : 0.0;
  }
  double b1() const { return (*this)(1); }
  int depth() const { return static_cast<int>(radial.size()); }
};

// |b_i| <= K b_1^{(gamma - gamma_n)/2 + i}, with b_1 > 0 unless all parameters vanish.
bool size_bounds_hold(const ParamFamily& b, const ConstantsTable& table, double K);

// Everything b-independent needed to assemble Q_b: Q, the radial ladder normalized to T_0 = Lambda Q,
// and the unit correction S_2 / b_1^2.
struct ProfileBasis {
  std::shared_ptr<const RadialGrid> grid;
  GroundState gs;
  RadialProfile LambdaQ;
  KernelPair pair;
  ProfileLadder ladder;
  RadialProfile S2_unit;
  RadialProfile Phi2_unit;  // Theta_1 - C(p,2) Q^{p-2} T_1^2
  InversionRecord S2_branch;
  PowerFit S2_tail;
  double S2_inversion_residual = 0;  // |H S_2 + Phi_2| / |Phi_2| on [h_min, R_max/10]
};

ProfileBasis make_profile_basis(const ConstantsTable& table, std::shared_ptr<const RadialGrid> grid);
// Reuses a ground state computed (or loaded) on the same grid spec.
ProfileBasis make_profile_basis(const ConstantsTable& table, std::shared_ptr<const RadialGrid> grid, GroundState gs);

struct ResidualReport {
  std::vector<double> radii;
  std::vector<double> norms;  // int_{r <= B} psi^2 r^{d-1} dr
  double localization_ratio = 0;  // norm at radii.front() over norm at radii.back()
};

struct ApproximateProfile {
  ParamFamily b;
  bool with_S2 = false;
  std::vector<double> alpha;  // Q_b - Q
  RadialProfile Qb;
  RadialProfile S2;
  double B1 = 0;
  RadialProfile Qb_localized;
  double sup_weighted_perturbation = 0;  // sup_{r <= B_1} |Q~_b - Q| r^gamma
  std::vector<double> psi;
  ResidualReport residual;
};

struct AssembleOptions {
  double size_K = 10.0;
};

// Q_b = Q + sum_i b_i T_i (+ b_1^2 S2_unit when with_S2).
ApproximateProfile assemble(const ProfileBasis& basis, const ConstantsTable& table, const ParamFamily& b,
                            bool with_S2, const AssembleOptions& opt = {});

// dQ_b / db_i = T_i (+ 2 b_1 S2_unit for i = 1)
std::vector<double> dQb_db(const ProfileBasis& basis, const ParamFamily& b, int i, bool with_S2);

// Q~_b = Q + chi_{B_1}(Q_b - Q) with B_1 = B_1(b_1).
void localize(ApproximateProfile& prof, const ProfileBasis& basis, const ConstantsTable& table);

// psi_b = -F(Q_b) + b_1 Lambda Q_b + sum_i (-(2i - alpha) b_1 b_i + b_{i+1}) dQ_b/db_i.
// Radii default to {1, 10, B_0, B_1}.
void residual(ApproximateProfile& prof, const ProfileBasis& basis, const ConstantsTable& table,
              std::vector<double> radii = {});

}  // namespace blowup
