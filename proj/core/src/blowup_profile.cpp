#include "blowup/blowup_profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blowup/cutoff.hpp"
#include "blowup/error.hpp"
#include "blowup/fit.hpp"

namespace blowup {
namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// (Q + a)^p - Q^p - p Q^{p-1} a, summed by powers of a so small perturbations keep relative precision
double nonlinear_remainder(double q, double a, int p) {
  double s = 0.0, ak = a * a;
  for (int k = 2; k <= p; ++k) {
    s += binom(p, k) * std::pow(q, p - k) * ak;
    ak *= a;
  }
  return s;
}

}  // namespace

bool size_bounds_hold(const ParamFamily& b, const ConstantsTable& table, double K) {
  const double b1 = b.b1();
  bool all_zero = std::all_of(b.radial.begin(), b.radial.end(), [](double v) { return v == 0.0; });
  for (const auto& blk : b.translation)
    all_zero = all_zero && std::all_of(blk.begin(), blk.end(), [](double v) { return v == 0.0; });
  if (all_zero) return true;
  if (!(b1 > 0)) return false;
  for (int i = 2; i <= b.depth(); ++i)
    if (std::abs(b(i)) > K * std::pow(b1, i)) return false;
  if (!b.translation.empty()) {
    const auto& row = table.row(1);
    const double shift = (table.gamma - row.gamma) / 2.0;
    for (const auto& blk : b.translation)
      for (std::size_t i = 0; i < blk.size(); ++i)
        if (std::abs(blk[i]) > K * std::pow(b1, shift + i + 1.0)) return false;
  }
  return true;
}

ProfileBasis make_profile_basis(const ConstantsTable& table, std::shared_ptr<const RadialGrid> grid) {
  return make_profile_basis(table, grid, compute_ground_state(table, grid));
}

ProfileBasis make_profile_basis(const ConstantsTable& table, std::shared_ptr<const RadialGrid> grid, GroundState gs) {
  if (gs.Q.grid.get() != grid.get() && !(gs.Q.grid && gs.Q.grid->spec() == grid->spec()))
    throw Error(Errc::GridMismatch, "ground state lives on a different grid");
  ProfileBasis B;
  B.grid = grid;
  B.gs = std::move(gs);
  B.gs.Q.grid = grid;
  B.LambdaQ = lambda_Q(B.gs, table);
  B.pair = kernel_pair(table, 0, grid);
  LadderOptions lo;
  lo.depth = std::max(table.input.L, 1);
  B.ladder = scaled_ladder(build_ladder(B.pair, table, lo), B.pair.cross_check_constant);

  const int p = table.p();
  const auto& Q = B.gs.Q.f;
  const auto& T1 = B.ladder.T[1].f;
  const auto& Th1 = B.ladder.Theta[1].f;
  const std::size_t N = grid->size();
  std::vector<double> phi(N);
  const double c2 = binom(p, 2);
  for (std::size_t j = 0; j < N; ++j) phi[j] = Th1[j] - c2 * std::pow(Q[j], p - 2) * T1[j] * T1[j];
  B.Phi2_unit = make_profile(grid, "Phi_2 / b_1^2", phi, 1);

  RadialProfile u = invert_H(B.pair, B.Phi2_unit, &B.S2_branch);
  for (auto& v : u.f) v = -v;
  for (auto& v : u.df) v = -v;
  u.name = "S_2 / b_1^2";
  B.S2_unit = std::move(u);

  const auto HS = apply_H(B.pair, B.S2_unit.f);
  std::vector<double> res(N);
  for (std::size_t j = 0; j < N; ++j) res[j] = HS[j] + phi[j];
  B.S2_inversion_residual =
      relative_residual(*grid, res, phi, table.d(), grid->h_min(), grid->r_max() / 10.0);
  B.S2_tail = fit_power_law(*grid, B.S2_unit.f, std::min(1e3, grid->r_max() / 30.0), grid->r_max());
  return B;
}

ApproximateProfile assemble(const ProfileBasis& basis, const ConstantsTable& table, const ParamFamily& b,
                            bool with_S2, const AssembleOptions& opt) {
  if (!size_bounds_hold(b, table, opt.size_K)) {
    std::ostringstream os;
    os << "parameters violate |b_i| <= " << opt.size_K << " b_1^i (b_1 = " << b.b1() << ")";
    throw Error(Errc::SizeBoundViolated, os.str());
  }
  const int depth = static_cast<int>(basis.ladder.T.size()) - 1;
  if (b.depth() > depth) throw Error(Errc::InvalidInput, "parameter family deeper than the ladder");

  const std::size_t N = basis.grid->size();
  ApproximateProfile P;
  P.b = b;
  P.with_S2 = with_S2;
  P.alpha.assign(N, 0.0);
  for (int i = 1; i <= b.depth(); ++i) {
    const double bi = b(i);
    if (bi == 0.0) continue;
    const auto& Ti = basis.ladder.T[i].f;
    for (std::size_t j = 0; j < N; ++j) P.alpha[j] += bi * Ti[j];
  }
  const double b1sq = b.b1() * b.b1();
  std::vector<double> s2(N, 0.0);
  if (with_S2)
    for (std::size_t j = 0; j < N; ++j) s2[j] = b1sq * basis.S2_unit.f[j];
  for (std::size_t j = 0; j < N; ++j) P.alpha[j] += s2[j];

  std::vector<double> qb(N);
  for (std::size_t j = 0; j < N; ++j) qb[j] = basis.gs.Q.f[j] + P.alpha[j];
  P.Qb = make_profile(basis.grid, "Q_b", std::move(qb), 1);
  P.S2 = make_profile(basis.grid, "S_2", std::move(s2), 1);
  return P;
}

std::vector<double> dQb_db(const ProfileBasis& basis, const ParamFamily& b, int i, bool with_S2) {
  if (i < 1 || i >= static_cast<int>(basis.ladder.T.size()))
    throw Error(Errc::InvalidInput, "parameter index outside the ladder");
  std::vector<double> out = basis.ladder.T[i].f;
  if (with_S2 && i == 1)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += 2.0 * b.b1() * basis.S2_unit.f[j];
  return out;
}

void localize(ApproximateProfile& P, const ProfileBasis& basis, const ConstantsTable& table) {
  const double b1 = P.b.b1();
  const double B1 = b1 > 0 ? table.B1(b1) : INFINITY;
  if (!(B1 < basis.grid->r_max() / 4.0)) {
    std::ostringstream os;
    os << "B_1 = " << B1 << " exceeds R_max / 4";
    throw Error(Errc::ScaleOutOfGrid, os.str());
  }
  P.B1 = B1;
  const auto& r = basis.grid->r();
  const auto& Q = basis.gs.Q.f;
  std::vector<double> q(r.size());
  double sup = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double c = chi_scaled(r[j], B1);
    // on the plateau and outside the support these are exactly Q_b and Q
    q[j] = c == 1.0 ? P.Qb.f[j] : (c == 0.0 ? Q[j] : Q[j] + c * P.alpha[j]);
    if (r[j] <= B1) sup = std::max(sup, std::abs(q[j] - Q[j]) * std::pow(r[j], table.gamma));
  }
  P.sup_weighted_perturbation = sup;
  P.Qb_localized = make_profile(basis.grid, "Q~_b", std::move(q), 1);
}

void residual(ApproximateProfile& P, const ProfileBasis& basis, const ConstantsTable& table,
              std::vector<double> radii) {
  const auto& g = *basis.grid;
  const auto& r = g.r();
  const std::size_t N = r.size();
  const int p = table.p(), d = table.d();
  const double m = table.scaling_exponent();
  const double b1 = P.b.b1();
  const int L = static_cast<int>(basis.ladder.T.size()) - 1;

  if (radii.empty()) {
    radii = {1.0, 10.0};
    if (b1 > 0) {
      radii.push_back(table.B0(b1));
      radii.push_back(table.B1(b1));
    }
  }

  // -F(Q_b) = H alpha - [(Q + alpha)^p - Q^p - p Q^{p-1} alpha], using F(Q) = 0
  const auto Ha = apply_H(basis.pair, P.alpha);
  const auto da = derivative(g, P.alpha, 1);
  std::vector<double> psi(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double lam = basis.LambdaQ.f[j] + m * P.alpha[j] + r[j] * da[j];
    psi[j] = Ha[j] - nonlinear_remainder(basis.gs.Q.f[j], P.alpha[j], p) + b1 * lam;
  }
  for (int i = 1; i <= std::min(P.b.depth(), L); ++i) {
    const double coef = -(2.0 * i - table.alpha) * b1 * P.b(i) + P.b(i + 1);
    if (coef == 0.0) continue;
    const auto dq = dQb_db(basis, P.b, i, P.with_S2);
    for (std::size_t j = 0; j < N; ++j) psi[j] += coef * dq[j];
  }
  P.psi = std::move(psi);

  std::vector<double> sq(N);
  for (std::size_t j = 0; j < N; ++j) sq[j] = P.psi[j] * P.psi[j];
  const auto& quad = g.quadrature(d - 1);
  ResidualReport rep;
  rep.radii = radii;
  for (double B : radii) rep.norms.push_back(quad.integral_to(sq, B));
  if (rep.norms.size() >= 2 && rep.norms.back() > 0) rep.localization_ratio = rep.norms.front() / rep.norms.back();
  P.residual = std::move(rep);
}

}  // namespace blowup
