#include "blowup/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseQR>
#include <boost/math/quadrature/gauss.hpp>

#include "blowup/cutoff.hpp"
#include "blowup/error.hpp"
#include "blowup/profile.hpp"
#include "blowup/radial_pde.hpp"
#include "blowup/spectral.hpp"

namespace blowup {
namespace {

using Gauss = boost::math::quadrature::gauss<double, 20>;
using SpMat = Eigen::SparseMatrix<double>;

// phi(s) = exp(-1/(1-s^2)) and its first two s-derivatives
void bump(double s, double& f, double& f1, double& f2) {
  if (std::abs(s) >= 1.0) {
    f = f1 = f2 = 0.0;
    return;
  }
  const double a = 1.0 - s * s;
  const double g1 = -2.0 * s / (a * a);
  const double g2 = -2.0 * (1.0 + 3.0 * s * s) / (a * a * a);
  f = std::exp(-1.0 / a);
  f1 = g1 * f;
  f2 = (g2 + g1 * g1) * f;
}

// Gauss nodes in t = log r over [t0, t1], panels no wider than dt; weights include dr = r dt.
void log_nodes(double t0, double t1, double dt, std::vector<double>& r, std::vector<double>& w) {
  r.clear();
  w.clear();
  const int panels = std::max(1, static_cast<int>(std::ceil((t1 - t0) / dt)));
  const double h = (t1 - t0) / panels;
  const auto& xs = Gauss::abscissa();
  const auto& ws = Gauss::weights();
  for (int k = 0; k < panels; ++k) {
    const double mid = t0 + (k + 0.5) * h, half = 0.5 * h;
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (int sgn : {1, -1}) {
        if (i == 0 && sgn < 0 && xs[0] == 0.0) continue;
        const double t = mid + sgn * half * xs[i];
        const double rr = std::exp(t);
        r.push_back(rr);
        w.push_back(half * ws[i] * rr);
      }
  }
}

struct Dictionary {
  std::vector<BumpSum> atoms;
};

Dictionary make_dictionary(double t_lo, double t_hi, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  Dictionary D;
  const double spacing = (t_hi - t_lo) / (count + 3);
  const double w = 2.0 * spacing;
  for (int k = 0; k < count; ++k) {
    double c = t_lo + w + (k + 0.5) * spacing + jitter(rng) * spacing;
    c = std::clamp(c, t_lo + w, t_hi - w);
    BumpSum b;
    b.coef = {1.0};
    b.centre = {c};
    b.width = {w};
    D.atoms.push_back(b);
  }
  return D;
}

// Smallest lambda of A x = lambda B x after normalizing B to unit diagonal.
double smallest_pencil(Eigen::MatrixXd A, Eigen::MatrixXd B) {
  const Eigen::Index n = A.rows();
  Eigen::VectorXd s(n);
  for (Eigen::Index k = 0; k < n; ++k) s(k) = 1.0 / std::sqrt(B(k, k));
  A = s.asDiagonal() * A * s.asDiagonal();
  B = s.asDiagonal() * B * s.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(Errc::EigenSolverFailure, "generalized eigensolver failed");
  return es.eigenvalues()(0);
}

double row_weight_limit(double r, double w, double power) {
  // w already carries r^{d-1}; power < 0 divides by r^{-power}, zero at the origin
  if (r == 0.0) return 0.0;
  return w * std::pow(r, power);
}

}  // namespace

void BumpSum::eval(double r, double& u, double& up, double& upp) const {
  u = up = upp = 0.0;
  const double t = std::log(r);
  for (std::size_t k = 0; k < coef.size(); ++k) {
    double f, f1, f2;
    bump((t - centre[k]) / width[k], f, f1, f2);
    if (f == 0.0) continue;
    const double ft = f1 / width[k], ftt = f2 / (width[k] * width[k]);
    u += coef[k] * f;
    up += coef[k] * ft / r;
    upp += coef[k] * (ftt - ft) / (r * r);
  }
}

double BumpSum::support_lo() const {
  double t = INFINITY;
  for (std::size_t k = 0; k < centre.size(); ++k) t = std::min(t, centre[k] - width[k]);
  return std::exp(t);
}

double BumpSum::support_hi() const {
  double t = -INFINITY;
  for (std::size_t k = 0; k < centre.size(); ++k) t = std::max(t, centre[k] + width[k]);
  return std::exp(t);
}

BumpSum random_bump_sum(std::mt19937_64& rng, double t_lo, double t_hi, int max_terms) {
  if (!(t_hi - t_lo > 0.2)) throw Error(Errc::ConfigInvalid, "bump interval shorter than 0.2 in log r");
  std::uniform_int_distribution<int> count(1, std::max(1, max_terms));
  std::normal_distribution<double> amp(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double w_max = std::min(1.0, 0.5 * (t_hi - t_lo));
  BumpSum b;
  const int K = count(rng);
  for (int k = 0; k < K; ++k) {
    const double w = 0.05 + (w_max - 0.05) * uni(rng);
    b.width.push_back(w);
    b.centre.push_back(t_lo + w + (t_hi - t_lo - 2.0 * w) * uni(rng));
    b.coef.push_back(amp(rng));
  }
  return b;
}

HardyReport hardy_ratio(const HardyOptions& opt) {
  HardyReport rep;
  const double crit = opt.d / 2.0 - 1.0;
  rep.q = opt.q;
  rep.gap = std::abs(opt.q - crit);
  if (opt.q < 0 || rep.gap < opt.delta) {
    std::ostringstream os;
    os << "Hardy weight q = " << opt.q << " must satisfy q >= 0 and |q - (d/2 - 1)| >= " << opt.delta;
    throw Error(Errc::ConfigInvalid, os.str());
  }
  if (!(opt.r_min >= 1.0 && opt.R > opt.r_min)) throw Error(Errc::ConfigInvalid, "need 1 <= r_min < R");
  rep.boundary_branch = opt.q > crit;
  rep.sharp = (crit - opt.q) * (crit - opt.q);
  rep.proof_constant = opt.delta * opt.delta;
  const double cprime = rep.boundary_branch ? opt.delta : 0.0;
  const double pl = opt.d - 3 - 2 * opt.q, pr = opt.d - 1 - 2 * opt.q;
  const double t_lo = std::log(opt.r_min), t_hi = std::log(opt.R);

  std::vector<double> r, w;
  std::mt19937_64 rng(opt.seed);
  rep.sample_min = INFINITY;
  for (int k = 0; k < opt.samples; ++k) {
    BumpSum b = random_bump_sum(rng, t_lo, t_hi, opt.max_terms);
    log_nodes(std::log(b.support_lo()), std::log(b.support_hi()), 0.01, r, w);
    double lhs = 0, rhs = 0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      double u, up, upp;
      b.eval(r[j], u, up, upp);
      lhs += w[j] * u * u * std::pow(r[j], pl);
      rhs += w[j] * up * up * std::pow(r[j], pr);
    }
    double u1, d1, d2;
    b.eval(1.0, u1, d1, d2);
    if (!(lhs > 0)) continue;
    const double ratio = (rhs + cprime * u1 * u1) / lhs;
    if (ratio < rep.sample_min) {
      rep.sample_min = ratio;
      rep.minimizer = b;
    }
    ++rep.samples;
  }

  const Dictionary D = make_dictionary(t_lo, t_hi, opt.dictionary, opt.seed);
  log_nodes(t_lo, t_hi, 0.01, r, w);
  const Eigen::Index K = static_cast<Eigen::Index>(D.atoms.size());
  Eigen::MatrixXd U(r.size(), K), Up(r.size(), K);
  for (Eigen::Index k = 0; k < K; ++k)
    for (std::size_t j = 0; j < r.size(); ++j) {
      double u, up, upp;
      D.atoms[k].eval(r[j], u, up, upp);
      U(j, k) = u;
      Up(j, k) = up;
    }
  Eigen::VectorXd wl(r.size()), wr(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    wl(j) = w[j] * std::pow(r[j], pl);
    wr(j) = w[j] * std::pow(r[j], pr);
  }
  const Eigen::MatrixXd B = U.transpose() * wl.asDiagonal() * U;
  const Eigen::MatrixXd A = Up.transpose() * wr.asDiagonal() * Up;
  rep.span_min = smallest_pencil(A, B);
  return rep;
}

RellichForms rellich_forms(int d, const RadialFunction& f, double r_lo, double r_hi) {
  if (!(r_lo > 0 && r_hi > r_lo)) throw Error(Errc::InvalidInput, "need 0 < r_lo < r_hi");
  std::vector<double> r, w;
  log_nodes(std::log(r_lo), std::log(r_hi), 0.01, r, w);
  RellichForms F;
  for (std::size_t j = 0; j < r.size(); ++j) {
    double u, up, upp;
    f(r[j], u, up, upp);
    const double lap = upp + (d - 1) / r[j] * up;
    const double rd = std::pow(r[j], d - 1);
    F.lap2 += w[j] * lap * lap * rd;
    F.u2_r4 += w[j] * u * u * rd / std::pow(r[j], 4);
    F.grad2_r2 += w[j] * up * up * rd / (r[j] * r[j]);
  }
  return F;
}

RellichReport rellich_ratio(const RellichOptions& opt) {
  if (opt.d < 5) throw Error(Errc::ConfigInvalid, "Rellich constants need d >= 5");
  RellichReport rep;
  rep.const_u = std::pow((opt.d - 4.0) * opt.d / 4.0, 2);
  rep.const_grad = opt.d * opt.d / 4.0;
  const double t_lo = std::log(opt.r_lo), t_hi = std::log(opt.r_hi);
  std::mt19937_64 rng(opt.seed);
  rep.sample_min_u = rep.sample_min_grad = INFINITY;
  for (int k = 0; k < opt.samples; ++k) {
    const BumpSum b = random_bump_sum(rng, t_lo, t_hi, opt.max_terms);
    const auto F = rellich_forms(
        opt.d, [&](double r, double& u, double& up, double& upp) { b.eval(r, u, up, upp); }, b.support_lo(),
        b.support_hi());
    if (!(F.u2_r4 > 0 && F.grad2_r2 > 0)) continue;
    rep.sample_min_u = std::min(rep.sample_min_u, F.lap2 / F.u2_r4);
    rep.sample_min_grad = std::min(rep.sample_min_grad, F.lap2 / F.grad2_r2);
    ++rep.samples;
  }

  const Dictionary D = make_dictionary(t_lo, t_hi, opt.dictionary, opt.seed);
  std::vector<double> r, w;
  log_nodes(t_lo, t_hi, 0.01, r, w);
  const Eigen::Index K = static_cast<Eigen::Index>(D.atoms.size());
  Eigen::MatrixXd U(r.size(), K), Up(r.size(), K), Lap(r.size(), K);
  Eigen::VectorXd w0(r.size()), w4(r.size()), w2(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double rd = std::pow(r[j], opt.d - 1);
    w0(j) = w[j] * rd;
    w4(j) = w[j] * rd / std::pow(r[j], 4);
    w2(j) = w[j] * rd / (r[j] * r[j]);
    for (Eigen::Index k = 0; k < K; ++k) {
      double u, up, upp;
      D.atoms[k].eval(r[j], u, up, upp);
      U(j, k) = u;
      Up(j, k) = up;
      Lap(j, k) = upp + (opt.d - 1) / r[j] * up;
    }
  }
  const Eigen::MatrixXd A = Lap.transpose() * w0.asDiagonal() * Lap;
  rep.span_min_u = smallest_pencil(A, U.transpose() * w4.asDiagonal() * U);
  rep.span_min_grad = smallest_pencil(A, Up.transpose() * w2.asDiagonal() * Up);

  auto viol = [](double ratio, double c) { return std::max(0.0, 1.0 - ratio / c); };
  rep.worst_violation = std::max({viol(rep.sample_min_u, rep.const_u), viol(rep.sample_min_grad, rep.const_grad),
                                  viol(rep.span_min_u, rep.const_u), viol(rep.span_min_grad, rep.const_grad)});
  return rep;
}

namespace {

SpMat rows_to_matrix(const SinhGrid& g, int d, int n, bool laplacian) {
  const std::size_t N = g.size();
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t j = 0; j < N; ++j) {
    if (n > 0 && j == 0) continue;
    const auto row = laplacian ? g.laplacian_row(j, d, n) : g.derivative_row(j, n % 2 ? -1 : 1);
    for (int k = 0; k < row.count; ++k) t.emplace_back(j, row.idx[k], row.w[k]);
  }
  SpMat M(N, N);
  M.setFromTriplets(t.begin(), t.end());
  return M;
}

}  // namespace

CoercivityReport coercivity_spectrum(const QuotientProblem& P, const ConstantsTable& table,
                                     const ProfileBasis& basis) {
  const int d = table.d(), p = table.p();
  if (P.i < 1) throw Error(Errc::ConfigInvalid, "power i must be at least 1");
  if (P.form == CoercivityForm::SingleH && P.i != 1) throw Error(Errc::ConfigInvalid, "SingleH form has i = 1");
  if (P.n < 0 || P.n + 1 >= static_cast<int>(table.rows.size()))
    throw Error(Errc::ConfigInvalid, "harmonic index outside the constants table");
  if (d < 6) throw Error(Errc::ConfigInvalid, "coercivity forms need d >= 6");
  if (!(P.R > 4.0 * table.input.M)) throw Error(Errc::ConfigInvalid, "R must exceed 4 M");

  CoercivityReport rep;
  // which orthogonality conditions the lemma imposes on the sector n
  std::vector<int> levels;
  if (P.form == CoercivityForm::SingleH) {
    for (const auto& row : table.rows) {
      const double gap = std::abs(P.q - (d / 2.0 - 2.0 - row.gamma));
      if (gap < P.delta) {
        std::ostringstream os;
        os << "weight q = " << P.q << " within " << P.delta << " of d/2 - 2 - gamma_" << row.n;
        throw Error(Errc::ConfigInvalid, os.str());
      }
    }
    int n0 = -1;
    while (n0 + 1 < static_cast<int>(table.rows.size()) && !(P.q - (d / 2.0 - 2.0 - table.row(n0 + 1).gamma) < 0))
      ++n0;
    if (P.n <= n0) levels.push_back(0);
  } else {
    for (const auto& row : table.rows)
      if (row.m + row.delta <= P.i && row.delta == 0.0)
        throw Error(Errc::ConfigInvalid, "iterate power hits a sector with delta_n = 0");
    int n0 = 0;
    while (n0 + 1 < static_cast<int>(table.rows.size()) && table.row(n0 + 1).m + table.row(n0 + 1).delta <= P.i) ++n0;
    if (P.n <= n0)
      for (int j = 0; j <= P.i - table.row(P.n).m - 1; ++j) levels.push_back(j);
  }
  if (!P.constraints) levels.clear();
  if (P.max_constraints >= 0 && static_cast<int>(levels.size()) > P.max_constraints) levels.resize(P.max_constraints);
  rep.constraint_levels = levels;
  rep.constraint_count = static_cast<int>(levels.size());

  const SinhGrid g = SinhGrid::with_min_spacing(P.R, P.nodes, P.h_min);
  const auto& r = g.r();
  const std::size_t N = g.size();
  // unknowns r_1 .. r_{N-2}, u(R) = 0; u(0) is zero for n > 0 and the even extrapolation otherwise
  const std::size_t j0 = 1;
  const std::size_t m = N - 2;

  const SpMat L = rows_to_matrix(g, d, P.n, true);
  const SpMat D1 = rows_to_matrix(g, d, P.n, false);
  std::vector<double> Qn(N);
  for (std::size_t j = 0; j < N; ++j) Qn[j] = interpolate(*basis.grid, basis.gs.Q.f, r[j]);
  SpMat V(N, N);
  {
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t j = 0; j < N; ++j) t.emplace_back(j, j, -p * std::pow(Qn[j], p - 1));
    V.setFromTriplets(t.begin(), t.end());
  }
  const SpMat H = SpMat(-L) + V;
  SpMat Hi = H;
  for (int k = 1; k < P.i; ++k) Hi = SpMat(H * Hi);

  SpMat E(N, m);  // embeds the unknowns into the full grid
  {
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t k = 0; k < m; ++k) t.emplace_back(j0 + k, k, 1.0);
    if (P.n == 0) {
      const double a = r[1] * r[1], b = r[2] * r[2];
      t.emplace_back(0, 0, b / (b - a));
      t.emplace_back(0, 1, -a / (b - a));
    }
    E.setFromTriplets(t.begin(), t.end());
  }
  const std::vector<double> W = g.node_weights(d);
  // square-root forms: the quotient is |G u|^2 / |F u|^2 with weighted rows
  auto rows = [&](const SpMat& Op, auto weight) {
    Eigen::VectorXd w(N);
    for (std::size_t j = 0; j < N; ++j) w(j) = std::sqrt(weight(j));
    return SpMat(w.asDiagonal() * Op * E);
  };
  auto plain = [&](double power, std::size_t j) { return 1.0 / (1.0 + std::pow(r[j], power)); };

  const SpMat G = rows(Hi, [&](std::size_t j) { return W[j] * plain(2 * P.q, j); });
  std::vector<SpMat> blocks;
  SpMat I(N, N);
  I.setIdentity();
  if (P.form == CoercivityForm::SingleH) {
    blocks.push_back(rows(L, [&](std::size_t j) { return W[j] * plain(2 * P.q, j); }));
    blocks.push_back(rows(D1, [&](std::size_t j) { return row_weight_limit(r[j], W[j], -2.0) * plain(2 * P.q, j); }));
    blocks.push_back(rows(I, [&](std::size_t j) { return row_weight_limit(r[j], W[j], -4.0) * plain(2 * P.q, j); }));
  } else {
    SpMat Lk = I;
    for (int mu = 0; mu <= 2 * P.i; ++mu) {
      const double power = 4.0 * P.i - 2.0 * mu + 2.0 * P.q;
      const SpMat Dmu = mu % 2 == 0 ? Lk : SpMat(D1 * Lk);
      blocks.push_back(rows(Dmu, [&](std::size_t j) { return W[j] * plain(power, j); }));
      if (mu % 2 == 1) Lk = SpMat(L * Lk);
    }
  }
  SpMat F(static_cast<Eigen::Index>(blocks.size() * N), m);
  {
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (int o = 0; o < blocks[b].outerSize(); ++o)
        for (SpMat::InnerIterator it(blocks[b], o); it; ++it)
          t.emplace_back(b * N + it.row(), it.col(), it.value());
    F.setFromTriplets(t.begin(), t.end());
  }

  // constraint rows <u, H^j Phi>
  const double M = table.input.M;
  const KernelPair pair_n = P.n == 0 ? basis.pair : kernel_pair(table, P.n, basis.grid);
  const std::vector<double> phi_n = [&] {
    const OrthoBasis ob = P.n == 0 ? build_phi_basis(basis.pair, basis.ladder, M)
                                   : build_phi_basis(pair_n, build_ladder(pair_n, table), M);
    return P.full_phi ? ob.Phi.f : ob.powers[0];
  }();
  Eigen::VectorXd phi(N);
  for (std::size_t j = 0; j < N; ++j) phi(j) = r[j] < 2.0 * M ? interpolate(*basis.grid, phi_n, r[j]) : 0.0;
  Eigen::MatrixXd C(levels.size(), m);
  std::vector<Eigen::VectorXd> psi;  // H^j Phi on the unknowns
  {
    Eigen::VectorXd h = phi;
    int level = 0;
    for (std::size_t c = 0; c < levels.size(); ++c) {
      while (level < levels[c]) {
        h = H * h;
        ++level;
      }
      Eigen::VectorXd wh(N);
      for (std::size_t j = 0; j < N; ++j) wh(j) = W[j] * h(j);
      C.row(c) = (E.transpose() * wh).transpose();
      psi.push_back(h.segment(j0, m));
    }
  }

  // unit column scaling of F, then F S = Q R and y = R S^{-1} u turns the pencil into a plain
  // eigenproblem for X^T X with X = G S R^{-1}
  Eigen::VectorXd s(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double c = F.col(k).norm();
    s(k) = c > 0 ? 1.0 / c : 1.0;
  }
  const SpMat Fs = F * s.asDiagonal();
  Eigen::SparseQR<SpMat, Eigen::NaturalOrdering<int>> qr;
  qr.compute(Fs);
  if (qr.info() != Eigen::Success || qr.rank() < static_cast<Eigen::Index>(m))
    throw Error(Errc::IllConditioned, "denominator form is rank deficient");
  const SpMat Rf = qr.matrixR().topLeftCorner(m, m);
  Eigen::MatrixXd Xt = Eigen::MatrixXd(SpMat(G * s.asDiagonal()).transpose());
  Rf.transpose().triangularView<Eigen::Lower>().solveInPlace(Xt);
  const Eigen::MatrixXd Y = Xt * Xt.transpose();

  // explicit projection onto the constrained subspace
  const Eigen::Index k = C.rows();
  Eigen::MatrixXd Ct = (C * s.asDiagonal()).transpose();
  Rf.transpose().triangularView<Eigen::Lower>().solveInPlace(Ct);
  Eigen::HouseholderQR<Eigen::MatrixXd> hq(Ct);
  Eigen::MatrixXd Yq = Y;
  if (k > 0) {
    Yq.applyOnTheLeft(hq.householderQ().adjoint());
    Yq.applyOnTheRight(hq.householderQ());
  }
  const Eigen::Index mr = static_cast<Eigen::Index>(m) - k;
  const Eigen::MatrixXd Yr = Yq.bottomRightCorner(mr, mr);
  Eigen::LLT<Eigen::MatrixXd> llt(Yr);
  if (llt.info() != Eigen::Success) throw Error(Errc::IllConditioned, "constrained pencil is singular");

  // inverse iteration at shift zero
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(mr);
  for (Eigen::Index q = 0; q < mr; ++q) v(q) = nd(rng);
  v.normalize();
  double lambda = INFINITY;
  for (int it = 1; it <= P.max_iterations; ++it) {
    v = llt.solve(v);
    v.normalize();
    const double next = v.dot(Yr * v);
    rep.iterations = it;
    if (it > 3 && std::abs(next - lambda) <= P.tol * std::abs(next)) {
      lambda = next;
      rep.converged = true;
      break;
    }
    lambda = next;
  }
  rep.min_quotient = lambda;

  // largest eigenvalue by power iteration; the ratio is the condition of the constrained pencil
  {
    Eigen::VectorXd x = Eigen::VectorXd::Ones(mr).normalized();
    double top = 0.0;
    for (int it = 0; it < 200; ++it) {
      x = Yr * x;
      const double next = x.norm();
      x /= next;
      if (it > 3 && std::abs(next - top) <= 1e-8 * next) {
        top = next;
        break;
      }
      top = next;
    }
    rep.condition = lambda > 0 ? top / lambda : INFINITY;
  }
  if (!(rep.condition <= P.max_condition)) {
    std::ostringstream os;
    os << "condition estimate " << rep.condition << " of the constrained pencil exceeds " << P.max_condition;
    throw Error(Errc::IllConditioned, os.str());
  }
  rep.r = r;
  {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    y.tail(mr) = v;
    if (k > 0) y.applyOnTheLeft(hq.householderQ());
    Rf.triangularView<Eigen::Upper>().solveInPlace(y);
    const Eigen::VectorXd full = E * Eigen::VectorXd(s.cwiseProduct(y));
    rep.eigenfunction.assign(full.data(), full.data() + N);
  }

  // kernel direction chi_{R/2} T_0 of the sector
  {
    Eigen::VectorXd u(m);
    for (std::size_t q = 0; q < m; ++q) {
      const double rr = r[j0 + q];
      u(q) = chi_scaled(rr, P.R / 2.0) * interpolate(*basis.grid, pair_n.T0.f, rr);
    }
    rep.kernel_quotient = (G * u).squaredNorm() / (F * u).squaredNorm();
  }

  if (P.form == CoercivityForm::Iterate) {
    // unweighted corollary on random constrained samples
    SpMat Li = L;
    for (int q = 1; q < P.i; ++q) Li = SpMat(L * Li);
    const SpMat HE = Hi * E, LE = Li * E;
    Eigen::VectorXd wv(N);
    for (std::size_t j = 0; j < N; ++j) wv(j) = W[j];
    Eigen::MatrixXd Psi(m, psi.size());
    for (std::size_t c = 0; c < psi.size(); ++c) Psi.col(c) = psi[c];
    const Eigen::MatrixXd CP = C * Psi;
    std::mt19937_64 srng(7);
    rep.unweighted_ratio = INFINITY;
    const double t_lo = std::log(std::max(10.0 * P.h_min, 1e-3)), t_hi = std::log(P.R / 4.0);
    for (int sample = 0; sample < 200; ++sample) {
      const BumpSum b = random_bump_sum(srng, t_lo, t_hi, 12);
      Eigen::VectorXd u(m);
      for (std::size_t q = 0; q < m; ++q) {
        double v, v1, v2;
        b.eval(r[j0 + q], v, v1, v2);
        u(q) = v;
      }
      if (CP.size() > 0) u -= Psi * CP.fullPivLu().solve(C * u);
      const Eigen::VectorXd hu = HE * u, lu2 = LE * u;
      const double num = hu.cwiseProduct(hu).dot(wv), den = lu2.cwiseProduct(lu2).dot(wv);
      if (den > 0) rep.unweighted_ratio = std::min(rep.unweighted_ratio, num / den);
    }
  }
  return rep;
}

}  // namespace blowup
