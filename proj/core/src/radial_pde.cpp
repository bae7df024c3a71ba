#include "blowup/radial_pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <lapacke.h>

#include "blowup/cutoff.hpp"
#include "blowup/error.hpp"
#include "blowup/fit.hpp"
#include "blowup/grid.hpp"
#include "blowup/param_flow.hpp"

namespace blowup {

struct PdeWorkspace {
  const SinhGrid* grid = nullptr;
  int d = 0;
  std::vector<SinhGrid::Row> rows;
  double factored_dt = -1;
  int kl = 3, ku = 2, ldab = 0;
  std::vector<double> ab;
  std::vector<lapack_int> ipiv;
};

namespace {

constexpr double kSdirk = 1.0 - 0.70710678118654752440;

SinhGrid::Row make_row(const std::vector<double>& r, std::size_t j, int parity, int d, bool laplacian,
                       std::size_t width) {
  const std::size_t N = r.size() - 1;
  const std::size_t half = width / 2;
  std::vector<double> x;
  std::vector<std::size_t> idx;
  std::vector<double> sign;
  long lo = static_cast<long>(j) - static_cast<long>(half);
  long hi = lo + static_cast<long>(width) - 1;
  if (hi > static_cast<long>(N)) {
    hi = static_cast<long>(N);
    lo = hi - static_cast<long>(width) + 1;
  }
  for (long k = lo; k <= hi; ++k) {
    if (k < 0) {
      x.push_back(-r[-k]);
      idx.push_back(static_cast<std::size_t>(-k));
      sign.push_back(parity);
    } else {
      x.push_back(r[k]);
      idx.push_back(static_cast<std::size_t>(k));
      sign.push_back(1.0);
    }
  }
  const auto w = fornberg_weights(r[j], x, 2);
  SinhGrid::Row row;
  for (std::size_t a = 0; a < x.size(); ++a) {
    double c;
    if (laplacian)
      c = j == 0 ? d * w[2][a] : w[2][a] + (d - 1.0) / r[j] * w[1][a];
    else
      c = w[1][a];
    c *= sign[a];
    int slot = -1;
    for (int s = 0; s < row.count; ++s)
      if (row.idx[s] == idx[a]) slot = s;
    if (slot < 0) {
      slot = row.count++;
      row.idx[slot] = idx[a];
      row.w[slot] = 0.0;
    }
    row.w[slot] += c;
  }
  return row;
}

std::vector<double> apply_rows(const SinhGrid& g, const std::vector<double>& f, int parity, int d, bool lap,
                               std::size_t width) {
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const auto row = make_row(g.r(), j, parity, d, lap, width);
    double s = 0.0;
    for (int k = 0; k < row.count; ++k) s += row.w[k] * f[row.idx[k]];
    out[j] = s;
  }
  return out;
}

// Integral over [r_0, r_{n-1}] of the piecewise cubic through four neighbouring nodes, two Gauss points per interval.
double cubic_integral(const std::vector<double>& r, const std::vector<double>& g, std::size_t n) {
  if (n < 2) return 0.0;
  if (n < 4) {
    double s = 0.0;
    for (std::size_t j = 1; j < n; ++j) s += 0.5 * (g[j - 1] + g[j]) * (r[j] - r[j - 1]);
    return s;
  }
  constexpr double q = 0.57735026918962576451;
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::size_t lo = std::min(k > 0 ? k - 1 : 0, n - 4);
    const double mid = 0.5 * (r[k] + r[k + 1]), half = 0.5 * (r[k + 1] - r[k]);
    for (double x : {mid - q * half, mid + q * half}) {
      double v = 0.0;
      for (std::size_t a = lo; a < lo + 4; ++a) {
        double w = 1.0;
        for (std::size_t b = lo; b < lo + 4; ++b)
          if (b != a) w *= (x - r[b]) / (r[a] - r[b]);
        v += w * g[a];
      }
      s += half * v;
    }
  }
  return s;
}

double sup_norm(const std::vector<double>& u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

PdeWorkspace& workspace(SimState& st, int d) {
  if (!st.work || st.work->grid != st.grid.get() || st.work->d != d) {
    auto w = std::make_shared<PdeWorkspace>();
    w->grid = st.grid.get();
    w->d = d;
    const std::size_t n = st.grid->size();
    w->rows.resize(n);
    for (std::size_t j = 0; j + 1 < n; ++j) w->rows[j] = st.grid->laplacian_row(j, d);
    w->ldab = 2 * w->kl + w->ku + 1;
    w->ab.assign(static_cast<std::size_t>(w->ldab) * n, 0.0);
    w->ipiv.assign(n, 0);
    st.work = std::move(w);
  }
  return *st.work;
}

void factor(PdeWorkspace& w, std::size_t n, double gdt) {
  std::fill(w.ab.begin(), w.ab.end(), 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& {
    return w.ab[(w.kl + w.ku + i - j) + j * static_cast<std::size_t>(w.ldab)];
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    at(i, i) += 1.0;
    const auto& row = w.rows[i];
    for (int k = 0; k < row.count; ++k) at(i, row.idx[k]) -= gdt * row.w[k];
  }
  at(n - 1, n - 1) = 1.0;
  const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, static_cast<lapack_int>(n), static_cast<lapack_int>(n),
                                         w.kl, w.ku, w.ab.data(), w.ldab, w.ipiv.data());
  if (info != 0) throw Error(Errc::IllConditioned, "banded factorization failed");
  w.factored_dt = gdt;
}

void solve(PdeWorkspace& w, std::vector<double>& b) {
  const lapack_int n = static_cast<lapack_int>(b.size());
  const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, w.kl, w.ku, 1, w.ab.data(), w.ldab,
                                         w.ipiv.data(), b.data(), n);
  if (info != 0) throw Error(Errc::IllConditioned, "banded solve failed");
}

std::vector<double> apply_L(const PdeWorkspace& w, const std::vector<double>& u) {
  std::vector<double> out(u.size(), 0.0);
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const auto& row = w.rows[i];
    double s = 0.0;
    for (int k = 0; k < row.count; ++k) s += row.w[k] * u[row.idx[k]];
    out[i] = s;
  }
  return out;
}

void react(std::vector<double>& u, double tau, int p) {
  for (double& v : u) {
    const double a = std::pow(std::abs(v), p - 1);
    v *= std::pow(1.0 - (p - 1) * a * tau, -1.0 / (p - 1));
  }
}

double lambda_from_sup(double sup, int p) { return sup > 0 ? std::pow(sup, -(p - 1) / 2.0) : INFINITY; }

void record(SimState& st, const SimConfig& cfg, int p, int d) {
  TraceRow row;
  row.t = st.t;
  row.dt = st.dt;
  row.elapsed = st.trace.empty() ? 0.0 : st.since_record;
  st.since_record = 0.0;
  row.sup = sup_norm(st.u);
  row.lambda_hat = lambda_from_sup(std::abs(st.u[0]), p);
  row.h_min = st.grid->h_min();
  if (!cfg.sobolev.empty())
    for (const auto& s : sobolev_diagnostics(*st.grid, st.u, d, cfg.sobolev)) row.sobolev.push_back(s.value);
  st.trace.push_back(std::move(row));
}

}  // namespace

SinhGrid::SinhGrid(double R, std::size_t N, double beta) : R_(R), beta_(beta) {
  if (!(R > 0) || N < 8) throw Error(Errc::ConfigInvalid, "grid needs R > 0 and at least 8 intervals");
  r_.resize(N + 1);
  for (std::size_t j = 0; j <= N; ++j) {
    const double x = double(j) / N;
    r_[j] = beta > 1e-8 ? R * std::sinh(beta * x) / std::sinh(beta) : R * x;
  }
  r_[N] = R;
}

SinhGrid SinhGrid::with_min_spacing(double R, std::size_t N, double h) {
  if (!(h > 0)) throw Error(Errc::ConfigInvalid, "minimum spacing must be positive");
  if (h >= R / N) return SinhGrid(R, N, 0.0);
  auto first = [&](double b) { return R * std::sinh(b / N) / std::sinh(b); };
  double lo = 1e-6, hi = 700.0;
  if (first(hi) > h) return SinhGrid(R, N, hi);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (first(mid) > h ? lo : hi) = mid;
  }
  return SinhGrid(R, N, 0.5 * (lo + hi));
}

double SinhGrid::interpolate(const std::vector<double>& f, double x) const {
  x = std::abs(x);
  if (x >= R_) return 0.0;
  const std::size_t n = r_.size();
  const std::size_t j = static_cast<std::size_t>(std::upper_bound(r_.begin(), r_.end(), x) - r_.begin());
  if (j > 0 && r_[j - 1] == x) return f[j - 1];
  long lo = static_cast<long>(j) - 3;
  lo = std::min<long>(lo, static_cast<long>(n) - 6);
  double out = 0.0;
  std::array<double, 6> xs{}, fs{};
  for (int a = 0; a < 6; ++a) {
    const long k = lo + a;
    xs[a] = k < 0 ? -r_[-k] : r_[k];
    fs[a] = f[k < 0 ? -k : k];
  }
  for (int a = 0; a < 6; ++a) {
    double w = 1.0;
    for (int b = 0; b < 6; ++b)
      if (b != a) w *= (x - xs[b]) / (xs[a] - xs[b]);
    out += w * fs[a];
  }
  return out;
}

SinhGrid::Row SinhGrid::laplacian_row(std::size_t j, int d, int n) const {
  Row row = make_row(r_, j, n % 2 ? -1 : 1, d, true, 5);
  if (n > 0 && j > 0) {
    for (int k = 0; k < row.count; ++k)
      if (row.idx[k] == j) row.w[k] -= n * (n + d - 2.0) / (r_[j] * r_[j]);
  }
  return row;
}
SinhGrid::Row SinhGrid::derivative_row(std::size_t j, int parity) const {
  return make_row(r_, j, parity, 0, false, 5);
}

std::vector<double> SinhGrid::laplacian(const std::vector<double>& f, int d) const {
  return apply_rows(*this, f, 1, d, true, 5);
}
std::vector<double> SinhGrid::derivative(const std::vector<double>& f, int parity) const {
  return apply_rows(*this, f, parity, 0, false, 5);
}
std::vector<double> SinhGrid::laplacian2(const std::vector<double>& f, int d) const {
  return apply_rows(*this, f, 1, d, true, 3);
}
std::vector<double> SinhGrid::derivative2(const std::vector<double>& f, int parity) const {
  return apply_rows(*this, f, parity, 0, false, 3);
}

double SinhGrid::weighted_integral(const std::vector<double>& f, int d) const {
  std::vector<double> g(r_.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = f[j] * std::pow(r_[j], d - 1);
  return cubic_integral(r_, g, g.size());
}

std::vector<double> SinhGrid::node_weights(int d) const {
  const std::size_t n = r_.size();
  std::vector<double> w(n, 0.0);
  constexpr double q = 0.57735026918962576451;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::size_t lo = std::min(k > 0 ? k - 1 : 0, n - 4);
    const double mid = 0.5 * (r_[k] + r_[k + 1]), half = 0.5 * (r_[k + 1] - r_[k]);
    for (double x : {mid - q * half, mid + q * half})
      for (std::size_t a = lo; a < lo + 4; ++a) {
        double c = 1.0;
        for (std::size_t b = lo; b < lo + 4; ++b)
          if (b != a) c *= (x - r_[b]) / (r_[a] - r_[b]);
        w[a] += half * c;
      }
  }
  for (std::size_t j = 0; j < n; ++j) w[j] *= std::pow(r_[j], d - 1);
  return w;
}

void SimConfig::validate() const {
  std::ostringstream os;
  if (!(R >= 7.0)) os << "R must be at least 7; ";
  if (nodes < 16) os << "at least 16 nodes required; ";
  if (!(resolution > 0)) os << "resolution must be positive; ";
  if (!(safety_r > 0) || !(safety_f > 0)) os << "safety factors must be positive; ";
  if (!(U_stop > 0) || !(t_max > 0)) os << "U_stop and t_max must be positive; ";
  if (!(dt_max > 0)) os << "dt_max must be positive; ";
  if (record_every == 0) os << "record_every must be positive; ";
  for (int k : sobolev)
    if (k < 0 || k > 6) os << "Sobolev orders must lie in 0..6; ";
  if (init.kind == InitialData::Kind::Profile && !(init.cut > 0 && 2.0 * init.cut < R))
    os << "profile cut-off must satisfy 0 < 2 cut < R; ";
  if (init.kind == InitialData::Kind::Samples && !init.samples) os << "sample initial data needs a function; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw Error(Errc::ConfigInvalid, msg);
}

SimState initial_state(const SimConfig& cfg, const SimContext& ctx) {
  cfg.validate();
  if (!ctx.table) throw Error(Errc::ConfigInvalid, "simulation needs a constants table");
  const ConstantsTable& t = *ctx.table;
  const int p = t.p();
  const double m = t.scaling_exponent();

  std::function<double(double)> u0;
  switch (cfg.init.kind) {
    case InitialData::Kind::Bump: {
      const double A = cfg.init.amplitude;
      u0 = [A](double r) { return A * std::exp(-r * r); };
      break;
    }
    case InitialData::Kind::Samples:
      u0 = cfg.init.samples;
      break;
    case InitialData::Kind::Profile: {
      if (!ctx.basis) throw Error(Errc::ConfigInvalid, "profile initial data needs the profile basis");
      const ProfileBasis& B = *ctx.basis;
      const int ell = cfg.init.ell;
      const double s0 = cfg.init.s0;
      const double lambda0 = std::pow(s0, -ell / (2.0 * ell - t.alpha));
      const ParamFamily b = special_solution(t, ell, s0);
      ApproximateProfile prof = assemble(B, t, b, true);
      localize(prof, B, t);
      const auto lin = linearize(t, ell, t.input.L);
      std::vector<double> dir(B.grid->size(), 0.0);
      if (ell >= 2) {
        const auto& rr = B.grid->r();
        for (int i = 1; i <= ell; ++i) {
          const double e = lin.eigvec_top(i - 1, 1) / std::pow(s0, i);
          for (std::size_t j = 0; j < dir.size(); ++j) dir[j] += e * B.ladder.T[i].f[j] * chi_scaled(rr[j], prof.B1);
        }
      }
      std::vector<double> f(dir.size());
      for (std::size_t j = 0; j < f.size(); ++j) f[j] = prof.Qb_localized.f[j] + cfg.init.shoot_amplitude * dir[j];
      const double rmax = B.grid->r_max();
      const double cinf = t.c_inf;
      const double cut = cfg.init.cut;
      auto G = B.grid;
      u0 = [f, G, lambda0, m, rmax, cinf, cut](double r) {
        const double y = r / lambda0;
        const double v = y <= rmax ? interpolate(*G, f, y) : cinf * std::pow(y, -m);
        return chi_scaled(r, cut) * std::pow(lambda0, -m) * v;
      };
      break;
    }
  }

  // probe the sup norm to size the grid
  double sup = std::abs(u0(0.0));
  for (int k = 0; k <= 400; ++k) sup = std::max(sup, std::abs(u0(cfg.R * std::pow(10.0, -8.0 + 8.0 * k / 400.0))));
  const double h = cfg.regrid && sup > 0 ? lambda_from_sup(sup, p) / cfg.resolution : cfg.R / cfg.nodes;
  SimState st;
  st.grid = std::make_shared<const SinhGrid>(SinhGrid::with_min_spacing(cfg.R, cfg.nodes, h));
  const auto& r = st.grid->r();
  st.u.resize(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) st.u[j] = u0(r[j]);
  st.u.back() = 0.0;
  record(st, cfg, p, t.d());
  return st;
}

bool advance(SimState& st, const SimConfig& cfg, const ConstantsTable& table) {
  const int p = table.p(), d = table.d();
  const double sup = sup_norm(st.u);
  if (!std::isfinite(sup) || sup > cfg.U_stop) {
    st.overflow = true;
    return false;
  }
  double dt = std::min(cfg.dt_max, cfg.t_max - st.t);
  if (cfg.reaction && sup > 0) dt = std::min(dt, cfg.safety_f / std::pow(sup, p - 1));
  if (cfg.diffusion) dt = std::min(dt, cfg.safety_r * st.grid->h_min() * st.grid->h_min());
  if (!(dt > cfg.dt_min)) {
    std::ostringstream os;
    os << "time step " << dt << " at t = " << st.t;
    throw Error(Errc::StepUnderflow, os.str());
  }

  if (cfg.reaction) react(st.u, 0.5 * dt, p);
  if (cfg.diffusion) {
    PdeWorkspace& w = workspace(st, d);
    const std::size_t n = st.u.size();
    if (w.factored_dt != kSdirk * dt) factor(w, n, kSdirk * dt);
    // Y1 = (I - g h L)^{-1} u, Y2 = (I - g h L)^{-1} (u + (1 - g) h L Y1), u_new = Y2
    std::vector<double> y1 = st.u;
    y1.back() = 0.0;
    solve(w, y1);
    const auto Ly1 = apply_L(w, y1);
    std::vector<double> y2(n);
    for (std::size_t j = 0; j < n; ++j) y2[j] = st.u[j] + (1.0 - kSdirk) * dt * Ly1[j];
    y2.back() = 0.0;
    solve(w, y2);
    st.u = std::move(y2);
  }
  if (cfg.reaction) react(st.u, 0.5 * dt, p);
  st.t += dt;
  st.since_record += dt;
  st.dt = dt;
  ++st.steps;

  if (cfg.regrid) {
    const double target = lambda_from_sup(sup_norm(st.u), p) / cfg.resolution;
    if (std::isfinite(target) && (target < 0.5 * st.grid->h_min() || target > 2.0 * st.grid->h_min()) &&
        (target < st.grid->R() / (st.grid->size() - 1) || st.grid->beta() > 0.0)) {
      auto g = std::make_shared<const SinhGrid>(SinhGrid::with_min_spacing(cfg.R, cfg.nodes, target));
      std::vector<double> u(g->size());
      for (std::size_t j = 0; j < u.size(); ++j) u[j] = st.grid->interpolate(st.u, g->r()[j]);
      u.back() = 0.0;
      st.grid = std::move(g);
      st.u = std::move(u);
      ++st.regrids;
    }
  }
  if (st.steps % cfg.record_every == 0) record(st, cfg, p, d);
  return true;
}

SimState simulate(const SimConfig& cfg, const SimContext& ctx) {
  SimState st = initial_state(cfg, ctx);
  const ConstantsTable& t = *ctx.table;
  while (st.t < cfg.t_max * (1 - 1e-15) && st.steps < cfg.max_steps) {
    if (!advance(st, cfg, t)) break;
  }
  if (st.trace.empty() || st.trace.back().t != st.t) record(st, cfg, t.p(), t.d());
  return st;
}

double extract_scale_proxy(const SimState& st, const ConstantsTable& table) {
  const double u0 = st.u.front();
  if (!(u0 > 0)) throw Error(Errc::InvalidInput, "proxy scale needs u(0) > 0");
  return std::pow(u0, -(table.p() - 1) / 2.0);
}

ModulationResult extract_scale_modulation(const SimState& st, const ConstantsTable& table,
                                          const ProfileBasis& basis, const OrthoBasis& phi,
                                          const ParamFamily& b) {
  ModulationResult res;
  res.proxy = extract_scale_proxy(st, table);
  const double m = table.scaling_exponent();
  const auto& g = *basis.grid;
  std::vector<double> ref = basis.gs.Q.f;
  if (b.b1() > 0) {
    ApproximateProfile prof = assemble(basis, table, b, true);
    localize(prof, basis, table);
    ref = prof.Qb_localized.f;
  }
  // Gauss rule on the union of both grids: the interpolants of u and of Phi are integrated, not resampled,
  // so node-scale noise in u cancels instead of aliasing into the direction.
  const double ymax = 2.0 * phi.M;
  const int d = table.d();
  const auto& dir = phi.powers.at(0);  // chi_M T_0
  const auto& r = st.grid->r();
  const auto& gy = g.r();
  using Gauss = boost::math::quadrature::gauss<double, 6>;
  std::vector<double> cuts;
  auto f = [&](double lam) {
    const double scale = std::pow(lam, m);
    cuts.clear();
    for (double x : r) {
      if (x / lam >= ymax) break;
      cuts.push_back(x / lam);
    }
    for (double x : gy) {
      if (x >= ymax) break;
      cuts.push_back(x);
    }
    cuts.push_back(ymax);
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a0 = cuts[k], a1 = cuts[k + 1];
      if (!(a1 > a0)) continue;
      const double mid = 0.5 * (a0 + a1), half = 0.5 * (a1 - a0);
      auto term = [&](double x) {
        const double yv = mid + half * x;
        return (scale * st.grid->interpolate(st.u, lam * yv) - interpolate(g, ref, yv)) *
               interpolate(g, dir, yv) * std::pow(yv, d - 1);
      };
      const auto& xs = Gauss::abscissa();
      const auto& ws = Gauss::weights();
      double piece = ws[0] * term(0.0);
      for (std::size_t i = 1; i < xs.size(); ++i) piece += ws[i] * (term(xs[i]) + term(-xs[i]));
      sum += half * piece;
    }
    return sum;
  };
  double lo = res.proxy / 1.5, hi = res.proxy * 1.5;
  double flo = f(lo), fhi = f(hi);
  if (!(flo * fhi < 0)) {
    res.lambda = res.proxy;
    res.used_proxy = true;
    return res;
  }
  boost::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(48),
                                                   iters);
  res.lambda = 0.5 * (root.first + root.second);
  return res;
}

const char* blowup_class_name(BlowupClass c) {
  switch (c) {
    case BlowupClass::None: return "none";
    case BlowupClass::TypeI: return "typeI";
    case BlowupClass::TypeII: return "typeII";
    case BlowupClass::Undetermined: return "undetermined";
  }
  return "?";
}

Classification classify_blowup(const std::vector<TraceRow>& trace, const ConstantsTable& table,
                               const ClassifyOptions& opt) {
  const int p = table.p();
  Classification c;
  c.kappa_target = std::pow(1.0 / (p - 1), 1.0 / (p - 1));
  if (trace.size() < 8) throw Error(Errc::InsufficientDecades, "trace too short to classify");

  double smax = 0.0;
  for (const auto& row : trace) smax = std::max(smax, row.sup);
  if (trace.back().sup < 0.9 * smax || trace.back().sup <= trace.front().sup) {
    c.cls = BlowupClass::None;
    return c;
  }

  const std::size_t n = trace.size();
  const std::size_t count = std::max<std::size_t>(8, static_cast<std::size_t>(opt.window * n));
  const std::size_t first = n > count ? n - count : 0;
  c.window_count = n - first;
  // time left to the last sample, summed backwards so it stays accurate far below ulp(t)
  std::vector<double> left(n, 0.0);
  for (std::size_t k = n - 1; k > 0; --k) left[k - 1] = left[k] + trace[k].elapsed;
  const double t_last = trace.back().t;
  const double span = std::max(left[first], 1e-300);

  auto fit_at = [&](double delta, bool lambda) {
    std::vector<double> x, yv;
    for (std::size_t k = first; k < n; ++k) {
      x.push_back(std::log(left[k] + delta));
      yv.push_back(std::log(lambda ? trace[k].lambda_hat : trace[k].sup));
    }
    return fit_line(x, yv);
  };
  const double dlo = std::log(std::max(trace.back().dt, span * 1e-12) * 1e-3), dhi = std::log(span * 10.0);
  double best = dlo, best_res = INFINITY;
  for (int k = 0; k <= 400; ++k) {
    const double ld = dlo + (dhi - dlo) * k / 400.0;
    const double rr = fit_at(std::exp(ld), false).residual;
    if (rr < best_res) {
      best_res = rr;
      best = ld;
    }
  }
  const double step = (dhi - dlo) / 400.0;
  const auto mn = boost::math::tools::brent_find_minima(
      [&](double ld) { return fit_at(std::exp(ld), false).residual; }, best - step, best + step, 50);
  const double delta = std::exp(mn.first);
  c.T_on_boundary = mn.first <= dlo + step || mn.first >= dhi - step;
  c.T_hat = t_last + delta;
  c.time_left = delta;
  const LineFit fs = fit_at(delta, false);
  const LineFit fl = fit_at(delta, true);
  c.sup_exponent = fs.slope;
  c.sup_residual = fs.residual;
  c.lambda_exponent = fl.slope;
  c.lambda_residual = fl.residual;
  c.decades = std::log10((left[first] + delta) / delta);
  c.kappa_limit = trace.back().sup * std::pow(delta, 1.0 / (p - 1));
  if (c.decades < opt.min_decades) {
    std::ostringstream os;
    os << "only " << c.decades << " decades of T - t resolved";
    throw Error(Errc::InsufficientDecades, os.str());
  }
  const double e1 = -1.0 / (p - 1);
  const double target2 = opt.ell / table.alpha;
  if (c.T_on_boundary || c.sup_residual > opt.max_residual)
    c.cls = BlowupClass::Undetermined;
  else if (std::abs(c.kappa_limit / c.kappa_target - 1.0) <= opt.type1_tol &&
      std::abs(c.sup_exponent / e1 - 1.0) <= opt.exponent_tol)
    c.cls = BlowupClass::TypeI;
  else if (std::abs(c.lambda_exponent / target2 - 1.0) <= opt.type2_tol && c.lambda_residual <= opt.max_residual)
    c.cls = BlowupClass::TypeII;
  else
    c.cls = BlowupClass::Undetermined;
  return c;
}

std::vector<SobolevNorm> sobolev_diagnostics(const SinhGrid& g, const std::vector<double>& u, int d,
                                             const std::vector<int>& orders) {
  std::vector<SobolevNorm> out;
  for (int k : orders) {
    if (k < 0) throw Error(Errc::InvalidInput, "Sobolev order must be non-negative");
    std::vector<double> a = u, b = u;
    for (int j = 0; j < k / 2; ++j) {
      a = g.laplacian(a, d);
      b = g.laplacian2(b, d);
    }
    if (k % 2 == 1) {
      a = g.derivative(a, 1);
      b = g.derivative2(b, 1);
    }
    for (auto& v : a) v *= v;
    for (auto& v : b) v *= v;
    SobolevNorm s;
    s.k = k;
    s.value = std::sqrt(std::max(0.0, g.weighted_integral(a, d)));
    const double v2 = std::sqrt(std::max(0.0, g.weighted_integral(b, d)));
    s.noise = s.value > 0 ? std::abs(s.value - v2) / s.value : 0.0;
    s.noise_dominated = s.noise > 0.1;
    out.push_back(s);
  }
  return out;
}

PdeShootReport shoot_pde(SimConfig cfg, const SimContext& ctx, double a_lo, double a_hi, int iterations,
                         const ClassifyOptions& copt) {
  PdeShootReport rep;
  const ConstantsTable& t = *ctx.table;
  rep.target = copt.ell / t.alpha;
  auto run = [&](double a) {
    cfg.init.shoot_amplitude = a;
    const SimState st = simulate(cfg, ctx);
    PdeShootRun r;
    r.amplitude = a;
    r.overflow = st.overflow;
    r.final_sup = sup_norm(st.u);
    r.steps = st.steps;
    try {
      r.cls = classify_blowup(st.trace, t, copt);
    } catch (const Error&) {
      r.cls.cls = BlowupClass::Undetermined;
    }
    if (!st.overflow && r.cls.cls != BlowupClass::None) r.cls.cls = BlowupClass::Undetermined;
    rep.runs.push_back(r);
    return r;
  };
  const PdeShootRun lo = run(a_lo), hi = run(a_hi);
  const bool lo_blows = lo.overflow, hi_blows = hi.overflow;
  double best_gap = INFINITY;
  auto consider = [&](const PdeShootRun& r) {
    if (!r.overflow || r.cls.decades <= 0 || r.cls.T_on_boundary || r.cls.lambda_residual > copt.max_residual) return;
    const double gap = std::abs(r.cls.lambda_exponent - rep.target);
    if (gap < best_gap) {
      best_gap = gap;
      rep.best_amplitude = r.amplitude;
      rep.best_lambda_exponent = r.cls.lambda_exponent;
    }
  };
  consider(lo);
  consider(hi);
  if (lo_blows != hi_blows) {
    for (int it = 0; it < iterations; ++it) {
      const double mid = 0.5 * (a_lo + a_hi);
      const PdeShootRun r = run(mid);
      consider(r);
      if (r.overflow == lo_blows)
        a_lo = mid;
      else
        a_hi = mid;
    }
  }
  rep.reached = false;
  for (const auto& r : rep.runs)
    if (r.amplitude == rep.best_amplitude && r.cls.cls == BlowupClass::TypeII) rep.reached = true;
  return rep;
}

}  // namespace blowup
