#include "blowup/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "blowup/cutoff.hpp"
#include "blowup/error.hpp"
#include "emden_fowler.hpp"

namespace blowup {
namespace {

double clip_b(const RadialGrid& g, double b) { return std::min(b, g.r_max()); }

// Tail window [a, b] clipped to the grid; falls back to the outer decade-and-a-half when the grid is short.
std::pair<double, double> tail_window(const RadialGrid& g, double a, double b) {
  const double bb = clip_b(g, b);
  if (a * 3.0 <= bb) return {a, bb};
  return {bb / 30.0, bb};
}

PowerFit origin_fit(const RadialGrid& g, const std::vector<double>& f, double b) {
  std::vector<double> x, y;
  for (std::size_t j = 1; j < g.size() && g[j] <= b; ++j) {
    if (f[j] == 0.0) continue;
    x.push_back(g[j]);
    y.push_back(f[j]);
  }
  if (x.size() < 4) return {};
  return fit_power_law(x, y);
}

}  // namespace

KernelPair kernel_pair(const ConstantsTable& t, int n, std::shared_ptr<const RadialGrid> grid,
                       const KernelOptions& opt) {
  if (n < 0) throw Error(Errc::InvalidInput, "harmonic degree must be non-negative");
  const int d = t.d(), p = t.p();
  const double m = t.scaling_exponent();
  const double c = t.c_inf, cp = std::pow(c, p), cpm1 = t.c_inf_pm1;
  const double k = d - 2.0 - 2.0 * m;
  const double cn = n * (d + n - 2.0);
  const std::size_t K = opt.series_terms;

  const auto series = detail::origin_series(d, p, std::max<std::size_t>(K, opt.gamma_series_terms));
  const auto gT = detail::frobenius(series, d, p, n, n, K);

  const auto& r = grid->r();
  const std::size_t N = r.size();
  std::vector<double> T(N), dT(N), G(N, 0.0), dG(N, 0.0), W(N), V(N);

  auto series_eval = [&](double rr, std::size_t j) {
    double dq;
    const double q = detail::eval_even(series.q, rr, &dq);
    V[j] = -p * std::pow(q, p - 1);
    double gp;
    const double gv = detail::eval_even(gT, rr, &gp);
    T[j] = std::pow(rr, n) * gv;
    dT[j] = (n > 0 ? n * std::pow(rr, n - 1) * gv : 0.0) + std::pow(rr, n) * gp;
    W[j] = dT[j] / T[j];
  };

  std::vector<double> times{std::log(opt.r_start)};
  std::vector<std::size_t> where;
  for (std::size_t j = 0; j < N; ++j) {
    if (r[j] == 0.0) continue;
    if (r[j] <= opt.r_start) {
      series_eval(r[j], j);
    } else {
      times.push_back(std::log(r[j]));
      where.push_back(j);
    }
  }
  T[0] = n == 0 ? 1.0 : 0.0;
  dT[0] = n == 1 ? 1.0 : 0.0;
  W[0] = 0.0;
  V[0] = -p;

  const double rs = opt.r_start;
  double dq0;
  const double q0 = detail::eval_even(series.q, rs, &dq0);
  const double rm = std::pow(rs, m);
  double gp0;
  const double gv0 = detail::eval_even(gT, rs, &gp0);
  // state: w, w_t, omega = r T0'/T0, log T0
  std::array<double, 4> y{rm * q0 - c, rm * (m * q0 + rs * dq0), n + rs * gp0 / gv0, n * std::log(rs) + std::log(gv0)};

  auto sys = [&](const std::array<double, 4>& x, std::array<double, 4>& dx, double) {
    const double xi = x[0] / c;
    const double pv = p * detail::vpow(cpm1, xi, p);
    dx[0] = x[1];
    dx[1] = -k * x[1] - cp * detail::reaction_shift(xi, p);
    dx[2] = cn - pv - x[2] * x[2] - (d - 2.0) * x[2];
    dx[3] = x[2];
  };
  std::size_t seen = 0;
  auto obs = [&](const std::array<double, 4>& x, double) {
    if (seen++ == 0) return;
    const std::size_t j = where[seen - 2];
    const double rr = r[j];
    if (!(c + x[0] > 0)) throw Error(Errc::NegativeQ, "ground state vanished inside the kernel integration");
    V[j] = -p * detail::vpow(cpm1, x[0] / c, p) / (rr * rr);
    T[j] = std::exp(x[3]);
    W[j] = x[2] / rr;
    dT[j] = W[j] * T[j];
  };
  detail::integrate_times<4>(sys, y, times, obs, opt.rtol, 1e-300);
  for (std::size_t j = 1; j < N; ++j)
    if (!(T[j] > 0)) throw Error(Errc::SignChange, "T0 lost positivity");

  // Singular zero by reduction of order. Near the origin G is the termwise antiderivative of
  // r^{1-d-2n} (r^n / T0)^2, which is the pure singular series; beyond gamma_match_r quadrature.
  {
    const double kappa = d + 2.0 * n - 2.0;
    const std::size_t Kg = opt.gamma_series_terms;
    const auto gTl = detail::frobenius(series, d, p, n, n, Kg);
    std::vector<double> inv(gTl.size(), 0.0);
    inv[0] = 1.0 / gTl[0];
    for (std::size_t q = 1; q < gTl.size(); ++q) {
      double acc = 0.0;
      for (std::size_t i = 1; i <= q; ++i) acc += gTl[i] * inv[q - i];
      inv[q] = -acc / gTl[0];
    }
    const auto h = detail::series_mul(inv, inv, inv.size());
    auto Gser = [&](double rr, double* dGr) {
      double v = 0.0, dv = 0.0;
      for (std::size_t q = 0; q < h.size(); ++q) {
        const double e = 2.0 - d - 2.0 * n + 2.0 * q;
        if (e == 0.0) {
          v += -kappa * h[q] * std::log(rr);
          dv += -kappa * h[q] / rr;
        } else {
          v += -kappa * h[q] * std::pow(rr, e) / e;
          dv += -kappa * h[q] * std::pow(rr, e - 1.0);
        }
      }
      *dGr = dv;
      return v;
    };
    const std::size_t jm = std::max<std::size_t>(1, grid->lower_index(opt.gamma_match_r));
    std::vector<double> gs(N, 0.0);
    for (std::size_t j = 1; j < N; ++j) {
      const double s = (n > 0 ? std::pow(r[j], n) : 1.0) / T[j];
      gs[j] = s * s;
    }
    const auto I = grid->quadrature(1 - d - 2 * n).cumulative_from(gs, jm);
    double dG0;
    const double Gm = Gser(r[jm], &dG0);
    for (std::size_t j = 1; j < N; ++j) {
      double Gj, dGj;
      if (j <= jm) {
        Gj = Gser(r[j], &dGj);
      } else {
        Gj = Gm - kappa * I[j];
        dGj = -kappa * std::pow(r[j], 1.0 - d) / (T[j] * T[j]);
      }
      G[j] = T[j] * Gj;
      dG[j] = dT[j] * Gj + T[j] * dGj;
    }
  }

  KernelPair kp;
  kp.n = n;
  kp.d = d;
  kp.p = p;
  kp.gamma_n = gamma_n_of(d, p, n);
  const int par = n % 2 == 0 ? 1 : -1;
  kp.T0 = {grid, "T0", std::move(T), std::move(dT), par, false, std::nullopt};
  kp.Gamma = {grid, "Gamma", std::move(G), std::move(dG), par, true, std::nullopt};
  kp.W = make_profile(grid, "W", std::move(W), -par);
  kp.W.singular_origin = n > 0;
  kp.V = make_profile(grid, "V", std::move(V), 1);

  const auto [ta, tb] = tail_window(*grid, opt.tail_a, opt.tail_b);
  kp.T0_tail = fit_power_law(*grid, kp.T0.f, ta, tb);
  kp.Gamma_tail = fit_power_law(*grid, kp.Gamma.f, ta, tb);
  kp.T0_origin_exponent = origin_fit(*grid, kp.T0.f, opt.origin_b).exponent;
  kp.Gamma_origin_exponent = origin_fit(*grid, kp.Gamma.f, opt.origin_b).exponent;
  kp.T0.tail = TailFit{ta, tb, kp.T0_tail.exponent, kp.T0_tail.coefficient, kp.T0_tail.residual};
  kp.Gamma.tail = TailFit{ta, tb, kp.Gamma_tail.exponent, kp.Gamma_tail.coefficient, kp.Gamma_tail.residual};

  if (!exponent_close(kp.T0_tail.exponent, -kp.gamma_n, 0.05, 0.005)) {
    std::ostringstream os;
    os << "T0 tail exponent " << kp.T0_tail.exponent << " vs " << -kp.gamma_n << " for n = " << n;
    throw Error(Errc::TailMismatch, os.str());
  }

  if (n <= 1) {
    GroundStateOptions go;
    go.r_start = opt.r_start;
    go.rtol = opt.rtol;
    const GroundState gs = compute_ground_state(t, grid, go);
    std::vector<double> ref(N);
    if (n == 0) {
      ref = lambda_Q(gs, t).f;
    } else {
      for (std::size_t j = 0; j < N; ++j) ref[j] = -gs.Q.df[j];
    }
    const std::size_t j1 = grid->lower_index(1.0);
    const double C = ref[j1] / kp.T0.f[j1];
    double dev = 0.0;
    for (std::size_t j = grid->lower_index(0.1); j < N && r[j] <= 100.0; ++j)
      dev = std::max(dev, std::abs(ref[j] - C * kp.T0.f[j]) / std::abs(ref[j]));
    kp.cross_check_deviation = dev;
    kp.cross_check_constant = C;
  }
  return kp;
}

std::vector<double> apply_H(const KernelPair& pair, const std::vector<double>& f) {
  const RadialGrid& g = pair.grid();
  if (f.size() != g.size()) throw Error(Errc::GridMismatch, "operand does not match kernel grid");
  auto out = radial_laplacian(g, f, pair.d, pair.n);
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = -out[j] + pair.V.f[j] * f[j];
  return out;
}

RadialProfile apply_operator(const KernelPair& pair, const RadialProfile& f, Operator which) {
  require_same_grid(pair.T0, f);
  const RadialGrid& g = pair.grid();
  const auto& r = g.r();
  const std::size_t N = g.size();
  RadialProfile out;
  out.grid = f.grid;
  std::vector<double> v(N, 0.0);
  switch (which) {
    case Operator::H:
      out.name = "H " + f.name;
      out.parity = f.parity;
      v = apply_H(pair, f.f);
      break;
    case Operator::A:
      out.name = "A " + f.name;
      out.parity = -f.parity;
      for (std::size_t j = 1; j < N; ++j) v[j] = -f.df[j] + pair.W.f[j] * f.f[j];
      fill_origin(g, v, out.parity);
      break;
    case Operator::Astar:
      out.name = "A* " + f.name;
      out.parity = -f.parity;
      for (std::size_t j = 1; j < N; ++j) v[j] = f.df[j] + ((pair.d - 1.0) / r[j] + pair.W.f[j]) * f.f[j];
      fill_origin(g, v, out.parity);
      break;
  }
  out.f = std::move(v);
  differentiate(out);
  return out;
}

RadialProfile invert_H(const KernelPair& pair, const RadialProfile& f, InversionRecord* record,
                       const InversionOptions& opt) {
  require_same_grid(pair.T0, f);
  const RadialGrid& g = pair.grid();
  const auto& r = g.r();
  const std::size_t N = g.size();
  const int n = pair.n, d = pair.d;
  InversionRecord rec;

  const PowerFit of = origin_fit(g, f.f, opt.origin_b);
  rec.origin_exponent = of.count >= 4 ? of.exponent : std::numeric_limits<double>::infinity();
  if (of.count >= 4 && of.exponent < n - opt.origin_tol) {
    std::ostringstream os;
    os << "source behaves like r^" << of.exponent << " at the origin, degree " << n << " needs r^" << n;
    throw Error(Errc::OriginDecayViolated, os.str());
  }

  const auto& T0 = pair.T0.f;
  std::vector<double> prod(N);
  std::vector<double> absprod(N);
  for (std::size_t j = 0; j < N; ++j) {
    prod[j] = f.f[j] * T0[j];
    absprod[j] = std::abs(prod[j]);
  }
  const auto& Qd = g.quadrature(d - 1);
  const auto I = Qd.cumulative(prod);
  const double Iabs = Qd.total(absprod);

  std::vector<double> u1(N, 0.0), gg(N, 0.0);
  for (std::size_t j = 1; j < N; ++j) {
    u1[j] = I[j] / (std::pow(r[j], d - 1) * T0[j]);
    gg[j] = u1[j] / T0[j];
  }

  const auto [ta, tb] = tail_window(g, opt.tail_a, opt.tail_b);
  double tailI = 0.0;
  for (std::size_t j = g.lower_index(ta); j < N && r[j] <= tb * (1 + 1e-12); ++j)
    tailI = std::max(tailI, std::abs(I[j]));
  rec.zero_tail = !(tailI > 1e-10 * Iabs);

  const auto& Q0 = g.quadrature(0);
  std::vector<double> u(N);
  if (rec.zero_tail) {
    rec.integrable_branch = true;
    rec.tail_exponent = -std::numeric_limits<double>::infinity();
    const auto J = Q0.reverse_cumulative(gg);
    for (std::size_t j = 0; j < N; ++j) u[j] = T0[j] * J[j];
  } else {
    const PowerFit tf = fit_power_law(g, gg, ta, tb);
    rec.tail_exponent = tf.exponent;
    if (tf.exponent < -1.0 - opt.dead_zone) {
      rec.integrable_branch = true;
      const auto J = Q0.reverse_cumulative(gg);
      const double extra = gg[N - 1] * r[N - 1] / (-tf.exponent - 1.0);
      for (std::size_t j = 0; j < N; ++j) u[j] = T0[j] * (J[j] + extra);
    } else if (tf.exponent > -1.0 + opt.dead_zone) {
      rec.integrable_branch = false;
      const auto Jc = Q0.cumulative(gg);
      for (std::size_t j = 0; j < N; ++j) u[j] = -T0[j] * Jc[j];
    } else {
      std::ostringstream os;
      os << "u1/T0 decays like r^" << tf.exponent << ", too close to r^-1 to pick a branch";
      throw Error(Errc::BranchAmbiguous, os.str());
    }
  }

  const int par = n % 2 == 0 ? 1 : -1;
  std::vector<double> du(N, 0.0);
  for (std::size_t j = 1; j < N; ++j) du[j] = pair.W.f[j] * u[j] - u1[j];
  if (n > 0) u[0] = 0.0;
  fill_origin(g, du, -par);

  if (record) *record = rec;
  RadialProfile out;
  out.grid = f.grid;
  out.name = "H^-1 " + f.name;
  out.f = std::move(u);
  out.df = std::move(du);
  out.parity = par;
  return out;
}

double relative_residual(const RadialGrid& g, const std::vector<double>& res, const std::vector<double>& scale,
                         int d, double a, double b) {
  const double den = weighted_norm(g, scale, d, a, b);
  if (!(den > 0)) return std::numeric_limits<double>::infinity();
  return weighted_norm(g, res, d, a, b) / den;
}

ProfileLadder build_ladder(const KernelPair& pair, const ConstantsTable& t, const LadderOptions& opt) {
  const RadialGrid& g = pair.grid();
  const int n = pair.n;
  int depth = opt.depth;
  if (depth < 0) depth = n <= t.n_max ? t.row(n).L : 0;
  const double m = t.scaling_exponent();
  const double gn = pair.gamma_n;

  ProfileLadder L;
  L.n = n;
  L.gamma_n = gn;
  L.T.push_back(pair.T0);
  for (int i = 0; i < depth; ++i) {
    InversionRecord rec;
    RadialProfile next = invert_H(pair, L.T.back(), &rec, opt.inversion);
    for (auto& v : next.f) v = -v;
    for (auto& v : next.df) v = -v;
    next.name = "T" + std::to_string(i + 1);
    L.branches.push_back(rec);
    L.T.push_back(std::move(next));
  }

  const auto [ta, tb] = tail_window(g, opt.inversion.tail_a, opt.inversion.tail_b);
  const double res_b = g.r_max() / 10.0;
  for (int i = 0; i <= depth; ++i) {
    const auto& Ti = L.T[i];
    RadialProfile th;
    th.grid = Ti.grid;
    th.name = "Theta" + std::to_string(i);
    th.parity = Ti.parity;
    th.f.resize(g.size());
    for (std::size_t j = 0; j < g.size(); ++j)
      th.f[j] = m * Ti.f[j] + g[j] * Ti.df[j] - (2.0 * i + m - gn) * Ti.f[j];
    differentiate(th);
    L.Theta.push_back(std::move(th));

    const PowerFit tf = fit_power_law(g, Ti.f, ta, tb);
    L.T_fit.push_back(tf);
    const bool tok = exponent_close(tf.exponent, -gn + 2.0 * i, opt.tail_rel_tol, std::max(opt.tail_abs_floor, 0.005));
    L.T_tail_ok.push_back(tok);

    const PowerFit thf = fit_power_law(g, L.Theta.back().f, opt.theta_fit_a, clip_b(g, opt.theta_fit_b));
    L.Theta_fit.push_back(thf);
    const double bound = -gn + 2.0 * i - t.g_prime;
    const bool thok = thf.exponent <= bound + std::max(0.02 * std::abs(bound), 0.05);
    L.Theta_tail_ok.push_back(thok);
    L.invariants_ok = L.invariants_ok && tok && thok;

    if (i > 0) {
      auto HT = apply_H(pair, Ti.f);
      for (std::size_t j = 0; j < HT.size(); ++j) HT[j] += L.T[i - 1].f[j];
      L.ladder_residual.push_back(relative_residual(g, HT, L.T[i - 1].f, pair.d, g.h_min(), res_b));
    }
  }
  return L;
}

ProfileLadder scaled_ladder(const ProfileLadder& ladder, double factor) {
  ProfileLadder out = ladder;
  auto scale = [factor](RadialProfile& p) {
    for (auto& v : p.f) v *= factor;
    for (auto& v : p.df) v *= factor;
    if (p.tail) p.tail->coefficient *= factor;
  };
  for (auto& p : out.T) scale(p);
  for (auto& p : out.Theta) scale(p);
  for (auto& f : out.T_fit) f.coefficient *= factor;
  for (auto& f : out.Theta_fit) f.coefficient *= factor;
  return out;
}

OrthoBasis build_phi_basis(const KernelPair& pair, const ProfileLadder& ladder, double M) {
  if (!(M > 0)) throw Error(Errc::InvalidInput, "cut-off radius must be positive");
  const RadialGrid& g = pair.grid();
  if (g.r_max() < 2.0 * M) throw Error(Errc::WindowTooShort, "grid does not contain the cut-off support");
  const int L = static_cast<int>(ladder.T.size()) - 1;
  const int d = pair.d;
  const std::size_t N = g.size();
  const auto& T0 = pair.T0;

  OrthoBasis B;
  B.n = pair.n;
  B.M = M;
  std::vector<double> P(N, 0.0);
  for (std::size_t j = 0; j < N; ++j) P[j] = chi_scaled(g[j], M) * T0.f[j];
  B.powers.push_back(std::move(P));
  // (-H)(T0 f) = T0 K f with K f = f'' + B f', B = 2W + (d-1)/r, since H T0 = 0.
  // The first two powers are evaluated from exact derivatives of chi.
  const double cn = pair.n * (d + pair.n - 2.0);
  std::vector<double> P1(N, 0.0), P2(N, 0.0);
  for (std::size_t j = 1; j < N; ++j) {
    const double r = g[j];
    if (r <= M || r >= 2.0 * M) continue;
    const auto c = chi_derivatives_scaled(r, M, 4);
    const double W = pair.W.f[j];
    const double W1 = pair.V.f[j] + cn / (r * r) - W * W - (d - 1.0) * W / r;
    const double W2 = pair.V.df[j] - 2.0 * cn / (r * r * r) - 2.0 * W * W1 - (d - 1.0) * (W1 / r - W / (r * r));
    const double Bv = 2.0 * W + (d - 1.0) / r;
    const double B1 = 2.0 * W1 - (d - 1.0) / (r * r);
    const double B2 = 2.0 * W2 + 2.0 * (d - 1.0) / (r * r * r);
    const double f1 = c[2] + Bv * c[1];
    const double f1p = c[3] + B1 * c[1] + Bv * c[2];
    const double f1pp = c[4] + B2 * c[1] + 2.0 * B1 * c[2] + Bv * c[3];
    P1[j] = T0.f[j] * f1;
    P2[j] = T0.f[j] * (f1pp + Bv * f1p);
  }
  if (L >= 1) B.powers.push_back(std::move(P1));
  if (L >= 2) B.powers.push_back(std::move(P2));
  for (int k = 3; k <= L; ++k) {
    auto next = apply_H(pair, B.powers.back());
    for (std::size_t j = 0; j < N; ++j) next[j] = (g[j] < M || g[j] > 2.0 * M) ? 0.0 : -next[j];
    B.powers.push_back(std::move(next));
  }

  // Powers are split between both factors, <P_k, T_i> = <P_{k-q}, (-H)^q T_i> with q = k/2,
  // which keeps rounding noise of repeated differencing well below the pairing size.
  std::vector<std::vector<std::vector<double>>> HT(L + 1);
  for (int i = 0; i <= L; ++i) {
    HT[i].push_back(ladder.T[i].f);
    for (int q = 1; q <= L / 2; ++q) {
      auto next = apply_H(pair, HT[i].back());
      for (auto& v : next) v = -v;
      HT[i].push_back(std::move(next));
    }
  }
  B.pairings.assign(L + 1, std::vector<double>(L + 1, 0.0));
  for (int k = 0; k <= L; ++k)
    for (int i = 0; i <= L; ++i) {
      const int q = k / 2;
      B.pairings[k][i] = weighted_inner(g, B.powers[k - q], HT[i][q], d);
    }

  B.chiT0_T0 = B.pairings[0][0];
  if (!(std::abs(B.chiT0_T0) > 0)) throw Error(Errc::SingularGram, "<chi_M T0, T0> vanishes");
  B.c.assign(L + 1, 0.0);
  B.c[0] = 1.0;
  for (int i = 1; i <= L; ++i) {
    double s = 0.0;
    for (int k = 0; k < i; ++k) s += B.c[k] * B.pairings[k][i];
    B.c[i] = -s / B.chiT0_T0;
  }
  std::vector<double> phi(N, 0.0);
  for (int k = 0; k <= L; ++k)
    for (std::size_t j = 0; j < N; ++j) phi[j] += B.c[k] * B.powers[k][j];
  B.Phi = make_profile(pair.T0.grid, "Phi_M", std::move(phi), pair.parity());
  return B;
}

GramReport orthogonality_matrix(const OrthoBasis& B, const ProfileLadder& ladder, const KernelPair& pair) {
  const int L = static_cast<int>(B.c.size()) - 1;
  if (static_cast<int>(ladder.T.size()) < L + 1 || pair.n != B.n)
    throw Error(Errc::InvalidInput, "ladder and basis do not match");
  GramReport rep;
  rep.G.resize(L + 1, L + 1);
  for (int j = 0; j <= L; ++j)
    for (int i = 0; i <= L; ++i) {
      const int s = std::min(i, j);
      double v = 0.0;
      for (int k = 0; k + j - s <= L; ++k) v += B.c[k] * B.pairings[k + j - s][i - s];
      rep.G(j, i) = v;
    }
  rep.diagonal_vs_pairing = std::abs(rep.G(0, 0) - B.chiT0_T0) / std::abs(B.chiT0_T0);
  const double G00 = rep.G(0, 0);
  for (int i = 0; i <= L; ++i) {
    rep.diagonal_spread = std::max(rep.diagonal_spread, std::abs(rep.G(i, i) - G00) / std::abs(G00));
    for (int j = 0; j <= L; ++j) {
      if (i == j) continue;
      const double raw = std::abs(rep.G(j, i)) / std::abs(G00);
      rep.offdiag_raw = std::max(rep.offdiag_raw, raw);
      rep.offdiag_scaled = std::max(rep.offdiag_scaled, raw / std::pow(B.M, 2.0 * (i - j)));
      if (j > i) rep.lower_raw = std::max(rep.lower_raw, raw);
    }
  }
  return rep;
}

}  // namespace blowup
