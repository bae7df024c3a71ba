#include "blowup/ground_state.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "blowup/error.hpp"
#include "blowup/fit.hpp"
#include "emden_fowler.hpp"

namespace blowup {

GroundState compute_ground_state(const ConstantsTable& t, std::shared_ptr<const RadialGrid> grid,
                                 const GroundStateOptions& opt) {
  const int d = t.d(), p = t.p();
  if (!(p > t.p_jl)) throw Error(Errc::SubcriticalP, "ground state requested below p_JL");
  const double m = t.scaling_exponent();
  const double c = t.c_inf;
  const double cp = std::pow(c, p);
  const double k = d - 2.0 - 2.0 * m;

  const auto series = detail::origin_series(d, p, opt.series_terms);
  const auto& r = grid->r();
  const std::size_t n = r.size();

  GroundState gs;
  std::vector<double> Q(n), dQ(n);
  gs.w.assign(n, 0.0);
  gs.w_t.assign(n, 0.0);
  gs.w_tt.assign(n, 0.0);

  std::vector<double> times{std::log(opt.r_start)};
  std::vector<std::size_t> where;
  for (std::size_t j = 0; j < n; ++j) {
    if (r[j] <= opt.r_start) {
      double dq;
      Q[j] = detail::eval_even(series.q, r[j], &dq);
      dQ[j] = r[j] > 0 ? dq : 0.0;
      const double rm = std::pow(r[j], m);
      gs.w[j] = rm * Q[j] - c;
      gs.w_t[j] = rm * (m * Q[j] + r[j] * dQ[j]);
      gs.w_tt[j] = m * gs.w_t[j] + rm * (m * r[j] * dQ[j] + r[j] * dQ[j] + r[j] * r[j] * (-(d - 1.0) * (r[j] > 0 ? dQ[j] / r[j] : -1.0 / d) - std::pow(Q[j], p)));
    } else {
      times.push_back(std::log(r[j]));
      where.push_back(j);
    }
  }

  double dq0;
  const double rs = opt.r_start;
  const double q0 = detail::eval_even(series.q, rs, &dq0);
  const double rm = std::pow(rs, m);
  std::array<double, 2> y{rm * q0 - c, rm * (m * q0 + rs * dq0)};

  auto sys = [&](const std::array<double, 2>& x, std::array<double, 2>& dx, double) {
    dx[0] = x[1];
    dx[1] = -k * x[1] - cp * detail::reaction_shift(x[0] / c, p);
  };
  std::size_t seen = 0;
  auto obs = [&](const std::array<double, 2>& x, double tt) {
    if (seen == 0) {
      ++seen;
      return;
    }
    const std::size_t j = where[seen - 1];
    const double rr = std::exp(tt);
    const double v = c + x[0];
    if (!(v > 0)) {
      std::ostringstream os;
      os << "Q vanishes near r = " << rr;
      throw Error(Errc::NegativeQ, os.str());
    }
    const double rmi = std::pow(r[j], -m);
    Q[j] = rmi * v;
    dQ[j] = rmi / r[j] * (x[1] - m * v);
    gs.w[j] = x[0];
    gs.w_t[j] = x[1];
    gs.w_tt[j] = -k * x[1] - cp * detail::reaction_shift(x[0] / c, p);
    ++seen;
  };
  detail::integrate_times<2>(sys, y, times, obs, opt.rtol, opt.atol);

  gs.Q.grid = grid;
  gs.Q.name = "Q";
  gs.Q.f = std::move(Q);
  gs.Q.df = std::move(dQ);
  gs.Q.parity = 1;
  return gs;
}

TailFit fit_tail(const GroundState& gs, const ConstantsTable& t, const TailWindows& win) {
  const RadialGrid& g = *gs.Q.grid;
  const double m = t.scaling_exponent();
  if (g.r_max() < win.sub_b * (1 - 1e-9) || g.r_max() < win.lead_b * (1 - 1e-9))
    throw Error(Errc::WindowTooShort, "profile does not reach the tail-fit window");
  TailFit tf;
  tf.r_a = win.lead_a;
  tf.r_b = win.lead_b;
  const PowerFit lead = fit_power_law(g, gs.Q.f, win.lead_a, win.lead_b);
  tf.exponent = lead.exponent;
  tf.coefficient = lead.coefficient;
  tf.residual = lead.residual;

  // Q - c_inf r^{-m} = r^{-m} w
  std::vector<double> dev(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) dev[j] = g[j] > 0 ? std::pow(g[j], -m) * gs.w[j] : 0.0;
  const std::size_t jb = std::min(g.size() - 1, g.lower_index(win.sub_b * (1 - 1e-9)));
  if (!(std::abs(dev[jb]) > 1e3 * std::numeric_limits<double>::min()))
    throw Error(Errc::DegenerateFit, "subleading tail below the representable floor");
  const PowerFit sub = fit_power_law(g, dev, win.sub_a, win.sub_b);
  if (sub.residual > 0.1) throw Error(Errc::DegenerateFit, "subleading tail fit is noise dominated");
  tf.has_sub = true;
  tf.sub_exponent = sub.exponent;
  tf.sub_coefficient = sub.coefficient;
  tf.sub_residual = sub.residual;
  return tf;
}

RadialProfile potential(const GroundState& gs, const ConstantsTable& t) {
  std::vector<double> V(gs.Q.size());
  for (std::size_t j = 0; j < V.size(); ++j) V[j] = -t.p() * std::pow(gs.Q.f[j], t.p() - 1);
  return make_profile(gs.Q.grid, "V", std::move(V), 1);
}

BoundReport verify_bounds(const GroundState& gs, const ConstantsTable& t, double fit_a, double fit_b) {
  const RadialGrid& g = *gs.Q.grid;
  const double m = t.scaling_exponent();
  const int d = t.d(), p = t.p();
  BoundReport br;
  br.delta_hat = std::numeric_limits<double>::infinity();
  std::vector<double> shifted(g.size(), 0.0);
  for (std::size_t j = 1; j < g.size(); ++j) {
    const double r = g[j];
    const double Q = gs.Q.f[j];
    // Q < c r^{-m}  <=>  w < 0
    if (!(Q > 0) || !(gs.w[j] < 0)) {
      br.ok = false;
      br.first_offending = j;
      std::ostringstream os;
      os << "0 < Q < c_inf r^{-2/(p-1)} fails at r = " << r;
      throw Error(Errc::BoundViolated, os.str());
    }
    const double x = gs.w[j] / t.c_inf;
    const double r2V = -p * detail::vpow(t.c_inf_pm1, x, p);
    if (!(r2V < 0)) br.V_negative = false;
    const double val = r2V + (d - 2.0) * (d - 2.0) / 4.0;
    if (val < br.delta_hat) {
      br.delta_hat = val;
      br.delta_hat_r = r;
    }
    // r^2 V + p c^{p-1} = -p c^{p-1} ((1+x)^{p-1} - 1)
    shifted[j] = -p * t.c_inf_pm1 * std::expm1((p - 1) * std::log1p(x));
  }
  (void)m;
  const PowerFit pf = fit_power_law(g, shifted, fit_a, fit_b);
  br.potential_decay_exponent = pf.exponent;
  br.potential_decay_residual = pf.residual;
  return br;
}

RadialProfile lambda_op(const RadialProfile& u, double m) {
  RadialProfile out;
  out.grid = u.grid;
  out.name = "Lambda " + u.name;
  out.parity = u.parity;
  out.f.resize(u.size());
  const auto& r = u.r();
  for (std::size_t j = 0; j < u.size(); ++j) out.f[j] = m * u.f[j] + r[j] * u.df[j];
  differentiate(out);
  return out;
}

RadialProfile lambda_Q(const GroundState& gs, const ConstantsTable& t) {
  const double m = t.scaling_exponent();
  const auto& r = gs.Q.r();
  RadialProfile out;
  out.grid = gs.Q.grid;
  out.name = "Lambda Q";
  out.parity = 1;
  out.f.resize(r.size());
  out.df.resize(r.size());
  out.f[0] = m;
  out.df[0] = 0.0;
  for (std::size_t j = 1; j < r.size(); ++j) {
    const double rmi = std::pow(r[j], -m);
    out.f[j] = rmi * gs.w_t[j];
    out.df[j] = rmi / r[j] * (gs.w_tt[j] - m * gs.w_t[j]);
  }
  return out;
}

std::vector<double> nonlinear_operator(const RadialGrid& g, const std::vector<double>& u, int d, int p) {
  auto out = radial_laplacian(g, u, d, 0);
  for (std::size_t j = 0; j < u.size(); ++j) out[j] += std::pow(std::abs(u[j]), p - 1) * u[j];
  return out;
}

}  // namespace blowup
