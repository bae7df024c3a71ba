#include "blowup/param_flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <Eigen/Eigenvalues>

#include "blowup/error.hpp"

namespace blowup {
namespace odeint = boost::numeric::odeint;
namespace {

void check_ell(double alpha, int ell, int L) {
  if (ell < 1 || !(2.0 * ell > alpha) || ell > L) {
    std::ostringstream os;
    os << "ell = " << ell << " needs 2 ell > alpha = " << alpha << " and ell <= L = " << L;
    throw Error(Errc::BadEll, os.str());
  }
}

int floor_tol(double x) {
  const double r = std::round(x);
  return std::abs(x - r) < 1e-9 ? static_cast<int>(r) : static_cast<int>(std::floor(x));
}

// A_ell acting on (U_1, .., U_L) in the radial sector.
Eigen::MatrixXd a_ell_matrix(double alpha, int ell, int L) {
  const auto c = special_coefficients(alpha, ell);
  const double den = 2.0 * ell - alpha;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(L, L);
  for (int i = 1; i <= L; ++i) {
    A(i - 1, i - 1) = alpha * (ell - i) / den;
    if (i <= ell) A(i - 1, 0) += -(2.0 * i - alpha) * c[i - 1];
    if (i < L) A(i - 1, i) = 1.0;
  }
  return A;
}

Eigen::MatrixXd sorted_eigenvectors(const Eigen::MatrixXd& M, std::vector<double>& values) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) throw Error(Errc::EigenSolverFailure, "eigen decomposition failed");
  const auto ev = es.eigenvalues();
  const auto V = es.eigenvectors();
  const int n = static_cast<int>(M.rows());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) {
    order[i] = i;
    if (std::abs(ev[i].imag()) > 1e-9 * (1.0 + std::abs(ev[i].real())))
      throw Error(Errc::EigenSolverFailure, "complex eigenvalue in a block with real spectrum");
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return ev[a].real() < ev[b].real(); });
  Eigen::MatrixXd E(n, n);
  values.clear();
  for (int k = 0; k < n; ++k) {
    values.push_back(ev[order[k]].real());
    Eigen::VectorXd col = V.col(order[k]).real();
    col.normalize();
    Eigen::Index imax;
    col.cwiseAbs().maxCoeff(&imax);
    const double lead = std::abs(col(0)) > 1e-12 ? col(0) : col(imax);
    if (lead < 0) col = -col;
    E.col(k) = col;
  }
  return E;
}

std::vector<double> faddeev_leverrier(const Eigen::MatrixXd& A) {
  // monic det(X I - A) = sum_k a_k X^k
  const int n = static_cast<int>(A.rows());
  std::vector<double> a(n + 1, 0.0);
  a[n] = 1.0;
  Eigen::MatrixXd Mk = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    Mk = A * Mk + a[n - k + 1] * I;
    a[n - k] = -(A * Mk).trace() / k;
  }
  return a;
}

std::vector<double> poly_mul_linear(const std::vector<double>& p, double c0, double c1) {
  // p(X) (c0 + c1 X)
  std::vector<double> out(p.size() + 1, 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k] += c0 * p[k];
    out[k + 1] += c1 * p[k];
  }
  return out;
}

using State = std::vector<double>;

}  // namespace

std::vector<double> special_coefficients(double alpha, int ell) {
  const double den = 2.0 * ell - alpha;
  std::vector<double> c(ell);
  c[0] = ell / den;
  for (int i = 1; i < ell; ++i) c[i] = -alpha * (ell - i) / den * c[i - 1];
  return c;
}

ParamFamily special_solution(const ConstantsTable& table, int ell, double s) {
  const int L = table.input.L;
  check_ell(table.alpha, ell, L);
  if (!(s > 0)) throw Error(Errc::InvalidInput, "renormalized time must be positive");
  const auto c = special_coefficients(table.alpha, ell);
  std::vector<double> b(L, 0.0);
  for (int i = 1; i <= ell; ++i) b[i - 1] = c[i - 1] / std::pow(s, i);
  return ParamFamily(std::move(b));
}

namespace {

FlowDerivative rhs_unchecked(const FlowState& st, const ConstantsTable& table) {
  FlowDerivative out;
  const double b1 = st.b.b1();
  out.lambda_s = -b1 * st.lambda;
  const int L = st.b.depth();
  out.b_s.resize(L);
  for (int i = 1; i <= L; ++i) out.b_s[i - 1] = -(2.0 * i - table.alpha) * b1 * st.b(i) + st.b(i + 1);
  if (!st.b.translation.empty()) {
    const double a1 = table.row(1).alpha;
    out.z_s.assign(st.b.translation.size(), 0.0);
    for (std::size_t k = 0; k < st.b.translation.size(); ++k) {
      const auto& blk = st.b.translation[k];
      std::vector<double> ds(blk.size());
      for (std::size_t i = 0; i < blk.size(); ++i) {
        const double next = i + 1 < blk.size() ? blk[i + 1] : 0.0;
        ds[i] = -(2.0 * (i + 1) - a1) * b1 * blk[i] + next;
      }
      out.trans_s.push_back(std::move(ds));
      if (!blk.empty()) out.z_s[k] = -st.lambda * blk[0];
    }
  } else if (!st.z.empty()) {
    out.z_s.assign(st.z.size(), 0.0);
  }
  return out;
}

}  // namespace

FlowDerivative flow_rhs(const FlowState& st, const ConstantsTable& table) {
  if (!(st.lambda > 0)) throw Error(Errc::InvalidInput, "scale must be positive");
  return rhs_unchecked(st, table);
}

double special_blowup_time(double alpha, int ell, double s0, double lambda0) {
  return lambda0 * lambda0 * (2.0 * ell - alpha) * s0 / alpha;
}

double special_lambda(double alpha, int ell, double s0, double lambda0, double t) {
  const double T = special_blowup_time(alpha, ell, s0, lambda0);
  return lambda0 * std::pow(1.0 - t / T, ell / alpha);
}

std::vector<double> renormalize(const ParamFamily& b, const std::vector<double>& bbar, double s) {
  std::vector<double> U(b.depth());
  for (int i = 1; i <= b.depth(); ++i) {
    const double ref = i <= static_cast<int>(bbar.size()) ? bbar[i - 1] : 0.0;
    U[i - 1] = (b(i) - ref) * std::pow(s, i);
  }
  return U;
}

Eigen::MatrixXd change_of_basis(const LinearizationReport& lin) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(lin.L, lin.L);
  P.topLeftCorner(lin.ell, lin.ell) = lin.eigvec_top.inverse();
  return P;
}

Trajectory integrate_flow(const FlowState& init, double s_end, const ConstantsTable& table,
                          const FlowOptions& opt) {
  if (!(init.s > 0)) throw Error(Errc::InvalidInput, "initial renormalized time must be positive");
  if (!(s_end > init.s)) throw Error(Errc::InvalidInput, "s_end must exceed the initial time");
  if (!(init.lambda > 0)) throw Error(Errc::InvalidInput, "scale must be positive");
  const int ell = opt.ell > 0 ? opt.ell : table.input.ell;
  const int L = init.b.depth();
  const std::size_t nz = std::max(init.z.size(), init.b.translation.size());
  const std::size_t nt = init.b.translation.empty() ? 0 : init.b.translation[0].size();

  // layout: lambda, t, z[nz], b[L], translation[nz][nt]
  auto pack = [&](const FlowState& st) {
    State x;
    x.push_back(st.lambda);
    x.push_back(st.t);
    for (std::size_t k = 0; k < nz; ++k) x.push_back(k < st.z.size() ? st.z[k] : 0.0);
    for (double v : st.b.radial) x.push_back(v);
    for (const auto& blk : st.b.translation) x.insert(x.end(), blk.begin(), blk.end());
    return x;
  };
  auto unpack = [&](const State& x, double s) {
    FlowState st;
    st.s = s;
    st.lambda = x[0];
    st.t = x[1];
    std::size_t o = 2;
    st.z.assign(x.begin() + o, x.begin() + o + nz);
    o += nz;
    st.b.radial.assign(x.begin() + o, x.begin() + o + L);
    o += L;
    for (std::size_t k = 0; k < init.b.translation.size(); ++k, o += nt)
      st.b.translation.emplace_back(x.begin() + o, x.begin() + o + nt);
    return st;
  };

  auto rhs = [&](const State& x, State& dx, double s) {
    const FlowState st = unpack(x, s);
    const FlowDerivative fd = rhs_unchecked(st, table);
    dx.assign(x.size(), 0.0);
    dx[0] = fd.lambda_s;
    dx[1] = st.lambda * st.lambda;
    for (std::size_t k = 0; k < fd.z_s.size(); ++k) dx[2 + k] = fd.z_s[k];
    std::size_t o = 2 + nz;
    for (int i = 0; i < L; ++i) dx[o + i] = fd.b_s[i];
    o += L;
    for (const auto& blk : fd.trans_s)
      for (double v : blk) dx[o++] = v;
  };

  LinearizationReport lin;
  Eigen::MatrixXd Pinv;
  const bool with_ref = ell >= 1 && 2.0 * ell > table.alpha && ell <= L;
  std::vector<double> c;
  if (with_ref) {
    lin = linearize(table, ell, L);
    Pinv = lin.eigvec_top.inverse();
    c = special_coefficients(table.alpha, ell);
  }

  std::vector<double> times;
  const int n = std::max(opt.samples, 2);
  for (int k = 0; k < n; ++k) times.push_back(init.s * std::pow(s_end / init.s, double(k) / (n - 1)));
  times.back() = s_end;

  Trajectory tr;
  tr.ell = with_ref ? ell : 0;
  auto observer = [&](const State& x, double s) {
    const FlowState st = unpack(x, s);
    for (double v : x)
      if (!std::isfinite(v)) throw Error(Errc::BlowupOfParameters, "non-finite parameter");
    for (double v : st.b.radial)
      if (std::abs(v) > opt.overflow_guard) throw Error(Errc::BlowupOfParameters, "parameter overflow guard hit");
    TrajectorySample smp;
    smp.s = s;
    smp.t = st.t;
    smp.lambda = st.lambda;
    smp.z = st.z;
    smp.b = st.b.radial;
    if (with_ref) {
      std::vector<double> bbar(L, 0.0);
      for (int i = 1; i <= ell; ++i) bbar[i - 1] = c[i - 1] / std::pow(s, i);
      smp.U = renormalize(st.b, bbar, s);
      Eigen::Map<const Eigen::VectorXd> top(smp.U.data(), ell);
      const Eigen::VectorXd v = Pinv * top;
      smp.V.assign(v.data(), v.data() + ell);
    }
    tr.samples.push_back(std::move(smp));
  };

  State x = pack(init);
  auto stepper = odeint::make_dense_output(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), (s_end - init.s) * 1e-4, observer);
  return tr;
}

LinearizationReport linearize(const ConstantsTable& table_in, int ell, int L) {
  ModelInput in = table_in.input;
  in.L = L;
  in.ell = ell;
  const ConstantsTable table = derive_constants_unchecked(in);
  const double alpha = table.alpha;
  check_ell(alpha, ell, L);
  const double den = 2.0 * ell - alpha;

  LinearizationReport R;
  R.ell = ell;
  R.L = L;
  R.alpha = alpha;
  R.A_ell = a_ell_matrix(alpha, ell, L);
  R.top_block = R.A_ell.topLeftCorner(ell, ell);

  // A_ell is block upper triangular; the lower block is triangular and its spectrum can collide with
  // the top block (eigenvalue -1 for ell = 3), so the two blocks are solved separately.
  std::vector<double> top_vals;
  R.eigvec_top = sorted_eigenvectors(R.top_block, top_vals);
  R.numeric = top_vals;
  if (L > ell) {
    const Eigen::MatrixXd low = R.A_ell.bottomRightCorner(L - ell, L - ell);
    Eigen::EigenSolver<Eigen::MatrixXd> es(low, false);
    if (es.info() != Eigen::Success) throw Error(Errc::EigenSolverFailure, "eigen decomposition failed");
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) R.numeric.push_back(es.eigenvalues()[k].real());
  }
  std::sort(R.numeric.begin(), R.numeric.end());

  R.closed_form.push_back(-1.0);
  for (int i = 2; i <= ell; ++i) R.closed_form.push_back(i * alpha / den);
  for (int i = 1; i <= L - ell; ++i) R.closed_form.push_back(-alpha * i / den);
  std::sort(R.closed_form.begin(), R.closed_form.end());
  for (std::size_t k = 0; k < R.numeric.size(); ++k)
    R.max_eigen_deviation = std::max(R.max_eigen_deviation, std::abs(R.numeric[k] - R.closed_form[k]));

  // det(A' - X I) = (-1)^ell det(X I - A')
  R.charpoly_numeric = faddeev_leverrier(R.top_block);
  if (ell % 2 == 1)
    for (auto& v : R.charpoly_numeric) v = -v;
  std::vector<double> cf{1.0, 1.0};  // X + 1
  for (int i = 2; i <= ell; ++i) cf = poly_mul_linear(cf, i * alpha / den, -1.0);
  R.charpoly_closed_form = cf;

  R.radial_nonnegative = static_cast<int>(std::count_if(R.numeric.begin(), R.numeric.end(),
                                                        [](double v) { return v >= -1e-12; }));

  for (int n = 1; n <= table.n_0; ++n) {
    const HarmonicRow& row = table.row(n);
    BlockReport B;
    B.n = n;
    B.i_n = row.i;
    const int first = n == 1 ? 1 : 0;
    const int size = row.L - first + 1;
    if (size <= 0) continue;
    B.A = Eigen::MatrixXd::Zero(size, size);
    for (int k = 0; k < size; ++k) {
      const int i = first + k;
      B.A(k, k) = alpha * (row.i - i) / den;
      if (k + 1 < size) B.A(k, k + 1) = 1.0;
      B.closed_form.push_back(alpha * (row.i - i) / den);
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(B.A, false);
    if (es.info() != Eigen::Success) throw Error(Errc::EigenSolverFailure, "eigen decomposition failed");
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) B.numeric.push_back(es.eigenvalues()[k].real());
    std::sort(B.numeric.begin(), B.numeric.end());
    std::sort(B.closed_form.begin(), B.closed_form.end());
    B.nonnegative = static_cast<int>(
        std::count_if(B.numeric.begin(), B.numeric.end(), [](double v) { return v >= -1e-12; }));
    const int E = floor_tol(row.i);
    B.nonnegative_rule = n == 1 ? std::max(E, 0) : std::max(E + 1, 0);
    B.nonnegative_rule = std::min(B.nonnegative_rule, size);
    if (B.nonnegative != B.nonnegative_rule) R.counts_ok = false;
    R.blocks.push_back(std::move(B));
  }
  if (R.radial_nonnegative != ell - 1) R.counts_ok = false;
  return R;
}

const char* exit_kind_name(ExitKind k) {
  switch (k) {
    case ExitKind::None: return "none";
    case ExitKind::Upper: return "upper";
    case ExitKind::Lower: return "lower";
  }
  return "?";
}

ShootTrace run_renormalized(const ConstantsTable& table, int ell, double s0, double s_horizon,
                            const std::vector<double>& v0, const ShootOptions& opt) {
  const int L = table.input.L;
  const LinearizationReport lin = linearize(table, ell, L);
  const Eigen::MatrixXd& A = lin.A_ell;
  const Eigen::MatrixXd& E = lin.eigvec_top;
  const Eigen::MatrixXd Einv = E.inverse();
  const double alpha = table.alpha;

  // U' = A U + N(U) in tau = log s, N_i = -(2i - alpha) U_1 U_i
  auto rhs = [&](const State& u, State& du, double) {
    Eigen::Map<const Eigen::VectorXd> U(u.data(), L);
    du.resize(L);
    Eigen::Map<Eigen::VectorXd> D(du.data(), L);
    D = A * U;
    if (opt.nonlinear)
      for (int i = 1; i <= L; ++i) D(i - 1) -= (2.0 * i - alpha) * U(0) * U(i - 1);
  };

  Eigen::VectorXd V0 = Eigen::VectorXd::Zero(ell);
  for (int i = 0; i < ell && i < static_cast<int>(v0.size()); ++i) V0(i) = v0[i];
  State u(L, 0.0);
  const Eigen::VectorXd U0 = E * V0;
  for (int i = 0; i < ell; ++i) u[i] = U0(i);
  for (int i = ell; i < L && i < static_cast<int>(v0.size()); ++i) u[i] = v0[i];

  ShootTrace tr;
  auto eps = [&](int i) {
    const int k = i - ell - 1;
    return k >= 0 && k < static_cast<int>(opt.eps_stable.size()) ? opt.eps_stable[k] : 1.0;
  };
  // returns true while inside the tube
  auto record = [&](const State& x, double tau) {
    const double s = std::exp(tau);
    const double bound = std::pow(s, -opt.eta_tilde);
    Eigen::Map<const Eigen::VectorXd> U(x.data(), L);
    const Eigen::VectorXd V = Einv * U.head(ell);
    tr.s.push_back(s);
    tr.V.emplace_back(V.data(), V.data() + ell);
    tr.U.emplace_back(x.begin(), x.end());
    for (int i = 0; i < ell; ++i) {
      if (!(std::abs(V(i)) <= bound)) {
        tr.exit = {V(i) > 0 ? ExitKind::Upper : ExitKind::Lower, i + 1, s,
                   "|V_" + std::to_string(i + 1) + "| <= s^-eta"};
        return false;
      }
    }
    for (int i = ell + 1; i <= L; ++i) {
      if (!(std::abs(U(i - 1)) <= eps(i) * bound)) {
        tr.exit = {U(i - 1) > 0 ? ExitKind::Upper : ExitKind::Lower, i, s,
                   "|U_" + std::to_string(i) + "| <= eps s^-eta"};
        return false;
      }
    }
    return true;
  };

  const double tau0 = std::log(s0), tau1 = std::log(s_horizon);
  auto stepper = odeint::make_dense_output(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(u, tau0, 1e-3);
  if (!record(u, tau0)) return tr;
  const double dtau_sample = (tau1 - tau0) / std::max(opt.samples, 1);
  double next = tau0 + dtau_sample;
  State tmp(L);
  while (stepper.current_time() < tau1) {
    if (stepper.current_time() + stepper.current_time_step() > tau1)
      stepper.initialize(stepper.current_state(), stepper.current_time(), tau1 - stepper.current_time());
    stepper.do_step(rhs);
    // check the tube at the step end and at sample points inside the step
    while (next < stepper.current_time()) {
      stepper.calc_state(next, tmp);
      if (!record(tmp, next)) return tr;
      next += dtau_sample;
    }
    if (!record(stepper.current_state(), stepper.current_time())) return tr;
  }
  return tr;
}

ShootResult shoot_trapped(const ConstantsTable& table, int ell, double s0, double s_horizon,
                          const ShootOptions& opt) {
  check_ell(table.alpha, ell, table.input.L);
  if (!(s0 > 0)) throw Error(Errc::InvalidInput, "s_0 must be positive");
  if (!(s_horizon >= 10.0 * s0)) throw Error(Errc::HorizonTooShort, "s_horizon must be at least 10 s_0");

  ShootResult res;
  res.ell = ell;
  const double box = std::pow(s0, -opt.eta_tilde);
  std::vector<double> v(table.input.L, 0.0);
  if (opt.stable_init.empty()) {
    v[0] = 0.1 * box;
  } else {
    v[0] = opt.stable_init[0];
    for (std::size_t k = 1; k < opt.stable_init.size() && ell + k - 1 < v.size(); ++k)
      v[ell + k - 1] = opt.stable_init[k];
  }
  int iterations = 0;

  // Sign of the exit in coordinate k: the coordinate's value when the trajectory leaves the tube.
  auto side = [&](const ShootTrace& tr, int k) {
    if (tr.exit.kind == ExitKind::None) return 0;
    const double val = tr.V.back()[k - 1];
    return val > 0 ? 1 : -1;
  };

  // Solves coordinates k, k-1, .., 2 for fixed outer values; returns the trace at the final midpoint.
  std::function<ShootTrace(int)> solve = [&](int k) -> ShootTrace {
    if (k < 2) return run_renormalized(table, ell, s0, s_horizon, v, opt);
    double lo = -box, hi = box;
    v[k - 1] = lo;
    const ShootTrace tlo = solve(k - 1);
    v[k - 1] = hi;
    const ShootTrace thi = solve(k - 1);
    const int slo = side(tlo, k), shi = side(thi, k);
    if (k == ell) {
      res.lo_exit = tlo.exit;
      res.hi_exit = thi.exit;
    }
    if (slo == 0 || shi == 0 || slo == shi) {
      std::ostringstream os;
      os << "bracket endpoints for V_" << k << " exit on sides " << slo << " and " << shi;
      throw Error(Errc::NoSignChange, os.str());
    }
    ShootTrace mid;
    double m = 0.5 * (lo + hi);
    for (int it = 0; it < opt.max_iterations; ++it) {
      m = 0.5 * (lo + hi);
      if (m <= lo || m >= hi) break;
      v[k - 1] = m;
      mid = solve(k - 1);
      ++iterations;
      const int sm = side(mid, k);
      if (sm == 0) {
        if (hi - lo < opt.width_tol) break;
        // trapped while the bracket is still wide: the root sits next to m
        const double q = 0.25 * (hi - lo);
        lo = m - q;
        hi = m + q;
      } else if (sm == slo) {
        lo = m;
      } else {
        hi = m;
      }
    }
    v[k - 1] = m;
    if (k == ell) {
      res.bracket_lo = v;
      res.bracket_lo[k - 1] = lo;
      res.bracket_hi = v;
      res.bracket_hi[k - 1] = hi;
      res.bracket_width = hi - lo;
    }
    return mid;
  };

  res.certificate = solve(ell);
  res.v0 = v;
  res.iterations = iterations;
  res.trapped = res.certificate.exit.kind == ExitKind::None;
  return res;
}

}  // namespace blowup
