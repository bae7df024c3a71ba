#include "commands.hpp"

#include <sys/file.h>
#include <fcntl.h>
#include <unistd.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "../acceptance.hpp"
#include "blowup/blowup_profile.hpp"
#include "blowup/error.hpp"
#include "blowup/ground_state.hpp"
#include "blowup/inequality.hpp"
#include "blowup/param_flow.hpp"
#include "blowup/profile_io.hpp"
#include "blowup/radial_pde.hpp"
#include "blowup/spectral.hpp"

namespace blowup::cli {
namespace fs = std::filesystem;

namespace {

// Exclusive flock on <cache>/.lock for the lifetime of the object; readers of finished files need none
// since cache files only ever appear through a rename.
class CacheLock {
 public:
  explicit CacheLock(const fs::path& dir) {
    fs::create_directories(dir);
    fd_ = ::open((dir / ".lock").c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0) throw Error(Errc::InvalidInput, "cannot open lock file in " + dir.string());
    ::flock(fd_, LOCK_EX);
  }
  ~CacheLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  CacheLock(const CacheLock&) = delete;
  CacheLock& operator=(const CacheLock&) = delete;

 private:
  int fd_ = -1;
};

struct Loaded {
  ConstantsTable table;
  std::shared_ptr<const RadialGrid> grid;
  CachedGroundState cached;
};

Loaded load_ground_state(const RunConfig& c) {
  Loaded l;
  l.table = derive_constants(c.model);
  l.grid = RadialGrid::make(c.grid);
  CacheLock lock(c.cache_dir);
  l.cached = cached_ground_state(l.table, l.grid, c.cache_dir);
  spdlog::info("ground state {} {}", l.cached.hit ? "loaded from" : "stored in", l.cached.path.string());
  return l;
}

ojson tail_json(const TailFit& t) {
  return {{"window", {t.r_a, t.r_b}},
          {"exponent", t.exponent},
          {"coefficient", t.coefficient},
          {"residual", t.residual},
          {"has_sub", t.has_sub},
          {"sub_exponent", t.sub_exponent},
          {"sub_coefficient", t.sub_coefficient},
          {"sub_residual", t.sub_residual}};
}

ojson power_json(const PowerFit& f) {
  return {{"exponent", f.exponent}, {"coefficient", f.coefficient}, {"residual", f.residual}, {"count", f.count}};
}

ojson matrix_json(const Eigen::MatrixXd& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ojson table_json(const ConstantsTable& t) {
  ojson j;
  j["d"] = t.d();
  j["p"] = t.p();
  j["ell"] = t.input.ell;
  j["L"] = t.input.L;
  j["eps_g"] = t.input.eps_g;
  j["eta"] = t.input.eta;
  j["M"] = t.input.M;
  j["p_jl"] = t.p_jl;
  j["s_c"] = t.s_c;
  j["c_inf"] = t.c_inf;
  j["c_inf_pm1"] = t.c_inf_pm1;
  j["gamma"] = t.gamma;
  j["Delta"] = t.Delta;
  j["alpha"] = t.alpha;
  j["kappa"] = t.kappa;
  j["s_L"] = t.s_L;
  j["n_0"] = t.n_0;
  j["n_max"] = t.n_max;
  j["g"] = t.g;
  j["g_prime"] = t.g_prime;
  j["delta0_prime"] = t.delta0_prime;
  ojson rows = ojson::array();
  for (const auto& r : t.rows)
    rows.push_back({{"n", r.n}, {"Delta", r.Delta}, {"gamma", r.gamma}, {"gamma_prime", r.gamma_prime},
                    {"alpha", r.alpha}, {"m", r.m}, {"delta", r.delta}, {"k", r.k}, {"L", r.L}, {"i", r.i}});
  j["rows"] = rows;
  return j;
}

ojson exit_json(const ExitEvent& e) {
  return {{"kind", exit_kind_name(e.kind)}, {"coordinate", e.coordinate}, {"s", e.s}, {"bound", e.bound}};
}

ojson classification_json(const Classification& c) {
  return {{"class", blowup_class_name(c.cls)},
          {"T_hat", c.T_hat},
          {"time_left", c.time_left},
          {"sup_exponent", c.sup_exponent},
          {"sup_residual", c.sup_residual},
          {"lambda_exponent", c.lambda_exponent},
          {"lambda_residual", c.lambda_residual},
          {"kappa_limit", c.kappa_limit},
          {"kappa_target", c.kappa_target},
          {"decades", c.decades},
          {"T_on_boundary", c.T_on_boundary},
          {"window_count", c.window_count}};
}

}  // namespace

void write_json(const fs::path& path, const ojson& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(Errc::InvalidInput, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string constants_text(const ConstantsTable& t) {
  std::string s;
  s += fmt::format("{:<14}{}\n{:<14}{}\n", "d", t.d(), "p", t.p());
  for (auto [name, v] : {std::pair{"p_JL", t.p_jl}, {"s_c", t.s_c}, {"c_inf", t.c_inf}, {"gamma", t.gamma},
                         {"Delta", t.Delta}, {"alpha", t.alpha}, {"kappa", t.kappa}, {"g", t.g},
                         {"g'", t.g_prime}, {"delta0'", t.delta0_prime}})
    s += fmt::format("{:<14}{:.12g}\n", name, v);
  s += fmt::format("{:<14}{}\n{:<14}{}\n{:<14}{}\n\n", "s_L", t.s_L, "n_0", t.n_0, "n_max", t.n_max);
  s += fmt::format("{:>3} {:>14} {:>14} {:>14} {:>4} {:>12} {:>10} {:>4} {:>8}\n", "n", "gamma_n", "Delta_n",
                   "alpha_n", "m_n", "delta_n", "k_n", "L_n", "i_n");
  for (const auto& r : t.rows)
    s += fmt::format("{:>3} {:>14.10f} {:>14.10f} {:>14.10f} {:>4} {:>12.8f} {:>10} {:>4} {:>8.4f}\n", r.n, r.gamma,
                     r.Delta, r.alpha, r.m, r.delta, r.k, r.L, r.i);
  return s;
}

Outcome run_constants(const RunConfig& c) {
  const ConstantsTable t = derive_constants(c.model);
  std::cout << constants_text(t);
  return {table_json(t), true, false};
}

Outcome run_ground_state(const RunConfig& c) {
  Loaded l = load_ground_state(c);
  const GroundState& gs = l.cached.gs;
  Outcome o;
  o.cache_hit = l.cached.hit;
  o.report["cache_file"] = l.cached.path.string();
  o.report["nodes"] = l.grid->size();
  o.report["tail"] = tail_json(fit_tail(gs, l.table));
  o.report["c_inf"] = l.table.c_inf;
  try {
    const BoundReport b = verify_bounds(gs, l.table);
    o.report["bounds"] = {{"ok", b.ok},
                          {"V_negative", b.V_negative},
                          {"delta_hat", b.delta_hat},
                          {"delta_hat_r", b.delta_hat_r},
                          {"potential_decay_exponent", b.potential_decay_exponent},
                          {"potential_decay_residual", b.potential_decay_residual}};
    o.ok = b.ok;
  } catch (const Error& e) {
    o.report["bounds"] = {{"ok", false}, {"error", e.what()}};
    o.ok = false;
  }
  const RadialProfile V = potential(gs, l.table);
  write_csv(c.output_dir / "ground_state.csv", {"r", "Q", "dQ", "V"}, {&l.grid->r(), &gs.Q.f, &gs.Q.df, &V.f});
  return o;
}

Outcome run_spectral(const RunConfig& c, const SpectralArgs& a) {
  Loaded l = load_ground_state(c);
  const ProfileBasis basis = make_profile_basis(l.table, l.grid, l.cached.gs);
  const KernelPair pair = a.n == 0 ? basis.pair : kernel_pair(l.table, a.n, l.grid);
  LadderOptions lo;
  lo.depth = a.depth;
  const ProfileLadder lad = build_ladder(pair, l.table, lo);
  {
    CacheLock lock(c.cache_dir);
    append_ladder(l.cached.path, lad);
  }
  const OrthoBasis ob = build_phi_basis(pair, lad, a.M);
  const GramReport G = orthogonality_matrix(ob, lad, pair);

  Outcome o;
  o.cache_hit = l.cached.hit;
  o.ok = lad.invariants_ok;
  auto& r = o.report;
  r["n"] = a.n;
  r["gamma_n"] = pair.gamma_n;
  r["T0_tail"] = power_json(pair.T0_tail);
  r["Gamma_tail"] = power_json(pair.Gamma_tail);
  r["T0_origin_exponent"] = pair.T0_origin_exponent;
  r["Gamma_origin_exponent"] = pair.Gamma_origin_exponent;
  r["cross_check_deviation"] = pair.cross_check_deviation;
  ojson ladder = ojson::array();
  for (std::size_t i = 0; i < lad.T.size(); ++i) {
    ojson e = {{"i", i}, {"T_target_exponent", -pair.gamma_n + 2.0 * i}, {"T_fit", power_json(lad.T_fit[i])},
               {"T_tail_ok", static_cast<bool>(lad.T_tail_ok[i])}};
    if (i < lad.Theta.size()) {
      e["Theta_fit"] = power_json(lad.Theta_fit[i]);
      e["Theta_tail_ok"] = static_cast<bool>(lad.Theta_tail_ok[i]);
    }
    if (i < lad.ladder_residual.size()) e["ladder_residual"] = lad.ladder_residual[i];
    if (i < lad.branches.size()) e["integrable_branch_next"] = lad.branches[i].integrable_branch;
    ladder.push_back(e);
  }
  r["ladder"] = ladder;
  r["M"] = a.M;
  r["chiT0_T0"] = ob.chiT0_T0;
  r["phi_coefficients"] = ob.c;
  r["gram"] = {{"G", matrix_json(G.G)},
               {"diagonal_spread", G.diagonal_spread},
               {"diagonal_vs_pairing", G.diagonal_vs_pairing},
               {"offdiag_raw", G.offdiag_raw},
               {"offdiag_scaled", G.offdiag_scaled},
               {"lower_raw", G.lower_raw}};

  std::vector<std::string> header{"r"};
  std::vector<const std::vector<double>*> cols{&l.grid->r()};
  for (std::size_t i = 0; i < lad.T.size(); ++i) {
    header.push_back(fmt::format("T{}", i));
    cols.push_back(&lad.T[i].f);
  }
  for (std::size_t i = 0; i < lad.Theta.size(); ++i) {
    header.push_back(fmt::format("Theta{}", i));
    cols.push_back(&lad.Theta[i].f);
  }
  header.push_back("Phi");
  cols.push_back(&ob.Phi.f);
  write_csv(c.output_dir / fmt::format("ladder_n{}.csv", a.n), header, cols);
  return o;
}

Outcome run_profile(const RunConfig& c, const ProfileArgs& a) {
  Loaded l = load_ground_state(c);
  const ProfileBasis basis = make_profile_basis(l.table, l.grid, l.cached.gs);
  ApproximateProfile P = assemble(basis, l.table, special_solution(l.table, c.model.ell, a.s), a.with_s2);
  localize(P, basis, l.table);
  residual(P, basis, l.table, a.radii);

  Outcome o;
  o.cache_hit = l.cached.hit;
  auto& r = o.report;
  r["s"] = a.s;
  r["b"] = P.b.radial;
  r["with_S2"] = a.with_s2;
  r["B1"] = P.B1;
  r["sup_weighted_perturbation"] = P.sup_weighted_perturbation;
  r["S2_inversion_residual"] = basis.S2_inversion_residual;
  ojson norms = ojson::array();
  for (std::size_t k = 0; k < P.residual.radii.size(); ++k)
    norms.push_back({{"radius", P.residual.radii[k]}, {"norm2", P.residual.norms[k]}});
  r["residual_norms"] = norms;
  r["localization_ratio"] = P.residual.localization_ratio;
  write_csv(c.output_dir / "profile.csv", {"r", "Q_b", "Q_b_localized", "psi_b"},
            {&l.grid->r(), &P.Qb.f, &P.Qb_localized.f, &P.psi});
  return o;
}

Outcome run_flow(const RunConfig& c, const FlowArgs& a) {
  const ConstantsTable t = derive_constants(c.model);
  FlowState st;
  st.s = a.s0;
  st.lambda = 1.0;
  st.b = special_solution(t, a.ell, a.s0);
  FlowOptions fo;
  fo.ell = a.ell;
  const Trajectory tr = integrate_flow(st, a.s_end, t, fo);
  const LinearizationReport lin = linearize(t, a.ell, c.model.L);

  Outcome o;
  o.ok = lin.counts_ok;
  auto& r = o.report;
  r["ell"] = a.ell;
  r["L"] = lin.L;
  r["alpha"] = lin.alpha;
  r["A_ell"] = matrix_json(lin.A_ell);
  r["eigenvalues_numeric"] = lin.numeric;
  r["eigenvalues_closed_form"] = lin.closed_form;
  r["max_eigen_deviation"] = lin.max_eigen_deviation;
  r["charpoly_numeric"] = lin.charpoly_numeric;
  r["charpoly_closed_form"] = lin.charpoly_closed_form;
  r["radial_nonnegative"] = lin.radial_nonnegative;
  ojson blocks = ojson::array();
  for (const auto& b : lin.blocks)
    blocks.push_back({{"n", b.n}, {"i_n", b.i_n}, {"numeric", b.numeric}, {"closed_form", b.closed_form},
                      {"nonnegative", b.nonnegative}, {"nonnegative_rule", b.nonnegative_rule}});
  r["blocks"] = blocks;
  r["counts_ok"] = lin.counts_ok;
  double lam_err = 0;
  for (const auto& x : tr.samples)
    lam_err = std::max(lam_err, std::abs(x.lambda / special_lambda(t.alpha, a.ell, a.s0, 1.0, x.t) - 1.0));
  r["lambda_rel_error"] = lam_err;

  const std::size_t nb = tr.samples.empty() ? 0 : tr.samples.front().b.size();
  const std::size_t nu = tr.samples.empty() ? 0 : tr.samples.front().U.size();
  const std::size_t nv = tr.samples.empty() ? 0 : tr.samples.front().V.size();
  std::vector<std::string> header{"s", "t", "lambda"};
  std::vector<std::vector<double>> data(3 + nb + nu + nv);
  for (std::size_t i = 0; i < nb; ++i) header.push_back(fmt::format("b{}", i + 1));
  for (std::size_t i = 0; i < nu; ++i) header.push_back(fmt::format("U{}", i + 1));
  for (std::size_t i = 0; i < nv; ++i) header.push_back(fmt::format("V{}", i + 1));
  for (const auto& x : tr.samples) {
    std::size_t k = 0;
    data[k++].push_back(x.s);
    data[k++].push_back(x.t);
    data[k++].push_back(x.lambda);
    for (double v : x.b) data[k++].push_back(v);
    for (double v : x.U) data[k++].push_back(v);
    for (double v : x.V) data[k++].push_back(v);
  }
  std::vector<const std::vector<double>*> cols;
  for (const auto& d : data) cols.push_back(&d);
  write_csv(c.output_dir / "flow.csv", header, cols);
  return o;
}

Outcome run_shoot(const RunConfig& c, const ShootArgs& a) {
  const ConstantsTable t = derive_constants(c.model);
  const ShootResult res = shoot_trapped(t, a.ell, a.s0, a.horizon_factor * a.s0);
  Outcome o;
  o.ok = res.trapped;
  auto& r = o.report;
  r["ell"] = a.ell;
  r["s0"] = a.s0;
  r["horizon"] = a.horizon_factor * a.s0;
  r["v0"] = res.v0;
  r["bracket_lo"] = res.bracket_lo;
  r["bracket_hi"] = res.bracket_hi;
  r["bracket_width"] = res.bracket_width;
  r["iterations"] = res.iterations;
  r["lo_exit"] = exit_json(res.lo_exit);
  r["hi_exit"] = exit_json(res.hi_exit);
  r["certificate_exit"] = exit_json(res.certificate.exit);
  r["trapped"] = res.trapped;

  const auto& cert = res.certificate;
  const std::size_t nv = cert.V.empty() ? 0 : cert.V.front().size();
  const std::size_t nu = cert.U.empty() ? 0 : cert.U.front().size();
  std::vector<std::string> header{"s"};
  std::vector<std::vector<double>> data(1 + nv + nu);
  for (std::size_t i = 0; i < nv; ++i) header.push_back(fmt::format("V{}", i + 1));
  for (std::size_t i = 0; i < nu; ++i) header.push_back(fmt::format("U{}", a.ell + i + 1));
  for (std::size_t k = 0; k < cert.s.size(); ++k) {
    data[0].push_back(cert.s[k]);
    for (std::size_t i = 0; i < nv; ++i) data[1 + i].push_back(cert.V[k][i]);
    for (std::size_t i = 0; i < nu; ++i) data[1 + nv + i].push_back(k < cert.U.size() ? cert.U[k][i] : NAN);
  }
  std::vector<const std::vector<double>*> cols;
  for (const auto& d : data) cols.push_back(&d);
  write_csv(c.output_dir / "shoot.csv", header, cols);
  return o;
}

Outcome run_simulate(const RunConfig& c) {
  const ConstantsTable t = derive_constants(c.model);
  const auto& s = c.simulate;
  SimConfig cfg;
  cfg.R = s.R;
  cfg.nodes = s.nodes;
  cfg.t_max = s.t_max;
  cfg.record_every = s.record_every;
  cfg.sobolev = s.sobolev;
  cfg.init.amplitude = s.amplitude;
  cfg.init.ell = c.model.ell;
  cfg.init.s0 = s.s0;
  cfg.init.shoot_amplitude = s.shoot_amplitude;
  cfg.init.kind = s.kind == "profile" ? InitialData::Kind::Profile : InitialData::Kind::Bump;
  cfg.validate();

  std::optional<ProfileBasis> basis;
  Outcome o;
  if (cfg.init.kind == InitialData::Kind::Profile) {
    Loaded l = load_ground_state(c);
    o.cache_hit = l.cached.hit;
    basis.emplace(make_profile_basis(t, l.grid, std::move(l.cached.gs)));
  }
  const SimContext ctx{&t, basis ? &*basis : nullptr};
  ClassifyOptions copt;
  copt.ell = c.model.ell;

  auto& r = o.report;
  if (s.shoot_lo) {
    const PdeShootReport rep = shoot_pde(cfg, ctx, *s.shoot_lo, *s.shoot_hi, s.shoot_iterations, copt);
    ojson runs = ojson::array();
    for (const auto& run : rep.runs)
      runs.push_back({{"amplitude", run.amplitude},
                      {"overflow", run.overflow},
                      {"final_sup", run.final_sup},
                      {"steps", run.steps},
                      {"classification", classification_json(run.cls)}});
    r["runs"] = runs;
    r["best_amplitude"] = rep.best_amplitude;
    r["best_lambda_exponent"] = rep.best_lambda_exponent;
    r["target"] = rep.target;
    r["reached"] = rep.reached;
    o.ok = rep.reached;
    return o;
  }

  const SimState st = simulate(cfg, ctx);
  const Classification cls = classify_blowup(st.trace, t, copt);
  r["steps"] = st.steps;
  r["regrids"] = st.regrids;
  r["overflow"] = st.overflow;
  r["t_final"] = st.t;
  r["classification"] = classification_json(cls);
  o.ok = cls.cls != BlowupClass::Undetermined;

  std::vector<std::string> header{"t", "dt", "sup", "lambda_hat", "h_min"};
  const std::size_t nk = s.sobolev.size();
  for (int k : s.sobolev) header.push_back(fmt::format("H{}", k));
  std::vector<std::vector<double>> data(5 + nk);
  for (const auto& row : st.trace) {
    data[0].push_back(row.t);
    data[1].push_back(row.dt);
    data[2].push_back(row.sup);
    data[3].push_back(row.lambda_hat);
    data[4].push_back(row.h_min);
    for (std::size_t k = 0; k < nk; ++k) data[5 + k].push_back(k < row.sobolev.size() ? row.sobolev[k] : NAN);
  }
  std::vector<const std::vector<double>*> cols;
  for (const auto& d : data) cols.push_back(&d);
  write_csv(c.output_dir / "trace.csv", header, cols);
  return o;
}

Outcome run_ineq(const RunConfig& c) {
  const auto& q = c.ineq;
  Outcome o;
  auto& r = o.report;
  r["which"] = q.which;
  if (q.which == "hardy") {
    HardyOptions ho;
    ho.d = c.model.d;
    ho.q = q.q;
    ho.samples = q.samples;
    ho.seed = c.seed;
    const HardyReport h = hardy_ratio(ho);
    r["q"] = h.q;
    r["gap"] = h.gap;
    r["boundary_branch"] = h.boundary_branch;
    r["sharp"] = h.sharp;
    r["proof_constant"] = h.proof_constant;
    r["sample_min"] = h.sample_min;
    r["span_min"] = h.span_min;
    r["samples"] = h.samples;
    o.ok = std::min(h.sample_min, h.span_min) >= h.proof_constant;
  } else if (q.which == "rellich") {
    RellichOptions ro;
    ro.d = c.model.d;
    ro.samples = q.samples;
    ro.seed = c.seed;
    const RellichReport rr = rellich_ratio(ro);
    r["const_u"] = rr.const_u;
    r["const_grad"] = rr.const_grad;
    r["sample_min_u"] = rr.sample_min_u;
    r["sample_min_grad"] = rr.sample_min_grad;
    r["span_min_u"] = rr.span_min_u;
    r["span_min_grad"] = rr.span_min_grad;
    r["worst_violation"] = rr.worst_violation;
    r["samples"] = rr.samples;
    o.ok = rr.worst_violation <= 1e-6;
  } else {
    Loaded l = load_ground_state(c);
    o.cache_hit = l.cached.hit;
    const ProfileBasis basis = make_profile_basis(l.table, l.grid, std::move(l.cached.gs));
    QuotientProblem qp;
    qp.form = q.i == 1 ? CoercivityForm::SingleH : CoercivityForm::Iterate;
    qp.n = q.n;
    qp.i = q.i;
    qp.q = q.q;
    qp.constraints = q.constraints;
    qp.nodes = q.nodes;
    const CoercivityReport cr = coercivity_spectrum(qp, l.table, basis);
    r["form"] = qp.form == CoercivityForm::SingleH ? "single" : "iterate";
    r["n"] = qp.n;
    r["i"] = qp.i;
    r["q"] = qp.q;
    r["constraints"] = qp.constraints;
    r["nodes"] = qp.nodes;
    r["min_quotient"] = cr.min_quotient;
    r["constraint_count"] = cr.constraint_count;
    r["constraint_levels"] = cr.constraint_levels;
    r["iterations"] = cr.iterations;
    r["converged"] = cr.converged;
    r["condition"] = cr.condition;
    r["kernel_quotient"] = cr.kernel_quotient;
    if (qp.form == CoercivityForm::Iterate) r["unweighted_ratio"] = cr.unweighted_ratio;
    o.ok = cr.converged && cr.min_quotient > 0;
    write_csv(c.output_dir / "coercivity_eigenfunction.csv", {"r", "u"}, {&cr.r, &cr.eigenfunction});
  }
  return o;
}

Outcome run_verify_all(const RunConfig& c, const VerifyArgs& a) {
  acceptance::Options opt;
  opt.input = c.model;
  opt.cache_dir = c.cache_dir;
  opt.only = a.only;
  opt.pde_shoot_iterations = a.pde_shoot_iterations;
  const auto results = acceptance::run_all(opt);
  Outcome o;
  ojson list = ojson::array();
  for (const auto& res : results) {
    std::cout << acceptance::format_line(res) << std::endl;
    for (const auto& n : res.notes) std::cout << "       " << n << '\n';
    ojson metrics = ojson::array();
    for (const auto& m : res.metrics) {
      ojson e = {{"name", m.name}, {"value", m.value}};
      if (!std::isnan(m.limit)) e["limit"] = m.limit;
      metrics.push_back(e);
    }
    list.push_back({{"id", res.id},
                    {"title", res.title},
                    {"pass", res.pass},
                    {"stretch", res.stretch},
                    {"seconds", res.seconds},
                    {"budget", res.budget},
                    {"metrics", metrics},
                    {"notes", res.notes}});
  }
  o.ok = acceptance::suite_passed(results);
  o.report["criteria"] = list;
  o.report["passed"] = o.ok;
  std::cout << (o.ok ? "verify-all: PASS" : "verify-all: FAIL") << std::endl;
  return o;
}

}  // namespace blowup::cli
