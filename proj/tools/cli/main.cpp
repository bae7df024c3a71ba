#include <chrono>
#include <ctime>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "blowup/error.hpp"

#ifndef BLOWUP_VERSION
#define BLOWUP_VERSION "unknown"
#endif

namespace {

using namespace blowup;
using namespace blowup::cli;

enum ExitCode { kPass = 0, kFail = 1, kUsage = 2 };

struct Flags {
  std::string config;
  std::string cache_dir;
  std::string output_dir;
  ModelInput model;
  GridSpec grid;
  std::uint64_t seed = 1;
};

// Model, grid and output flags shared by every subcommand.
void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run config")->check(CLI::ExistingFile);
  sub->add_option("--d", f.model.d, "dimension");
  sub->add_option("--p", f.model.p, "odd nonlinearity exponent");
  sub->add_option("--ell", f.model.ell, "blow-up regime");
  sub->add_option("--L", f.model.L, "parameter depth");
  sub->add_option("--eps-g", f.model.eps_g);
  sub->add_option("--eta", f.model.eta);
  sub->add_option("--M", f.model.M, "cut-off radius of the generators");
  sub->add_option("--h-core", f.grid.h_core);
  sub->add_option("--r-core", f.grid.r_core);
  sub->add_option("--r-max", f.grid.r_max);
  sub->add_option("--cache-dir", f.cache_dir, "profile cache (default $BLOWUP_CACHE_DIR or ./blowup_cache)");
  sub->add_option("--out", f.output_dir, "output directory for JSON and CSV");
  sub->add_option("--seed", f.seed);
}

bool given(const CLI::App* sub, const char* name) { return sub->count(name) > 0; }

// Config file first, explicit flags over it, the environment only for an unset cache directory.
RunConfig resolve(const CLI::App* sub, const Flags& f) {
  RunConfig c;
  if (!f.config.empty()) c = load_run_config(f.config);
  const bool cache_in_file = !f.config.empty() && c.cache_dir != RunConfig{}.cache_dir;
  if (given(sub, "--d")) c.model.d = f.model.d;
  if (given(sub, "--p")) c.model.p = f.model.p;
  if (given(sub, "--ell")) c.model.ell = f.model.ell;
  if (given(sub, "--L")) c.model.L = f.model.L;
  if (given(sub, "--eps-g")) c.model.eps_g = f.model.eps_g;
  if (given(sub, "--eta")) c.model.eta = f.model.eta;
  if (given(sub, "--M")) c.model.M = f.model.M;
  if (given(sub, "--h-core")) c.grid.h_core = f.grid.h_core;
  if (given(sub, "--r-core")) c.grid.r_core = f.grid.r_core;
  if (given(sub, "--r-max")) c.grid.r_max = f.grid.r_max;
  if (given(sub, "--seed")) c.seed = f.seed;
  if (given(sub, "--out")) c.output_dir = f.output_dir;
  if (given(sub, "--cache-dir"))
    c.cache_dir = f.cache_dir;
  else if (auto env = cache_dir_from_env(); env && !cache_in_file)
    c.cache_dir = *env;
  return c;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("blowup"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Radial type II blow-up toolkit for the supercritical heat equation"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "log progress to stderr");

  Flags flags;
  SpectralArgs spectral;
  ProfileArgs profile;
  FlowArgs flow;
  ShootArgs shoot;
  VerifyArgs verify;
  SimulateBlock sim_flags;
  IneqBlock ineq_flags;
  std::string constraints = "on";
  std::string kind = "bump";

  auto* c_constants = app.add_subcommand("constants", "exponent table as JSON and text");
  auto* c_ground = app.add_subcommand("ground-state", "ground state Q, cached; CSV of r, Q, Q', V");
  auto* c_spectral = app.add_subcommand("spectral", "kernel pair, ladder and generator Gram matrix");
  c_spectral->add_option("--n", spectral.n, "harmonic degree")->check(CLI::NonNegativeNumber);
  c_spectral->add_option("--depth", spectral.depth, "ladder depth, -1 for L_n");
  c_spectral->add_option("--gram-M", spectral.M, "cut-off radius for the Gram matrix");
  auto* c_profile = app.add_subcommand("profile", "approximate profile at b = bbar(s) and its residual");
  c_profile->add_option("--s", profile.s, "renormalized time")->check(CLI::PositiveNumber);
  c_profile->add_flag("--with-s2,!--without-s2", profile.with_s2, "include the S_2 correction");
  c_profile->add_option("--B-list", profile.radii, "residual radii")->delimiter(',');
  auto* c_flow = app.add_subcommand("flow", "parameter flow from the special solution; eigen report");
  c_flow->add_option("--s0", flow.s0)->check(CLI::PositiveNumber);
  c_flow->add_option("--s-end", flow.s_end)->check(CLI::PositiveNumber);
  auto* c_shoot = app.add_subcommand("shoot", "bisection on the unstable amplitude of the ODE system");
  c_shoot->add_option("--s0", shoot.s0)->check(CLI::PositiveNumber);
  c_shoot->add_option("--horizon-factor", shoot.horizon_factor)->check(CLI::PositiveNumber);
  auto* c_sim = app.add_subcommand("simulate", "radial heat flow until blow-up; trace CSV and verdict");
  c_sim->add_option("--kind", kind)->check(CLI::IsMember({"bump", "profile"}));
  c_sim->add_option("--amplitude", sim_flags.amplitude);
  c_sim->add_option("--shoot-amplitude", sim_flags.shoot_amplitude);
  c_sim->add_option("--s-start", sim_flags.s0);
  c_sim->add_option("--nodes", sim_flags.nodes)->check(CLI::PositiveNumber);
  c_sim->add_option("--R", sim_flags.R)->check(CLI::PositiveNumber);
  c_sim->add_option("--t-max", sim_flags.t_max)->check(CLI::PositiveNumber);
  c_sim->add_option("--record-every", sim_flags.record_every);
  c_sim->add_option("--sobolev", sim_flags.sobolev)->delimiter(',');
  double shoot_lo = 0, shoot_hi = 0;
  c_sim->add_option("--shoot-lo", shoot_lo);
  c_sim->add_option("--shoot-hi", shoot_hi);
  c_sim->add_option("--shoot-iterations", sim_flags.shoot_iterations);
  auto* c_ineq = app.add_subcommand("ineq", "Hardy, Rellich and coercivity quotients");
  c_ineq->add_option("--which", ineq_flags.which)->check(CLI::IsMember({"hardy", "rellich", "coercivity"}));
  c_ineq->add_option("--q", ineq_flags.q);
  c_ineq->add_option("--n", ineq_flags.n)->check(CLI::NonNegativeNumber);
  c_ineq->add_option("--i", ineq_flags.i)->check(CLI::PositiveNumber);
  c_ineq->add_option("--constraints", constraints)->check(CLI::IsMember({"on", "off"}));
  c_ineq->add_option("--nodes", ineq_flags.nodes)->check(CLI::PositiveNumber);
  c_ineq->add_option("--samples", ineq_flags.samples)->check(CLI::PositiveNumber);
  auto* c_verify = app.add_subcommand("verify-all", "full acceptance suite");
  c_verify->add_option("--only", verify.only, "criterion ids")->delimiter(',');
  c_verify->add_option("--pde-shoot-iterations", verify.pde_shoot_iterations);

  for (auto* sub : app.get_subcommands({})) add_common(sub, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "ConfigInvalid: " << e.what() << '\n';
    return kUsage;
  }
  spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = utc_now();
  try {
    RunConfig cfg = resolve(sub, flags);
    try {
      derive_constants(cfg.model);
    } catch (const Error& e) {
      throw Error(Errc::ConfigInvalid, e.what());
    }
    if (sub == c_flow || sub == c_shoot) flow.ell = shoot.ell = cfg.model.ell;
    if (sub == c_sim) {
      auto& s = cfg.simulate;
      if (sub->count("--kind")) s.kind = kind;
      if (sub->count("--amplitude")) s.amplitude = sim_flags.amplitude;
      if (sub->count("--shoot-amplitude")) s.shoot_amplitude = sim_flags.shoot_amplitude;
      if (sub->count("--s-start")) s.s0 = sim_flags.s0;
      if (sub->count("--nodes")) s.nodes = sim_flags.nodes;
      if (sub->count("--R")) s.R = sim_flags.R;
      if (sub->count("--t-max")) s.t_max = sim_flags.t_max;
      if (sub->count("--record-every")) s.record_every = sim_flags.record_every;
      if (sub->count("--sobolev")) s.sobolev = sim_flags.sobolev;
      if (sub->count("--shoot-lo")) s.shoot_lo = shoot_lo;
      if (sub->count("--shoot-hi")) s.shoot_hi = shoot_hi;
      if (sub->count("--shoot-iterations")) s.shoot_iterations = sim_flags.shoot_iterations;
      if (s.shoot_lo.has_value() != s.shoot_hi.has_value())
        throw Error(Errc::ConfigInvalid, "--shoot-lo and --shoot-hi go together");
    }
    if (sub == c_ineq) {
      auto& q = cfg.ineq;
      if (sub->count("--which")) q.which = ineq_flags.which;
      if (sub->count("--q")) q.q = ineq_flags.q;
      if (sub->count("--n")) q.n = ineq_flags.n;
      if (sub->count("--i")) q.i = ineq_flags.i;
      if (sub->count("--constraints")) q.constraints = constraints == "on";
      if (sub->count("--nodes")) q.nodes = ineq_flags.nodes;
      if (sub->count("--samples")) q.samples = ineq_flags.samples;
    }

    Outcome out;
    if (sub == c_constants) out = run_constants(cfg);
    else if (sub == c_ground) out = run_ground_state(cfg);
    else if (sub == c_spectral) out = run_spectral(cfg, spectral);
    else if (sub == c_profile) out = run_profile(cfg, profile);
    else if (sub == c_flow) out = run_flow(cfg, flow);
    else if (sub == c_shoot) out = run_shoot(cfg, shoot);
    else if (sub == c_sim) out = run_simulate(cfg);
    else if (sub == c_ineq) out = run_ineq(cfg);
    else out = run_verify_all(cfg, verify);

    write_json(cfg.output_dir / (name + ".json"), out.report);
    ojson manifest;
    manifest["tool"] = "blowup";
    manifest["version"] = BLOWUP_VERSION;
    manifest["command"] = name;
    ojson args = ojson::array();
    for (int k = 1; k < argc; ++k) args.push_back(argv[k]);
    manifest["argv"] = args;
    manifest["config"] = to_json(cfg);
    manifest["started_utc"] = started_utc;
    manifest["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    manifest["cache_hit"] = out.cache_hit;
    if (sub == c_verify) manifest["tolerances"] = "pinned per criterion, listed as 'limit' in verify-all.json";
    manifest["ok"] = out.ok;
    write_json(cfg.output_dir / (name + ".manifest.json"), manifest);
    if (sub == c_constants) std::cout << out.report.dump(2) << '\n';
    return out.ok ? kPass : kFail;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == Errc::ConfigInvalid ? kUsage : kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
}
