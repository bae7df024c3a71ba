#pragma once

#include <string>
#include <vector>

#include "run_config.hpp"

namespace blowup::cli {

struct SpectralArgs {
  int n = 0;
  int depth = -1;
  double M = 40.0;
};

struct ProfileArgs {
  double s = 50.0;
  bool with_s2 = true;
  std::vector<double> radii;  // empty: {1, 10, B_0, B_1}
};

struct FlowArgs {
  int ell = 2;
  double s0 = 10.0;
  double s_end = 100.0;
};

struct ShootArgs {
  int ell = 2;
  double s0 = 20.0;
  double horizon_factor = 100.0;
};

struct VerifyArgs {
  std::vector<int> only;
  int pde_shoot_iterations = 12;
};

// Everything a subcommand hands back: the report written to <out>/<name>.json and the verdict.
struct Outcome {
  ojson report;
  bool ok = true;
  bool cache_hit = false;
};

Outcome run_constants(const RunConfig& c);
Outcome run_ground_state(const RunConfig& c);
Outcome run_spectral(const RunConfig& c, const SpectralArgs& a);
Outcome run_profile(const RunConfig& c, const ProfileArgs& a);
Outcome run_flow(const RunConfig& c, const FlowArgs& a);
Outcome run_shoot(const RunConfig& c, const ShootArgs& a);
Outcome run_simulate(const RunConfig& c);
Outcome run_ineq(const RunConfig& c);
Outcome run_verify_all(const RunConfig& c, const VerifyArgs& a);

// Aligned text rendering of the constants table.
std::string constants_text(const ConstantsTable& t);

void write_json(const std::filesystem::path& path, const ojson& j);

}  // namespace blowup::cli
