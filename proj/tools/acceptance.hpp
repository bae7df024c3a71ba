#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blowup/blowup_profile.hpp"
#include "blowup/numerology.hpp"

namespace blowup::acceptance {

struct Metric {
  std::string name;
  double value = 0;
  double limit = 0;  // the pinned tolerance or target, NaN when informational
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  bool stretch = false;  // reported, never fails the suite
  double seconds = 0;
  double budget = 0;     // seconds
  std::vector<Metric> metrics;
  std::vector<std::string> notes;
};

struct Options {
  ModelInput input;                   // (d, p, ell, L) of the main model
  std::optional<std::filesystem::path> cache_dir;
  std::vector<int> only;              // empty runs all ten
  int pde_shoot_iterations = 12;
  std::size_t pde_nodes = 4000;
};

// Shared state: the constants table and the profile basis, built once.
struct Context {
  ConstantsTable table;
  std::shared_ptr<const RadialGrid> grid;
  std::unique_ptr<ProfileBasis> basis;
  bool cache_hit = false;
};

Context make_context(const Options& opt);

CriterionResult numerology_exactness(const Context& ctx);
CriterionResult ground_state_tail(const Context& ctx);
CriterionResult spectral_identities(const Context& ctx);
CriterionResult orthogonality_generators(const Context& ctx);
CriterionResult parameter_flow(const Context& ctx);
CriterionResult ode_trapping(const Context& ctx);
CriterionResult pde_type_one(const Context& ctx, const Options& opt);
CriterionResult pde_type_two(const Context& ctx, const Options& opt);
CriterionResult residual_localization(const Context& ctx);
CriterionResult inequalities(const Context& ctx);

std::vector<CriterionResult> run_all(const Options& opt);

// One line per criterion: "[PASS] 7 pde type I (0.8 s / 300 s) kappa=... "
std::string format_line(const CriterionResult& r);

// True when every non-stretch criterion passed.
bool suite_passed(const std::vector<CriterionResult>& results);

}  // namespace blowup::acceptance
