#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "blowup/grid.hpp"
#include "blowup/numerology.hpp"

namespace blowup::cli {

using ojson = nlohmann::ordered_json;

struct SimulateBlock {
  std::string kind = "bump";  // bump | profile
  double amplitude = 5.0;
  double shoot_amplitude = 0.0;
  double s0 = 20.0;
  std::size_t nodes = 4000;
  double R = 10.0;
  double t_max = 10.0;
  std::size_t record_every = 1;
  std::vector<int> sobolev;
  // a shooting bracket turns the run into a bisection on the unstable amplitude
  std::optional<double> shoot_lo;
  std::optional<double> shoot_hi;
  int shoot_iterations = 8;
};

struct IneqBlock {
  std::string which = "coercivity";  // hardy | rellich | coercivity
  double q = 2.5;
  int n = 0;
  int i = 1;
  bool constraints = true;
  std::size_t nodes = 1500;
  int samples = 1000;
};

struct RunConfig {
  ModelInput model;
  GridSpec grid;
  std::filesystem::path cache_dir = "blowup_cache";
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 1;
  SimulateBlock simulate;
  IneqBlock ineq;
};

// Reads a JSON config; unknown keys and wrong types throw ConfigInvalid.
RunConfig load_run_config(const std::filesystem::path& path);
ojson to_json(const RunConfig& c);

// BLOWUP_CACHE_DIR, when set and non-empty.
std::optional<std::filesystem::path> cache_dir_from_env();

}  // namespace blowup::cli
