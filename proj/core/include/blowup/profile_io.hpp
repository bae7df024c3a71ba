#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "blowup/ground_state.hpp"
#include "blowup/numerology.hpp"
#include "blowup/profile.hpp"
#include "blowup/spectral.hpp"

namespace blowup {

inline constexpr int kProfileCacheVersion = 1;

// Everything a cache file holds. Profiles are rebuilt on a grid made from the stored spec.
struct ProfileCache {
  int version = kProfileCacheVersion;
  int d = 0;
  int p = 0;
  GridSpec spec;
  std::shared_ptr<const RadialGrid> grid;
  GroundState gs;
  std::map<std::string, RadialProfile> extra;  // ladders and anything else worth keeping
};

// profile_d<d>_p<p>_<crc of the grid spec>.json
std::string cache_file_name(const ConstantsTable& table, const GridSpec& spec);

// Versioned JSON with a CRC-32 over the payload, written to a temporary name and renamed.
void save_profile_cache(const std::filesystem::path& path, const ConstantsTable& table, const GroundState& gs,
                        const std::vector<const RadialProfile*>& extra = {});

// Throws CacheCorrupt on a checksum or format mismatch, InvalidInput if the file is missing.
ProfileCache load_profile_cache(const std::filesystem::path& path);

struct CachedGroundState {
  GroundState gs;
  bool hit = false;
  std::filesystem::path path;
};

// Loads the ground state for (d, p, grid spec) from dir, computing and storing it on a miss.
// A file for a different model or spec under the same name counts as a miss and is overwritten.
CachedGroundState cached_ground_state(const ConstantsTable& table, std::shared_ptr<const RadialGrid> grid,
                                      const std::filesystem::path& dir);

// Stores the ladder profiles T_i and Theta_i next to the ground state of an existing cache file.
void append_ladder(const std::filesystem::path& path, const ProfileLadder& ladder);

// Columns of equal length under a header line.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns);

}  // namespace blowup
