#pragma once

#include <memory>

#include "blowup/blowup_profile.hpp"
#include "blowup/numerology.hpp"

namespace blowup::testing {

// The (13,5) model on the default grid, built once per test binary.
inline const ConstantsTable& table135() {
  static const ConstantsTable t = derive_constants(ModelInput{});
  return t;
}

inline std::shared_ptr<const RadialGrid> default_grid() {
  static const auto g = RadialGrid::make(GridSpec{});
  return g;
}

inline const ProfileBasis& basis135() {
  static const ProfileBasis b = make_profile_basis(table135(), default_grid());
  return b;
}

}  // namespace blowup::testing
