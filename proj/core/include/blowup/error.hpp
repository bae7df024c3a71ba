#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

enum class Errc {
  InvalidInput,
  SubcriticalP,
  DegenerateDelta,
  BadEll,
  IntegratorFailure,
  NegativeQ,
  WindowTooShort,
  DegenerateFit,
  BoundViolated,
  SignChange,
  TailMismatch,
  GridMismatch,
  OriginDecayViolated,
  BranchAmbiguous,
  SingularGram,
  SizeBoundViolated,
  ScaleOutOfGrid,
  BlowupOfParameters,
  EigenSolverFailure,
  NoSignChange,
  HorizonTooShort,
  Overflow,
  StepUnderflow,
  RootNotBracketed,
  InsufficientDecades,
  NoiseDominated,
  IllConditioned,
  ConfigInvalid,
  CacheCorrupt,
};

const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace blowup
