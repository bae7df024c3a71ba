#include "blowup/error.hpp"

namespace blowup {

const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::SubcriticalP: return "SubcriticalP";
    case Errc::DegenerateDelta: return "DegenerateDelta";
    case Errc::BadEll: return "BadEll";
    case Errc::IntegratorFailure: return "IntegratorFailure";
    case Errc::NegativeQ: return "NegativeQ";
    case Errc::WindowTooShort: return "WindowTooShort";
    case Errc::DegenerateFit: return "DegenerateFit";
    case Errc::BoundViolated: return "BoundViolated";
    case Errc::SignChange: return "SignChange";
    case Errc::TailMismatch: return "TailMismatch";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::OriginDecayViolated: return "OriginDecayViolated";
    case Errc::BranchAmbiguous: return "BranchAmbiguous";
    case Errc::SingularGram: return "SingularGram";
    case Errc::SizeBoundViolated: return "SizeBoundViolated";
    case Errc::ScaleOutOfGrid: return "ScaleOutOfGrid";
    case Errc::BlowupOfParameters: return "BlowupOfParameters";
    case Errc::EigenSolverFailure: return "EigenSolverFailure";
    case Errc::NoSignChange: return "NoSignChange";
    case Errc::HorizonTooShort: return "HorizonTooShort";
    case Errc::Overflow: return "Overflow";
    case Errc::StepUnderflow: return "StepUnderflow";
    case Errc::RootNotBracketed: return "RootNotBracketed";
    case Errc::InsufficientDecades: return "InsufficientDecades";
    case Errc::NoiseDominated: return "NoiseDominated";
    case Errc::IllConditioned: return "IllConditioned";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::CacheCorrupt: return "CacheCorrupt";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

}  // namespace blowup
