#pragma once

#include <stdexcept>
#include <string>

namespace isonet {

enum class Err {
  DimensionMismatch,
  NotAPoint,
  NotACircle,
  DegenerateComplex,
  TangentPencil,
  NoRealIntersection,
  ModulusOutOfRange,
  NotRibaucour,
  DegenerateQuad,
  DegeneratePencil,
  ImaginaryCongruence,
  NotArcLength,
  NotConstrainedElastic,
  NotQuasiPeriodic,
  NotConcentricPencil,
  NotIncident,
  SingularStep,
  PoleParameter,
  NotCompatible,
  NoRealTransform,
  StepFailed,
  DegenerateNet,
  DegenerateFold,
  NoSolutionInRange,
  HyperbolicPencil,
  NotClosed,
  BadInput,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::NotAPoint: return "NotAPoint";
    case Err::NotACircle: return "NotACircle";
    case Err::DegenerateComplex: return "DegenerateComplex";
    case Err::TangentPencil: return "TangentPencil";
    case Err::NoRealIntersection: return "NoRealIntersection";
    case Err::ModulusOutOfRange: return "ModulusOutOfRange";
    case Err::NotRibaucour: return "NotRibaucour";
    case Err::DegenerateQuad: return "DegenerateQuad";
    case Err::DegeneratePencil: return "DegeneratePencil";
    case Err::ImaginaryCongruence: return "ImaginaryCongruence";
    case Err::NotArcLength: return "NotArcLength";
    case Err::NotConstrainedElastic: return "NotConstrainedElastic";
    case Err::NotQuasiPeriodic: return "NotQuasiPeriodic";
    case Err::NotConcentricPencil: return "NotConcentricPencil";
    case Err::NotIncident: return "NotIncident";
    case Err::SingularStep: return "SingularStep";
    case Err::PoleParameter: return "PoleParameter";
    case Err::NotCompatible: return "NotCompatible";
    case Err::NoRealTransform: return "NoRealTransform";
    case Err::StepFailed: return "StepFailed";
    case Err::DegenerateNet: return "DegenerateNet";
    case Err::DegenerateFold: return "DegenerateFold";
    case Err::NoSolutionInRange: return "NoSolutionInRange";
    case Err::HyperbolicPencil: return "HyperbolicPencil";
    case Err::NotClosed: return "NotClosed";
    case Err::BadInput: return "BadInput";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

}  // namespace isonet
