#pragma once

#include <stdexcept>
#include <string>

namespace dirdef {

enum class Errc {
  NotSubspace,
  DegeneratePairing,
  GeneratorMismatch,
  UnknownGenerator,
  NotOddLinear,
  WrongContext,
  MissingConnection,
  WrongDegree,
  DimMismatch,
  NotLie,
  BundleMismatch,
  AnchorNotSurjective,
  NotHomogeneous,
  Order0NotLie,
  PreconditionMC,
  NotInvertible,
  NotAntisymmetric,
  ShapeMismatch,
  FactorMismatch,
  NotIsotropic,
  IllConditioned,
  StepTooLarge,
  LeftAdmissibleSet,
  NotAdmissible,
  DegreeCapExceeded,
  Shape,
  Parse,
  AxiomViolation,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace dirdef
