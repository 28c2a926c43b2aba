#pragma once

#include <stdexcept>
#include <string>

namespace movekit {

enum class ErrorKind {
  Parse,
  Validation,
  TooLarge,
  WrongProblem,
  UnsupportedProblem,
  InfeasibleParameters,
  MovementCostAsymmetry,
  InvalidDecomposition,
  NonStationaryReds,
  NotPlanarSanity,
  PrimalMismatch,
  ValueOverM,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace movekit
