#pragma once

#include <stdexcept>
#include <string>

namespace cbdyn {

/// Coarse classification used by the CLI to pick an exit code.
enum class ErrorKind { Precondition, Numerical, Config };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define CBDYN_DEFINE_ERROR(Name, Kind)                                   \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

CBDYN_DEFINE_ERROR(InvalidArgument, Precondition)
CBDYN_DEFINE_ERROR(EmptyInterior, Precondition)
CBDYN_DEFINE_ERROR(OutOfRange, Precondition)
CBDYN_DEFINE_ERROR(HypothesisViolated, Precondition)
CBDYN_DEFINE_ERROR(StabilityPrecheckFailed, Precondition)
CBDYN_DEFINE_ERROR(SolverStalled, Numerical)
CBDYN_DEFINE_ERROR(DegenerateWavevector, Numerical)
CBDYN_DEFINE_ERROR(QuadratureOrderTooLow, Numerical)
CBDYN_DEFINE_ERROR(NonFiniteState, Numerical)
CBDYN_DEFINE_ERROR(DegenerateFit, Numerical)
CBDYN_DEFINE_ERROR(ConfigError, Config)

#undef CBDYN_DEFINE_ERROR

class SolverDiverged : public Error {
 public:
  SolverDiverged(const std::string& what, double residual)
      : Error(ErrorKind::Numerical, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A bond left the admissible set {|A_rho| > r_min}. `site` is -1 when the
/// evaluation was not tied to a lattice site.
class OutsideAdmissibleSet : public Error {
 public:
  OutsideAdmissibleSet(const std::string& what, int bond, double length, int site = -1)
      : Error(ErrorKind::Numerical, what), bond_(bond), length_(length), site_(site) {}
  int bond() const noexcept { return bond_; }
  double length() const noexcept { return length_; }
  int site() const noexcept { return site_; }

 private:
  int bond_;
  double length_;
  int site_;
};

}  // namespace cbdyn
