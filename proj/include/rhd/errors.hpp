#pragma once

#include <stdexcept>
#include <string>

namespace rhd {

/// Primitive state outside rho > 0, p > 0, |v| < 1.
struct InvalidPrimitive : std::domain_error {
  using std::domain_error::domain_error;
};

/// Conserved state outside D > 0, q > 0.
struct NotAdmissible : std::domain_error {
  using std::domain_error::domain_error;
};

/// Pressure recovery did not reach tolerance within the iteration cap.
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedDegree : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A state fed to the time-derivative stencils was not admissible.
struct InadmissibleInput : std::domain_error {
  using std::domain_error::domain_error;
};

/// Element mean left the admissible set; the step has to be redone with a smaller dt.
struct MeanNotAdmissible : std::domain_error {
  using std::domain_error::domain_error;
};

struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownProblem : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MismatchedPeriodicity : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace rhd
