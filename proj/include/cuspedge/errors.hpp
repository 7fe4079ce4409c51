#pragma once

#include <stdexcept>
#include <string>

namespace cuspedge {

// Root of all intentionally thrown conditions.  Anything else escaping the
// library is a bug, not a diagnosable input problem.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input violates a mathematical precondition (degenerate germ, hypothesis of
// a construction not met, ...).  The CLI maps this to exit code 3.
struct HypothesisFailed : Error {
  using Error::Error;
};

// Malformed or out-of-contract serialized input.  CLI exit code 2.
struct SchemaError : Error {
  using Error::Error;
};

// jet_div_exact asked to divide by a power of a variable that does not
// divide the jet.
struct NotDivisible : HypothesisFailed {
  using HypothesisFailed::HypothesisFailed;
};

// A surface germ was required to be adapted (parameter lines aligned with
// the singular locus) but is not.
struct NotAdapted : HypothesisFailed {
  using HypothesisFailed::HypothesisFailed;
};

// An iteration or integration lost accuracy beyond repair (blow-up, NaN).
// Usually means the step count is too small for the data.
struct NumericalFailure : Error {
  using Error::Error;
};

// Fixed tolerance used throughout for "is this coefficient zero" decisions.
inline constexpr double kTauZero = 1e-9;

}  // namespace cuspedge
