#pragma once

#include <stdexcept>
#include <string>

namespace clutor {

// Bad user input: malformed files, invalid triangulations, out-of-range flags.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A denominator (or a 1+y_k mutation factor) vanished at the evaluation point.
struct SingularEvaluation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// (t-1)^k does not divide the polynomial with the expected multiplicity.
struct MultiplicityMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Symbolic normalization abandoned: term count above the configured cap.
struct SizeCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Newton failed to converge or produced a singular linear system.
struct SolveFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The code contradicted itself (e.g. a mutation sequence did not reproduce
// the rebuilt quiver). Always a bug, never a user error.
struct InternalConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace clutor
