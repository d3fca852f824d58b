#ifndef TRIDE_ERRORS_HPP
#define TRIDE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tride {

/// Input vector too short to normalize (norm below the 1e-12 cutoff).
struct DegenerateVector : std::runtime_error {
  explicit DegenerateVector(const std::string& what) : std::runtime_error(what) {}
};

/// Fewer correspondence normals than an estimator needs.
struct InsufficientEvidence : std::runtime_error {
  explicit InsufficientEvidence(const std::string& what) : std::runtime_error(what) {}
};

/// A linear solve could not produce a usable step.
struct SolveFailure : std::runtime_error {
  explicit SolveFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Scene generation exhausted its retry budget.
struct GenerationFailure : std::runtime_error {
  explicit GenerationFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Two containers that must describe the same edge set do not.
struct InputMismatch : std::runtime_error {
  explicit InputMismatch(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tride

#endif  // TRIDE_ERRORS_HPP
