#pragma once
// Error types shared by all gps modules.

#include <stdexcept>
#include <string>

namespace gps {

// Input outside a type's or operation's domain (bad parameter, non-PD matrix, ...).
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// The GPS condition sigma11 = 1 cannot be met for the given squeezer pair.
struct NoSolutionError : std::domain_error {
  explicit NoSolutionError(const std::string& what) : std::domain_error(what) {}
};

// A closed form was requested away from the condition it is valid at.
struct ConditionViolated : std::domain_error {
  explicit ConditionViolated(const std::string& what) : std::domain_error(what) {}
};

// Quadrature self-check failed: the integrand violates the grid's decay assumptions.
struct NonConverged : std::runtime_error {
  explicit NonConverged(const std::string& what) : std::runtime_error(what) {}
};

// Truncated Fock expansion lost more tail mass than allowed.
struct TruncationError : std::runtime_error {
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Herald probability below the representable floor (1e-300).
struct ZeroProbability : std::runtime_error {
  explicit ZeroProbability(const std::string& what) : std::runtime_error(what) {}
};

// Probabilities below this floor are reported as ZeroProbability rather than
// denormal noise.
inline constexpr double kProbabilityFloor = 1e-300;

// State normalization degenerated (odd cat with vanishing amplitude).
struct DegenerateState : std::runtime_error {
  explicit DegenerateState(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gps
