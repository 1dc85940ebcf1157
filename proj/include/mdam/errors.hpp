#pragma once

#include <stdexcept>
#include <string>

namespace mdam {

struct InvalidTensor : std::runtime_error {
  explicit InvalidTensor(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Signals element inversion; triggers step cut-back upstream.
struct NonPositiveDefinite : std::runtime_error {
  explicit NonPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

struct StateOutOfRange : std::runtime_error {
  explicit StateOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

// Local Newton non-convergence; upstream signal for global step cut-back.
struct LocalDivergence : std::runtime_error {
  explicit LocalDivergence(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystem : std::runtime_error {
  explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct StepFailure : std::runtime_error {
  explicit StepFailure(const std::string& what) : std::runtime_error(what) {}
};

struct CalibrationError : std::runtime_error {
  explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mdam
