#pragma once

#include <stdexcept>
#include <string>

namespace ffnav {

// Query outside the domain of a gridded field.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Effect-model regression could not be solved (too few samples, degenerate feature).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Trajectory could not be scored against its mission.
class ScoringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Comparison table is missing runs.
class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed scenario, suite, sweep, model or CSV input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ffnav
