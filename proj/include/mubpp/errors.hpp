#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mubpp {

// Caller passed arguments that do not fit together (shapes, specs, indices).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mathematically undefined request: division by zero, unsupported dimension.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Iterative routine gave up. Carries the last estimate so callers can inspect it.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}
  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

// Bell-basis discrimination found no outcome with overlap close to 1.
class AmbiguityError : public std::runtime_error {
 public:
  AmbiguityError(const std::string& what, std::vector<double> overlaps)
      : std::runtime_error(what), overlaps_(std::move(overlaps)) {}
  const std::vector<double>& overlaps() const noexcept { return overlaps_; }

 private:
  std::vector<double> overlaps_;
};

}  // namespace mubpp
