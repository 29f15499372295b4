#pragma once

#include <stdexcept>
#include <string>

namespace prefvec {

/// Raised when a caller breaks a documented precondition (dimension
/// mismatch, empty input, out-of-range parameter).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// PCA cannot be fitted on the given sample (too few points or no variance).
class FitUnavailable : public std::runtime_error {
 public:
  explicit FitUnavailable(const std::string& what) : std::runtime_error(what) {}
};

class DuplicateId : public std::runtime_error {
 public:
  explicit DuplicateId(const std::string& what) : std::runtime_error(what) {}
};

/// A metric whose denominator is empty (e.g. no session-2 turns).
class UndefinedMetric : public std::runtime_error {
 public:
  explicit UndefinedMetric(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A logged trajectory lacks the fields needed for offline replay.
class ReplayImpossible : public std::runtime_error {
 public:
  explicit ReplayImpossible(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace prefvec
