#pragma once

#include <stdexcept>
#include <string>

namespace oneshot {

/// Invalid arguments: dimension mismatch, out-of-range parameters, operators
/// that violate the invariants of their type.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative numerical routine did not converge or broke down.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what, std::string dump = {})
      : std::runtime_error(what), dump_(std::move(dump)) {}

  /// Optional JSON dump of the problem that failed (may be empty).
  const std::string& dump() const noexcept { return dump_; }

 private:
  std::string dump_;
};

/// A projection would remove (almost) all of the state's weight.
class DegenerateProjection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructed certificate failed one of the inequalities it is supposed
/// to satisfy. Indicates a numerical problem or a bug, never bad input.
class CertificateViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oneshot
