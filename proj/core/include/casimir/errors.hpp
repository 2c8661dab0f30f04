#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A non-finite or unrepresentable value appeared in an intermediate result.
class NumericalRangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// An iterative or adaptive procedure stopped before reaching its tolerance.
/// Both the last two estimates are kept so callers can report them.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double coarse, double fine)
      : std::runtime_error(what), coarse_(coarse), fine_(fine) {}

  double coarse_estimate() const noexcept { return coarse_; }
  double fine_estimate() const noexcept { return fine_; }

 private:
  double coarse_;
  double fine_;
};

}  // namespace casimir
