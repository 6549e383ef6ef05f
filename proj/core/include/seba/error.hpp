#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace seba {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates the precondition of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested computation exceeds the enumeration or memory budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Factorization gave up before splitting a composite.
class UnfactoredError : public Error {
 public:
  UnfactoredError(std::uint64_t n, std::uint64_t cofactor)
      : Error("could not factor " + std::to_string(n) +
              " (stuck on cofactor " + std::to_string(cofactor) + ")"),
        n_(n),
        cofactor_(cofactor) {}
  std::uint64_t n() const noexcept { return n_; }
  std::uint64_t cofactor() const noexcept { return cofactor_; }

 private:
  std::uint64_t n_;
  std::uint64_t cofactor_;
};

/// A spectral parameter sits on (or within the safety margin of) a point of
/// the spectrum, so a term of the sum blows up.
class NearSingularError : public DomainError {
 public:
  NearSingularError(double lambda, double offending)
      : DomainError("lambda = " + format(lambda) +
                    " is too close to the spectral value " + format(offending)),
        lambda_(lambda),
        offending_(offending) {}
  double lambda() const noexcept { return lambda_; }
  double offending_value() const noexcept { return offending_; }

 private:
  static std::string format(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }
  double lambda_;
  double offending_;
};

/// Evaluation at a pole. Carries the residue when it is known.
class PoleError : public DomainError {
 public:
  PoleError(const std::string& what, double location,
            std::optional<double> residue = std::nullopt)
      : DomainError(what), location_(location), residue_(residue) {}
  double location() const noexcept { return location_; }
  std::optional<double> residue() const noexcept { return residue_; }

 private:
  double location_;
  std::optional<double> residue_;
};

/// Broken internal invariant (e.g. a root that should be bracketed is not).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace seba
