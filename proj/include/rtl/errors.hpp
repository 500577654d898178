#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rtl {

/// Base of everything thrown by the library. `kind()` is a stable
/// machine-readable tag (used by the CLI error report).
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(detail), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

/// Input data violates a documented invariant.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// An algorithm failed on input that passed validation (bad conditioning,
/// step size too large, ...).
class NumericError : public Error {
public:
  using Error::Error;
};

class NonPositiveEntry : public ValidationError {
public:
  NonPositiveEntry(std::size_t index, char which)
      : ValidationError("NonPositiveEntry",
                        std::string(1, which) + "_" + std::to_string(index) +
                            " must be positive"),
        index(index), which(which) {}
  std::size_t index;  // 1-based, matching the usual subscripts
  char which;         // 'a' or 'b'
};

class BracketFailure : public NumericError {
public:
  BracketFailure(double lo, double hi, const std::string& what_failed)
      : NumericError("BracketFailure",
                     what_failed + " in [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]"),
        lo(lo), hi(hi) {}
  double lo, hi;
};

class NonPositiveWeight : public NumericError {
public:
  explicit NonPositiveWeight(std::size_t index)
      : NumericError("NonPositiveWeight",
                     "computed weight w_" + std::to_string(index) +
                         " is not positive (inaccurate eigenvalues?)"),
        index(index) {}
  std::size_t index;
};

class PoleEvaluation : public ValidationError {
public:
  explicit PoleEvaluation(std::size_t index)
      : ValidationError("PoleEvaluation",
                        "evaluation point coincides with pole " +
                            std::to_string(index)),
        index(index) {}
  std::size_t index;
};

class NonPositiveCoefficient : public NumericError {
public:
  NonPositiveCoefficient(char which, double value)
      : NumericError("NonPositiveCoefficient",
                     std::string("continued-fraction coefficient ") + which +
                         " = " + std::to_string(value) +
                         " is not positive (invalid spectral data?)"),
        which(which), value(value) {}
  char which;
  double value;
};

class DegenerateWeight : public NumericError {
public:
  explicit DegenerateWeight(std::size_t index)
      : DegenerateWeight(index, std::string()) {}
  DegenerateWeight(std::size_t index, const std::string& context)
      : NumericError("DegenerateWeight",
                     "weight w_" + std::to_string(index) +
                         " below representable floor" +
                         (context.empty() ? "" : " (" + context + ")")),
        index(index) {}
  std::size_t index;
};

class ZeroNorm : public NumericError {
public:
  explicit ZeroNorm(std::size_t n)
      : NumericError("ZeroNorm",
                     "inner product norm underflowed at degree " +
                         std::to_string(n) +
                         " (degenerate or nearly dependent nodes)"),
        n(n) {}
  std::size_t n;
};

class NonMonotoneFlow : public ValidationError {
public:
  NonMonotoneFlow()
      : ValidationError("NonMonotoneFlow",
                        "flow function must be strictly monotone on (0, inf)") {}
};

class SingularEigenvectorMatrix : public NumericError {
public:
  SingularEigenvectorMatrix()
      : NumericError("SingularEigenvectorMatrix",
                     "eigenvector matrix is numerically singular "
                     "(nearly coincident eigenvalues?)") {}
};

class PositivityLoss : public NumericError {
public:
  explicit PositivityLoss(double t)
      : NumericError("PositivityLoss",
                     "matrix data lost positivity at t = " + std::to_string(t) +
                         " (step size too large)"),
        t(t) {}
  double t;
};

class OverflowError : public NumericError {
public:
  explicit OverflowError(const std::string& detail)
      : NumericError("Overflow", detail) {}
};

}  // namespace rtl
