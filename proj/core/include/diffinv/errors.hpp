#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace diffinv {

/// Thrown when a caller breaks a precondition (dimension mismatch, bad config).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for failures of the numerics themselves. Carries the implicit Euler
/// step at which the failure happened once the integrator has annotated it.
class NumericalError : public std::exception {
 public:
  explicit NumericalError(std::string message) : message_(std::move(message)) { rebuild(); }

  const char* what() const noexcept override { return what_.c_str(); }

  const std::string& message() const noexcept { return message_; }
  std::optional<std::size_t> step() const noexcept { return step_; }

  void set_step(std::size_t step) {
    step_ = step;
    rebuild();
  }

  void set_stage(std::string stage) {
    stage_ = std::move(stage);
    rebuild();
  }

 private:
  void rebuild() {
    what_.clear();
    if (!stage_.empty()) what_ += stage_ + ": ";
    if (step_) what_ += "step " + std::to_string(*step_) + ": ";
    what_ += message_;
  }

  std::string message_;
  std::string stage_;
  std::optional<std::size_t> step_;
  std::string what_;
};

/// A pivot fell below the singularity threshold during LU factorization.
class SingularMatrix : public NumericalError {
 public:
  SingularMatrix(std::size_t column, double pivot)
      : NumericalError("singular matrix: pivot " + std::to_string(pivot) + " in column " +
                       std::to_string(column)),
        column_(column),
        pivot_(pivot) {}

  std::size_t column() const noexcept { return column_; }
  double pivot() const noexcept { return pivot_; }

 private:
  std::size_t column_;
  double pivot_;
};

/// Newton's method hit its iteration cap (or produced a non-finite residual).
class NoConvergence : public NumericalError {
 public:
  NoConvergence(unsigned iterations, double residual)
      : NumericalError("Newton did not converge after " + std::to_string(iterations) +
                       " iterations (residual norm " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  unsigned iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  unsigned iterations_;
  double residual_;
};

/// Division by a tangent scalar whose value part is zero, or sqrt(0) with a
/// nonzero tangent.
class DivisionByZeroValue : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace diffinv
