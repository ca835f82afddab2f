#pragma once

// Vector forward-mode AD scalar: a value plus d directional derivatives.
//
// A scalar with an empty derivative is passive: it behaves as if its
// derivative were the zero vector of whatever width it is combined with, so
// literals and constants cost no allocation. Active scalars taking part in one
// computation must share the same width.
//
// Comparisons look at value parts only. This is the convention under which an
// iterative solver (Newton's stopping test, LU pivot search) is differentiated
// as a black box.

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "diffinv/errors.hpp"
#include "diffinv/linalg.hpp"

namespace diffinv {

class Tangent {
 public:
  Tangent() = default;
  Tangent(double value) : value_(value) {}  // NOLINT: passive constant
  Tangent(double value, std::vector<double> derivative) : value_(value), dot_(std::move(derivative)) {}

  double value() const noexcept { return value_; }
  std::span<const double> derivative() const noexcept { return dot_; }
  double derivative(std::size_t i) const noexcept { return dot_.empty() ? 0.0 : dot_[i]; }
  std::size_t width() const noexcept { return dot_.size(); }
  bool passive() const noexcept { return dot_.empty(); }

  Tangent operator-() const {
    Tangent r(-value_, dot_);
    for (auto& d : r.dot_) d = -d;
    return r;
  }

  Tangent& operator+=(const Tangent& b) {
    match(b);
    value_ += b.value_;
    for (std::size_t i = 0; i < b.dot_.size(); ++i) dot_[i] += b.dot_[i];
    return *this;
  }

  Tangent& operator-=(const Tangent& b) {
    match(b);
    value_ -= b.value_;
    for (std::size_t i = 0; i < b.dot_.size(); ++i) dot_[i] -= b.dot_[i];
    return *this;
  }

  Tangent& operator*=(const Tangent& b) {
    match(b);
    for (std::size_t i = 0; i < dot_.size(); ++i) dot_[i] = dot_[i] * b.value_ + value_ * b.derivative(i);
    value_ *= b.value_;
    return *this;
  }

  Tangent& operator/=(const Tangent& b) {
    if (b.value_ == 0.0) throw DivisionByZeroValue("tangent division by a zero value part");
    match(b);
    const double q = value_ / b.value_;
    for (std::size_t i = 0; i < dot_.size(); ++i) dot_[i] = (dot_[i] - q * b.derivative(i)) / b.value_;
    value_ = q;
    return *this;
  }

  friend Tangent operator+(Tangent a, const Tangent& b) { return a += b; }
  friend Tangent operator-(Tangent a, const Tangent& b) { return a -= b; }
  friend Tangent operator*(Tangent a, const Tangent& b) { return a *= b; }
  friend Tangent operator/(Tangent a, const Tangent& b) { return a /= b; }

  friend std::partial_ordering operator<=>(const Tangent& a, const Tangent& b) { return a.value_ <=> b.value_; }
  friend bool operator==(const Tangent& a, const Tangent& b) { return a.value_ == b.value_; }

  /// acc += a*b without temporaries.
  friend void add_product(Tangent& acc, const Tangent& a, const Tangent& b) { acc.fused(a, b, 1.0); }
  /// acc -= a*b without temporaries.
  friend void sub_product(Tangent& acc, const Tangent& a, const Tangent& b) { acc.fused(a, b, -1.0); }

 private:
  // Widens a passive scalar to match an active operand; rejects mixed widths.
  void match(const Tangent& b) {
    if (b.dot_.empty()) return;
    if (dot_.empty()) {
      dot_.assign(b.dot_.size(), 0.0);
    } else if (dot_.size() != b.dot_.size()) {
      throw ContractViolation("tangent width mismatch: " + std::to_string(dot_.size()) + " vs " +
                              std::to_string(b.dot_.size()));
    }
  }

  void fused(const Tangent& a, const Tangent& b, double sign) {
    match(a);
    match(b);
    if (sign > 0) {
      value_ += a.value_ * b.value_;
    } else {
      value_ -= a.value_ * b.value_;
    }
    if (dot_.empty()) return;
    for (std::size_t i = 0; i < dot_.size(); ++i)
      dot_[i] += sign * (a.derivative(i) * b.value_ + a.value_ * b.derivative(i));
  }

  double value_ = 0.0;
  std::vector<double> dot_;
};

inline double value_of(const Tangent& x) { return x.value(); }
inline std::uint64_t flop_weight(const Tangent& x) { return 1 + 2 * x.width(); }

/// d sqrt(u) = du / (2 sqrt(u)); sqrt(0) with a nonzero tangent has no derivative.
Tangent sqrt(const Tangent& u);

/// Constant with an explicit all-zero derivative of the given width.
Tangent lift(double c, std::size_t width);

/// Component i gets value x0[i] and the i-th Cartesian basis vector as
/// derivative (seed matrix = identity).
BasicVector<Tangent> seed(const StateVector& x0);

StateVector values(const BasicVector<Tangent>& x);

/// Row i holds the derivative of component i; with a seed() input this is the
/// Jacobian d(output)/d(seeded input).
DenseMatrix derivatives(const BasicVector<Tangent>& x, std::size_t width);

}  // namespace diffinv
