#pragma once

#include <cstddef>
#include <vector>

#include "diffinv/linalg.hpp"

namespace diffinv {

/// LIFO stack of n x n Jacobians stored back to back in one buffer.
class Tape {
 public:
  Tape() = default;
  /// Reserves room for `expected_entries` matrices so the buffer never grows
  /// past what is pushed.
  Tape(std::size_t n, std::size_t expected_entries);

  void push(const DenseMatrix& jacobian);

  /// View of the most recently pushed matrix; valid until the next push/pop.
  MatrixView<double> top() const;
  DenseMatrix pop();
  void discard_top();

  std::size_t size() const noexcept { return n_ == 0 ? 0 : storage_.size() / (n_ * n_); }
  bool empty() const noexcept { return storage_.empty(); }
  std::size_t dim() const noexcept { return n_; }

  /// Bytes held: the reserved matrix buffer plus the Tape object itself.
  std::size_t bytes() const noexcept { return storage_.capacity() * sizeof(double) + sizeof(Tape); }

 private:
  std::size_t n_ = 0;
  std::vector<double> storage_;
};

}  // namespace diffinv
