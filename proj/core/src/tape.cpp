#include "diffinv/tape.hpp"

#include "diffinv/errors.hpp"

namespace diffinv {

Tape::Tape(std::size_t n, std::size_t expected_entries) : n_(n) { storage_.reserve(n * n * expected_entries); }

void Tape::push(const DenseMatrix& jacobian) {
  if (n_ == 0) n_ = jacobian.dim();
  detail::require_dim(n_, jacobian.dim(), "Tape::push");
  const auto e = jacobian.entries();
  storage_.insert(storage_.end(), e.begin(), e.end());
}

MatrixView<double> Tape::top() const {
  if (empty()) throw ContractViolation("Tape::top on empty tape");
  const std::size_t block = n_ * n_;
  return {n_, std::span<const double>(storage_).subspan(storage_.size() - block, block)};
}

DenseMatrix Tape::pop() {
  const auto view = top();
  DenseMatrix m(n_, std::vector<double>(view.entries.begin(), view.entries.end()));
  discard_top();
  return m;
}

void Tape::discard_top() {
  if (empty()) throw ContractViolation("Tape::discard_top on empty tape");
  storage_.resize(storage_.size() - n_ * n_);
}

}  // namespace diffinv
