#pragma once

// Dense vectors and matrices, LU with partial pivoting, and multiply-add
// counting. Everything is generic over the scalar type so the same kernels run
// on double and on diffinv::Tangent.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "diffinv/errors.hpp"

namespace diffinv {

/// Real multiply-adds, triangular solves and factorizations performed inside a
/// measurement scope. Fused multiply-adds and divisions each count as one; a
/// multiply-add on a tangent scalar of width d counts as 1 + 2d.
struct FlopCounter {
  std::uint64_t multiply_adds = 0;
  std::uint64_t solves = 0;
  std::uint64_t factorizations = 0;

  FlopCounter& operator+=(const FlopCounter& other) {
    multiply_adds += other.multiply_adds;
    solves += other.solves;
    factorizations += other.factorizations;
    return *this;
  }
  friend FlopCounter operator+(FlopCounter a, const FlopCounter& b) { return a += b; }
  friend bool operator==(const FlopCounter&, const FlopCounter&) = default;
};

// Scalar hooks. Tangent provides its own overloads (found by ADL).
inline double value_of(double x) { return x; }
inline std::uint64_t flop_weight(double) { return 1; }
inline void add_product(double& acc, double a, double b) { acc += a * b; }
inline void sub_product(double& acc, double a, double b) { acc -= a * b; }

template <typename T>
class BasicVector {
 public:
  BasicVector() = default;
  explicit BasicVector(std::size_t n) : data_(n) {}
  BasicVector(std::size_t n, const T& fill) : data_(n, fill) {}
  BasicVector(std::initializer_list<T> values) : data_(values) {}
  explicit BasicVector(std::vector<T> values) : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<T> span() noexcept { return data_; }
  std::span<const T> span() const noexcept { return data_; }
  const std::vector<T>& values() const noexcept { return data_; }

  friend bool operator==(const BasicVector&, const BasicVector&) = default;

 private:
  std::vector<T> data_;
};

/// Non-owning view of a square row-major matrix.
template <typename T>
struct MatrixView {
  std::size_t n = 0;
  std::span<const T> entries;

  const T& operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

/// Square dense matrix, row-major.
template <typename T>
class BasicMatrix {
 public:
  BasicMatrix() = default;
  explicit BasicMatrix(std::size_t n) : n_(n), data_(n * n) {}
  BasicMatrix(std::size_t n, std::vector<T> row_major) : n_(n), data_(std::move(row_major)) {
    if (data_.size() != n * n) throw ContractViolation("matrix storage does not match n*n");
  }
  BasicMatrix(std::initializer_list<std::initializer_list<T>> rows) : n_(rows.size()) {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw ContractViolation("matrix rows must form a square");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  std::size_t dim() const noexcept { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::span<T> row(std::size_t i) { return std::span<T>(data_).subspan(i * n_, n_); }
  std::span<const T> row(std::size_t i) const { return std::span<const T>(data_).subspan(i * n_, n_); }
  std::span<const T> entries() const noexcept { return data_; }

  BasicVector<T> column(std::size_t j) const {
    BasicVector<T> c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_column(std::size_t j, const BasicVector<T>& c) {
    for (std::size_t i = 0; i < n_; ++i) (*this)(i, j) = c[i];
  }

  MatrixView<T> view() const noexcept { return {n_, data_}; }
  operator MatrixView<T>() const noexcept { return view(); }

  friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

using StateVector = BasicVector<double>;
using DenseMatrix = BasicMatrix<double>;

namespace detail {

inline void require_dim(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    throw ContractViolation(std::string(what) + ": dimension mismatch (" + std::to_string(expected) +
                            " vs " + std::to_string(actual) + ")");
  }
}

template <typename T>
std::uint64_t max_weight(std::span<const T> xs) {
  std::uint64_t w = 1;
  for (const auto& x : xs) w = std::max(w, flop_weight(x));
  return w;
}

inline void count(FlopCounter* flops, std::uint64_t multiply_adds) {
  if (flops) flops->multiply_adds += multiply_adds;
}

}  // namespace detail

template <typename T>
bool all_finite(const BasicVector<T>& x) {
  return std::all_of(x.begin(), x.end(), [](const T& v) { return std::isfinite(value_of(v)); });
}

/// A*x. Counts n^2 multiply-adds.
template <typename T>
BasicVector<T> mat_vec(MatrixView<T> a, const BasicVector<T>& x, FlopCounter* flops = nullptr) {
  detail::require_dim(a.n, x.size(), "mat_vec");
  const std::size_t n = a.n;
  BasicVector<T> y(n, T(0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) add_product(y[i], a(i, j), x[j]);
  if (flops) {
    detail::count(flops, n * n * std::max(detail::max_weight(a.entries), detail::max_weight(x.span())));
  }
  return y;
}

template <typename T>
BasicVector<T> mat_vec(const BasicMatrix<T>& a, const BasicVector<T>& x, FlopCounter* flops = nullptr) {
  return mat_vec(a.view(), x, flops);
}

/// A*B. Counts n^3 multiply-adds.
template <typename T>
BasicMatrix<T> mat_mat(const BasicMatrix<T>& a, const BasicMatrix<T>& b, FlopCounter* flops = nullptr) {
  detail::require_dim(a.dim(), b.dim(), "mat_mat");
  const std::size_t n = a.dim();
  BasicMatrix<T> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c(i, j) = T(0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) add_product(c(i, j), a(i, k), b(k, j));
  }
  if (flops) {
    detail::count(flops, n * n * n * std::max(detail::max_weight(a.entries()), detail::max_weight(b.entries())));
  }
  return c;
}

template <typename T>
T norm2(const BasicVector<T>& x) {
  T sum(0.0);
  for (const auto& v : x) add_product(sum, v, v);
  using std::sqrt;
  return sqrt(sum);
}

/// Euclidean norm of the value parts.
template <typename T>
double value_norm2(const BasicVector<T>& x) {
  double sum = 0.0;
  for (const auto& v : x) sum += value_of(v) * value_of(v);
  return std::sqrt(sum);
}

inline constexpr double kSingularityThreshold = 1e-14;

/// Row-pivoted LU factors packed into one matrix: strictly lower part holds
/// the unit-lower L, upper part holds U. Row i of P*A is row permutation[i] of A.
template <typename T>
class LuFactors {
 public:
  LuFactors(BasicMatrix<T> packed, std::vector<std::size_t> permutation)
      : packed_(std::move(packed)), permutation_(std::move(permutation)) {}

  std::size_t dim() const noexcept { return packed_.dim(); }
  const BasicMatrix<T>& packed() const noexcept { return packed_; }
  const std::vector<std::size_t>& permutation() const noexcept { return permutation_; }

  BasicMatrix<T> lower() const {
    BasicMatrix<T> l = BasicMatrix<T>::identity(dim());
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < i; ++j) l(i, j) = packed_(i, j);
    return l;
  }
  BasicMatrix<T> upper() const {
    BasicMatrix<T> u(dim());
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) u(i, j) = j >= i ? packed_(i, j) : T(0.0);
    return u;
  }

 private:
  BasicMatrix<T> packed_;
  std::vector<std::size_t> permutation_;
};

/// Gaussian elimination with partial (row) pivoting. Throws SingularMatrix when
/// a pivot satisfies |pivot| <= 1e-14 * max|A| (value parts).
template <typename T>
LuFactors<T> lu_factor(BasicMatrix<T> a, FlopCounter* flops = nullptr) {
  const std::size_t n = a.dim();
  double scale = 0.0;
  for (const auto& e : a.entries()) scale = std::max(scale, std::abs(value_of(e)));
  const double threshold = kSingularityThreshold * scale;
  const std::uint64_t weight = flops ? detail::max_weight(a.entries()) : 1;

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::uint64_t ops = 0;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot_row = k;
    double pivot_mag = std::abs(value_of(a(k, k)));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double mag = std::abs(value_of(a(i, k)));
      if (mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = i;
      }
    }
    if (!(pivot_mag > threshold)) throw SingularMatrix(k, value_of(a(pivot_row, k)));
    if (pivot_row != k) {
      std::swap_ranges(a.row(k).begin(), a.row(k).end(), a.row(pivot_row).begin());
      std::swap(perm[k], perm[pivot_row]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      a(i, k) = a(i, k) / a(k, k);
      const T& l = a(i, k);
      for (std::size_t j = k + 1; j < n; ++j) sub_product(a(i, j), l, a(k, j));
    }
    ops += (n - k - 1) * (n - k - 1);
  }

  if (flops) {
    flops->factorizations += 1;
    detail::count(flops, ops * weight);
  }
  return LuFactors<T>(std::move(a), std::move(perm));
}

/// Solves A*x = b from the factors of A. Counts n^2 multiply-adds (the n
/// diagonal divisions included).
template <typename T>
BasicVector<T> lu_solve(const LuFactors<T>& f, const BasicVector<T>& b, FlopCounter* flops = nullptr) {
  const std::size_t n = f.dim();
  detail::require_dim(n, b.size(), "lu_solve");
  const auto& lu = f.packed();
  const auto& perm = f.permutation();

  BasicVector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    T sum = b[perm[i]];
    for (std::size_t j = 0; j < i; ++j) sub_product(sum, lu(i, j), x[j]);
    x[i] = std::move(sum);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    T sum = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) sub_product(sum, lu(ii, j), x[j]);
    x[ii] = sum / lu(ii, ii);
  }

  if (flops) {
    flops->solves += 1;
    detail::count(flops, n * n * std::max(detail::max_weight(lu.entries()), detail::max_weight(b.span())));
  }
  return x;
}

/// Column-wise lu_solve: returns A^{-1} * B.
template <typename T>
BasicMatrix<T> lu_solve_multi(const LuFactors<T>& f, const BasicMatrix<T>& b, FlopCounter* flops = nullptr) {
  detail::require_dim(f.dim(), b.dim(), "lu_solve_multi");
  BasicMatrix<T> x(b.dim());
  for (std::size_t j = 0; j < b.dim(); ++j) x.set_column(j, lu_solve(f, b.column(j), flops));
  return x;
}

}  // namespace diffinv
