#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "diffinv/linalg.hpp"
#include "diffinv/tangent.hpp"

namespace diffinv {

/// Right-hand side G(t, x) of dx/dt = G(t, x) together with its analytic
/// Jacobian dG/dx, evaluable over plain and tangent scalars.
class OdeSystem {
 public:
  virtual ~OdeSystem() = default;

  virtual std::size_t dim() const = 0;

  virtual StateVector rhs(double t, const StateVector& x) const = 0;
  virtual BasicVector<Tangent> rhs(double t, const BasicVector<Tangent>& x) const = 0;

  virtual DenseMatrix jacobian(double t, const StateVector& x) const = 0;
  virtual BasicMatrix<Tangent> jacobian(double t, const BasicVector<Tangent>& x) const = 0;
};

/// Implements both scalar overloads of OdeSystem from one pair of member
/// templates `eval_rhs<T>` / `eval_jacobian<T>` on Derived.
template <typename Derived>
class OdeSystemBase : public OdeSystem {
 public:
  StateVector rhs(double t, const StateVector& x) const override { return self().eval_rhs(t, checked(x)); }
  BasicVector<Tangent> rhs(double t, const BasicVector<Tangent>& x) const override {
    return self().eval_rhs(t, checked(x));
  }
  DenseMatrix jacobian(double t, const StateVector& x) const override {
    return self().eval_jacobian(t, checked(x));
  }
  BasicMatrix<Tangent> jacobian(double t, const BasicVector<Tangent>& x) const override {
    return self().eval_jacobian(t, checked(x));
  }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }

  template <typename T>
  const BasicVector<T>& checked(const BasicVector<T>& x) const {
    detail::require_dim(dim(), x.size(), "OdeSystem");
    return x;
  }
};

/// Two-species predator-prey model:
///   dx0/dt =  1.1 x0 - 0.5 x0 x1   (prey)
///   dx1/dt = -0.75 x1 + 0.25 x0 x1 (predators)
class LotkaVolterra2 final : public OdeSystemBase<LotkaVolterra2> {
 public:
  std::size_t dim() const override { return 2; }

  template <typename T>
  BasicVector<T> eval_rhs(double /*t*/, const BasicVector<T>& x) const {
    BasicVector<T> r(2);
    r[0] = 1.1 * x[0] - 0.5 * x[0] * x[1];
    r[1] = -0.75 * x[1] + 0.25 * x[0] * x[1];
    return r;
  }

  template <typename T>
  BasicMatrix<T> eval_jacobian(double /*t*/, const BasicVector<T>& x) const {
    BasicMatrix<T> j(2);
    j(0, 0) = 1.1 - 0.5 * x[1];
    j(0, 1) = -0.5 * x[0];
    j(1, 0) = 0.25 * x[1];
    j(1, 1) = -0.75 + 0.25 * x[0];
    return j;
  }
};

/// Growth rates r and interaction matrix A of dx_k/dt = x_k (r + A x)_k.
struct GlvParams {
  StateVector r;
  DenseMatrix a;

  std::size_t dim() const noexcept { return r.size(); }
  void validate() const;

  friend bool operator==(const GlvParams&, const GlvParams&) = default;
};

/// Generalized Lotka-Volterra system, scalable in n.
class GeneralizedLotkaVolterra final : public OdeSystemBase<GeneralizedLotkaVolterra> {
 public:
  explicit GeneralizedLotkaVolterra(GlvParams params);

  std::size_t dim() const override { return params_.dim(); }
  const GlvParams& params() const noexcept { return params_; }

  template <typename T>
  BasicVector<T> eval_rhs(double /*t*/, const BasicVector<T>& x) const {
    const std::size_t n = dim();
    BasicVector<T> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = x[k] * growth(k, x);
    return out;
  }

  template <typename T>
  BasicMatrix<T> eval_jacobian(double /*t*/, const BasicVector<T>& x) const {
    const std::size_t n = dim();
    BasicMatrix<T> j(n);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t c = 0; c < n; ++c) j(k, c) = x[k] * params_.a(k, c);
      j(k, k) += growth(k, x);
    }
    return j;
  }

 private:
  // r_k + (A x)_k
  template <typename T>
  T growth(std::size_t k, const BasicVector<T>& x) const {
    T f = params_.r[k];
    for (std::size_t c = 0; c < dim(); ++c) add_product(f, T(params_.a(k, c)), x[c]);
    return f;
  }

  GlvParams params_;
};

/// Deterministic random GLV instance: A = -I + P/(2n) with P uniform in
/// [-1, 1], r uniform in [0, 0.5]. Draws r first, then P row-major, from a
/// 64-bit Mersenne twister.
GlvParams make_random_glv(std::size_t n, std::uint64_t seed);

/// The 2-species model written as a GLV instance.
GlvParams lv2_as_glv();

/// dx/dt = lambda * x componentwise (r = lambda, A = 0).
GlvParams make_linear_glv(double lambda, std::size_t n = 1);

/// G = 0.
GlvParams make_zero_glv(std::size_t n);

// Plain-text parameter file: n, then r (n values), then A row-major (n*n
// values), whitespace separated.
GlvParams read_glv_params(std::istream& in);
void write_glv_params(std::ostream& out, const GlvParams& params);
GlvParams load_glv_params(const std::filesystem::path& path);
void save_glv_params(const std::filesystem::path& path, const GlvParams& params);

}  // namespace diffinv
