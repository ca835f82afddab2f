#pragma once

// Differential inversion of the implicit Euler integrator: w = (E')^{-1} v with
// E' = d x_m / d x_0. Three routes with decreasing cost:
//
//   blackbox  differentiate the whole integrator (Newton included) in vector
//             tangent mode, then solve E' w = v.        O(m p n^4)
//   partial   propagate E' alongside the steps using dx_i/dx_{i-1} =
//             (dF/dx_i)^{-1}, then solve E' w = v.      O(m n^3)
//   full      record dF/dx_i on a tape and apply them to v in order
//             i = m, ..., 1; no factorization at all.   O(m n^2)

#include <cstddef>
#include <optional>
#include <string_view>

#include "diffinv/euler.hpp"
#include "diffinv/linalg.hpp"
#include "diffinv/ode.hpp"

namespace diffinv {

enum class Algorithm { blackbox, partial, full };

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct InversionResult {
  StateVector x_final;
  StateVector w;
  /// Work spent on differentiation and inversion. For blackbox this is the
  /// whole tangent run, since its primal is not separable.
  FlopCounter inversion_cost;
  FlopCounter total_cost;
  std::size_t tape_bytes = 0;
};

struct AccumulatedJacobian {
  StateVector x_final;
  DenseMatrix jacobian;
};

/// Runs the integrator over Tangent seeded with the identity and returns the
/// value part of x_m together with E'.
AccumulatedJacobian jacobian_tangent(const OdeSystem& sys, const StateVector& x0, const IntegrationConfig& cfg,
                                 FlopCounter* flops = nullptr);

/// E' propagated alongside the primal steps: X_0 = I, X_i = (dF/dx_i)^{-1} X_{i-1},
/// one LU of dF/dx_i per step reused for all n columns. Newton work is counted
/// in `primal`, the propagation in `inversion`.
AccumulatedJacobian jacobian_partial(const OdeSystem& sys, const StateVector& x0, const IntegrationConfig& cfg,
                                 FlopCounter* primal = nullptr, FlopCounter* inversion = nullptr);

// `v` defaults to x_final = E(t, m, x0) when empty.
InversionResult diffinv_blackbox(const OdeSystem& sys, const StateVector& x0, const std::optional<StateVector>& v,
                                 const IntegrationConfig& cfg);
InversionResult diffinv_partial(const OdeSystem& sys, const StateVector& x0, const std::optional<StateVector>& v,
                                const IntegrationConfig& cfg);
InversionResult diffinv_full(const OdeSystem& sys, const StateVector& x0, const std::optional<StateVector>& v,
                             const IntegrationConfig& cfg);

InversionResult differential_inverse(Algorithm algorithm, const OdeSystem& sys, const StateVector& x0,
                                     const std::optional<StateVector>& v, const IntegrationConfig& cfg);

/// Central differences of E in x0: column j = (E(x0 + h e_j) - E(x0 - h e_j)) / 2h.
DenseMatrix fd_jacobian(const OdeSystem& sys, const StateVector& x0, const IntegrationConfig& cfg, double h = 1e-6);

}  // namespace diffinv
