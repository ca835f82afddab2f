#pragma once

// Implicit Euler with an inner Newton iteration.
//
// Step i (t_i = i*dt, dt = t_final/m) solves
//   F(x_i, x_{i-1}, dt) = x_i - x_{i-1} - dt*G(t_i, x_i) = 0
// starting Newton from x_{i-1}. Everything is generic over the scalar type so
// the whole integrator, Newton loop and LU included, can run over Tangent.

#include <cstddef>
#include <functional>

#include "diffinv/errors.hpp"
#include "diffinv/linalg.hpp"
#include "diffinv/ode.hpp"
#include "diffinv/tape.hpp"

namespace diffinv {

struct IntegrationConfig {
  double t_final = 1.0;
  std::size_t m = 1000;
  double newton_tol = 1e-12;
  unsigned newton_max_iter = 50;

  double dt() const { return t_final / static_cast<double>(m); }
  void validate() const;
};

template <typename T>
struct NewtonResult {
  BasicVector<T> solution;
  unsigned iterations = 0;
  double final_residual_norm = 0.0;
};

using NewtonReport = NewtonResult<double>;

template <typename T>
BasicVector<T> residual(const OdeSystem& sys, const BasicVector<T>& x, const BasicVector<T>& x_prev, double dt,
                        double t_i) {
  detail::require_dim(x.size(), x_prev.size(), "residual");
  const BasicVector<T> g = sys.rhs(t_i, x);
  BasicVector<T> r(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) r[k] = x[k] - x_prev[k] - dt * g[k];
  return r;
}

/// dF/dx_i = I - dt * dG/dx(t_i, x).
template <typename T>
BasicMatrix<T> residual_jacobian(const OdeSystem& sys, const BasicVector<T>& x, double dt, double t_i) {
  const BasicMatrix<T> jg = sys.jacobian(t_i, x);
  const std::size_t n = jg.dim();
  BasicMatrix<T> j(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) j(r, c) = (r == c ? 1.0 : 0.0) - dt * jg(r, c);
  return j;
}

/// Newton's method for one implicit Euler step, started at x_prev. Always takes
/// at least one iteration, then stops once the residual 2-norm (value parts)
/// is <= cfg.newton_tol.
template <typename T>
NewtonResult<T> newton_solve(const OdeSystem& sys, const BasicVector<T>& x_prev, double dt, double t_i,
                             const IntegrationConfig& cfg, FlopCounter* flops = nullptr) {
  BasicVector<T> x = x_prev;
  BasicVector<T> r = residual(sys, x, x_prev, dt, t_i);
  for (unsigned it = 1;; ++it) {
    for (auto& v : r) v = -v;
    const auto lu = lu_factor(residual_jacobian(sys, x, dt, t_i), flops);
    const BasicVector<T> dx = lu_solve(lu, r, flops);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = x[k] + dx[k];
    r = residual(sys, x, x_prev, dt, t_i);

    const double norm = value_norm2(r);
    if (!std::isfinite(norm)) throw NoConvergence(it, norm);
    if (norm <= cfg.newton_tol) return {std::move(x), it, norm};
    if (it >= cfg.newton_max_iter) throw NoConvergence(it, norm);
  }
}

template <typename T>
using StepObserver = std::function<void(std::size_t step, double t_i, const NewtonResult<T>& report)>;

/// x_m = E(t_final, m, x0). The observer, if set, sees every converged step.
/// Numerical errors are rethrown annotated with the failing step index.
template <typename T>
BasicVector<T> integrate(const OdeSystem& sys, BasicVector<T> x0, const IntegrationConfig& cfg,
                         FlopCounter* flops = nullptr, const StepObserver<T>& observer = {}) {
  cfg.validate();
  detail::require_dim(sys.dim(), x0.size(), "integrate");
  if (!all_finite(x0)) throw ContractViolation("integrate: initial state has non-finite entries");

  const double dt = cfg.dt();
  BasicVector<T> x = std::move(x0);
  for (std::size_t i = 1; i <= cfg.m; ++i) {
    const double t_i = static_cast<double>(i) * dt;
    try {
      NewtonResult<T> report = newton_solve(sys, x, dt, t_i, cfg, flops);
      if (observer) observer(i, t_i, report);
      x = std::move(report.solution);
    } catch (NumericalError& e) {
      e.set_step(i);
      throw;
    }
  }
  return x;
}

inline StateVector integrate(const OdeSystem& sys, const StateVector& x0, const IntegrationConfig& cfg,
                             FlopCounter* flops = nullptr, const StepObserver<double>& observer = {}) {
  return integrate<double>(sys, x0, cfg, flops, observer);
}

struct RecordedTrajectory {
  StateVector x_final;
  Tape tape;
};

/// Same trajectory as integrate(); additionally pushes dF/dx_i evaluated at
/// each converged x_i, so the tape pops in order i = m, ..., 1.
RecordedTrajectory integrate_recording(const OdeSystem& sys, const StateVector& x0, const IntegrationConfig& cfg,
                                       FlopCounter* flops = nullptr);

}  // namespace diffinv
