#include "diffinv/euler.hpp"

#include <cmath>

namespace diffinv {

void IntegrationConfig::validate() const {
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ContractViolation("t_final must be finite and > 0");
  if (m < 1) throw ContractViolation("m must be >= 1");
  if (!(newton_tol > 0.0)) throw ContractViolation("newton_tol must be > 0");
  if (newton_max_iter < 1) throw ContractViolation("newton_max_iter must be >= 1");
}

RecordedTrajectory integrate_recording(const OdeSystem& sys, const StateVector& x0, const IntegrationConfig& cfg,
                                       FlopCounter* flops) {
  cfg.validate();
  Tape tape(sys.dim(), cfg.m);
  const double dt = cfg.dt();
  StateVector x = integrate(sys, x0, cfg, flops, [&](std::size_t, double t_i, const NewtonReport& report) {
    tape.push(residual_jacobian(sys, report.solution, dt, t_i));
  });
  return {std::move(x), std::move(tape)};
}

}  // namespace diffinv
