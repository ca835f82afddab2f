#include "diffinv/inversion.hpp"

#include <string>

#include "diffinv/tangent.hpp"

namespace diffinv {

namespace {

const StateVector& rhs_or_final(const std::optional<StateVector>& v, const StateVector& x_final) {
  const StateVector& rhs = v ? *v : x_final;
  detail::require_dim(x_final.size(), rhs.size(), "differential inverse: v");
  if (!all_finite(rhs)) throw ContractViolation("differential inverse: v has non-finite entries");
  return rhs;
}

// Solves E' w = v, tagging a singular E' with the algorithm that produced it.
StateVector solve_with_jacobian(const DenseMatrix& jacobian, const StateVector& v, FlopCounter* flops,
                                Algorithm algorithm) {
  try {
    return lu_solve(lu_factor(jacobian, flops), v, flops);
  } catch (NumericalError& e) {
    e.set_stage(std::string(to_string(algorithm)) + ": E' is not invertible");
    throw;
  }
}

template <typename Fn>
auto staged(Algorithm algorithm, const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (NumericalError& e) {
    e.set_stage(std::string(to_string(algorithm)) + ": " + stage);
    throw;
  }
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::blackbox:
      return "blackbox";
    case Algorithm::partial:
      return "partial";
    case Algorithm::full:
      return "full";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "blackbox") return Algorithm::blackbox;
  if (name == "partial") return Algorithm::partial;
  if (name == "full") return Algorithm::full;
  return std::nullopt;
}

AccumulatedJacobian jacobian_tangent(const OdeSystem& sys, const StateVector& x0, const IntegrationConfig& cfg,
                                 FlopCounter* flops) {
  detail::require_dim(sys.dim(), x0.size(), "jacobian_tangent");
  const BasicVector<Tangent> xm = integrate<Tangent>(sys, seed(x0), cfg, flops);
  return {values(xm), derivatives(xm, x0.size())};
}

InversionResult diffinv_blackbox(const OdeSystem& sys, const StateVector& x0, const std::optional<StateVector>& v,
                                 const IntegrationConfig& cfg) {
  InversionResult result;
  FlopCounter cost;
  auto [x_final, jacobian] =
      staged(Algorithm::blackbox, "tangent integration", [&] { return jacobian_tangent(sys, x0, cfg, &cost); });
  result.w = solve_with_jacobian(jacobian, rhs_or_final(v, x_final), &cost, Algorithm::blackbox);
  result.x_final = std::move(x_final);
  result.inversion_cost = cost;
  result.total_cost = cost;
  return result;
}

AccumulatedJacobian jacobian_partial(const OdeSystem& sys, const StateVector& x0, const IntegrationConfig& cfg,
                                 FlopCounter* primal, FlopCounter* inversion) {
  cfg.validate();
  const double dt = cfg.dt();
  DenseMatrix jacobian = DenseMatrix::identity(sys.dim());
  StateVector x_final = integrate(sys, x0, cfg, primal, [&](std::size_t, double t_i, const NewtonReport& report) {
    const auto lu = lu_factor(residual_jacobian(sys, report.solution, dt, t_i), inversion);
    jacobian = lu_solve_multi(lu, jacobian, inversion);
  });
  return {std::move(x_final), std::move(jacobian)};
}

InversionResult diffinv_partial(const OdeSystem& sys, const StateVector& x0, const std::optional<StateVector>& v,
                                const IntegrationConfig& cfg) {
  FlopCounter primal;
  FlopCounter inversion;
  auto [x_final, jacobian] = staged(Algorithm::partial, "step Jacobian propagation",
                                    [&] { return jacobian_partial(sys, x0, cfg, &primal, &inversion); });

  InversionResult result;
  result.w = solve_with_jacobian(jacobian, rhs_or_final(v, x_final), &inversion, Algorithm::partial);
  result.x_final = std::move(x_final);
  result.inversion_cost = inversion;
  result.total_cost = primal + inversion;
  return result;
}

InversionResult diffinv_full(const OdeSystem& sys, const StateVector& x0, const std::optional<StateVector>& v,
                             const IntegrationConfig& cfg) {
  FlopCounter primal;
  FlopCounter inversion;
  RecordedTrajectory run =
      staged(Algorithm::full, "recording integration", [&] { return integrate_recording(sys, x0, cfg, &primal); });

  InversionResult result;
  result.tape_bytes = run.tape.bytes();
  StateVector w = rhs_or_final(v, run.x_final);
  while (!run.tape.empty()) {
    w = mat_vec(run.tape.top(), w, &inversion);
    run.tape.discard_top();
  }
  result.w = std::move(w);
  result.x_final = std::move(run.x_final);
  result.inversion_cost = inversion;
  result.total_cost = primal + inversion;
  return result;
}

InversionResult differential_inverse(Algorithm algorithm, const OdeSystem& sys, const StateVector& x0,
                                     const std::optional<StateVector>& v, const IntegrationConfig& cfg) {
  switch (algorithm) {
    case Algorithm::blackbox:
      return diffinv_blackbox(sys, x0, v, cfg);
    case Algorithm::partial:
      return diffinv_partial(sys, x0, v, cfg);
    case Algorithm::full:
      return diffinv_full(sys, x0, v, cfg);
  }
  throw ContractViolation("unknown algorithm");
}

DenseMatrix fd_jacobian(const OdeSystem& sys, const StateVector& x0, const IntegrationConfig& cfg, double h) {
  if (!(h > 0.0)) throw ContractViolation("fd_jacobian: h must be > 0");
  const std::size_t n = x0.size();
  DenseMatrix jac(n);
  for (std::size_t j = 0; j < n; ++j) {
    StateVector plus = x0;
    StateVector minus = x0;
    plus[j] += h;
    minus[j] -= h;
    const StateVector ep = integrate(sys, plus, cfg);
    const StateVector em = integrate(sys, minus, cfg);
    for (std::size_t i = 0; i < n; ++i) jac(i, j) = (ep[i] - em[i]) / (2.0 * h);
  }
  return jac;
}

}  // namespace diffinv
