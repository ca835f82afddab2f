#include <doctest.h>

#include <cmath>

#include "diffinv/euler.hpp"
#include "diffinv/ode.hpp"
#include "oracles.hpp"

using namespace diffinv;

namespace {

// G = 0, but records the times it is evaluated at.
class TimeProbe final : public OdeSystemBase<TimeProbe> {
 public:
  std::size_t dim() const override { return 1; }

  template <typename T>
  BasicVector<T> eval_rhs(double t, const BasicVector<T>&) const {
    times.push_back(t);
    return BasicVector<T>(1, T(0.0));
  }
  template <typename T>
  BasicMatrix<T> eval_jacobian(double, const BasicVector<T>&) const {
    return BasicMatrix<T>(1);
  }

  mutable std::vector<double> times;
};

IntegrationConfig config(double t, std::size_t m) {
  IntegrationConfig cfg;
  cfg.t_final = t;
  cfg.m = m;
  return cfg;
}

}  // namespace

TEST_SUITE("euler") {

TEST_CASE("IntegrationConfig validation") {
  CHECK_NOTHROW(IntegrationConfig{}.validate());
  CHECK(IntegrationConfig{}.newton_tol == 1e-12);
  CHECK(IntegrationConfig{}.newton_max_iter == 50);
  CHECK_THROWS_AS((IntegrationConfig{1.0, 0}.validate()), ContractViolation);
  CHECK_THROWS_AS((IntegrationConfig{0.0, 10}.validate()), ContractViolation);
  CHECK_THROWS_AS((IntegrationConfig{1.0, 10, 0.0}.validate()), ContractViolation);
  CHECK_THROWS_AS((IntegrationConfig{1.0, 10, 1e-12, 0}.validate()), ContractViolation);
  CHECK(IntegrationConfig{2.0, 8}.dt() == 0.25);
}

TEST_CASE("residual") {
  const GeneralizedLotkaVolterra zero(make_zero_glv(3));
  const StateVector x{1, 2, 3};
  CHECK(residual(zero, x, x, 0.1, 0.1) == StateVector(3, 0.0));

  const LotkaVolterra2 lv2;
  const StateVector r = residual(lv2, StateVector{1, 1}, StateVector{1, 1}, 1e-3, 1e-3);
  CHECK(r[0] == doctest::Approx(-6e-4).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(5e-4).epsilon(1e-12));
}

TEST_CASE("residual_jacobian") {
  const GeneralizedLotkaVolterra zero(make_zero_glv(3));
  CHECK(residual_jacobian(zero, StateVector{1, 2, 3}, 0.1, 0.1) == DenseMatrix::identity(3));

  const LotkaVolterra2 lv2;
  const DenseMatrix j = residual_jacobian(lv2, StateVector{1, 1}, 1e-3, 1e-3);
  const DenseMatrix want{{0.9994, 5e-4}, {-2.5e-4, 1.0005}};
  CHECK(oracle::max_abs_diff(j.entries(), want.entries()) <= 1e-15);

  const GeneralizedLotkaVolterra glv(make_random_glv(6, 4));
  const StateVector x_prev(6, 1.0);
  std::mt19937_64 gen(3);
  const StateVector x = oracle::random_vector(6, gen, 0.5, 1.5);
  const DenseMatrix fd = oracle::central_differences(
      [&](const StateVector& y) { return residual(glv, y, x_prev, 0.05, 0.05); }, x, 1e-6);
  CHECK(oracle::max_abs_diff(residual_jacobian(glv, x, 0.05, 0.05).entries(), fd.entries()) <= 1e-6);
}

TEST_CASE("newton_solve") {
  const IntegrationConfig cfg;
  const GeneralizedLotkaVolterra zero(make_zero_glv(2));
  const auto z = newton_solve(zero, StateVector{0.5, 2.0}, 0.1, 0.1, cfg);
  CHECK(z.solution == StateVector{0.5, 2.0});
  CHECK(z.iterations <= 1);

  // Affine residual: one Newton step is exact, x_1 = x_0 / (1 - lambda dt).
  const GeneralizedLotkaVolterra linear(make_linear_glv(-1.0));
  const auto l = newton_solve(linear, StateVector{1.0}, 0.1, 0.1, cfg);
  CHECK(l.solution[0] == doctest::Approx(1.0 / 1.1).epsilon(1e-15));
  CHECK(l.iterations == 1);

  const LotkaVolterra2 lv2;
  const auto r = newton_solve(lv2, StateVector{1, 1}, 1e-3, 1e-3, cfg);
  CHECK(r.iterations <= 5);
  CHECK(r.final_residual_norm <= cfg.newton_tol);
  CHECK(value_norm2(residual(lv2, r.solution, StateVector{1, 1}, 1e-3, 1e-3)) == r.final_residual_norm);
}

TEST_CASE("newton_solve failures") {
  const LotkaVolterra2 lv2;
  IntegrationConfig capped;
  capped.newton_max_iter = 1;
  try {
    newton_solve(lv2, StateVector{1, 1}, 0.5, 0.5, capped);
    FAIL("expected NoConvergence");
  } catch (const NoConvergence& e) {
    CHECK(e.iterations() == 1);
    CHECK(e.residual() > capped.newton_tol);
  }

  // dF/dx = I - dt*diag(10, 0) is rank deficient at dt = 0.1.
  GlvParams p = make_zero_glv(2);
  p.r[0] = 10.0;
  const GeneralizedLotkaVolterra singular(p);
  CHECK_THROWS_AS(newton_solve(singular, StateVector{1, 1}, 0.1, 0.1, IntegrationConfig{}), SingularMatrix);
}

TEST_CASE("integrate") {
  const GeneralizedLotkaVolterra zero(make_zero_glv(3));
  CHECK(integrate(zero, StateVector{1, -2, 3}, config(1.0, 20)) == StateVector{1, -2, 3});

  const LotkaVolterra2 lv2;
  const StateVector x = integrate(lv2, StateVector{1, 1}, config(1.0, 1000));
  // High-accuracy reference solution at t = 1 (RK45, tol 1e-12); implicit
  // Euler with dt = 1e-3 sits within O(dt) of it.
  CHECK(std::abs(x[0] - 2.00379814) <= 1e-3);
  CHECK(std::abs(x[1] - 0.67456912) <= 1e-3);
  CHECK(std::abs(x[0] - 2.00379814) >= 1e-5);

  for (double lambda : {-1.0, -3.0, 0.4}) {
    const GeneralizedLotkaVolterra linear(make_linear_glv(lambda));
    for (std::size_t m : {1u, 10u, 1000u}) {
      const double got = integrate(linear, StateVector{2.0}, config(1.0, m))[0];
      const double want = oracle::linear_euler_state(lambda, 1.0, m, 2.0);
      CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
    }
  }

  CHECK_THROWS_AS(integrate(lv2, StateVector{1, 1, 1}, config(1.0, 10)), ContractViolation);
  CHECK_THROWS_AS(integrate(lv2, StateVector{1, NAN}, config(1.0, 10)), ContractViolation);
}

TEST_CASE("integrate evaluates G at t_i = i*dt") {
  const TimeProbe probe;
  integrate(probe, StateVector{1.0}, config(2.0, 4));
  std::vector<double> distinct;
  for (double t : probe.times)
    if (distinct.empty() || distinct.back() != t) distinct.push_back(t);
  CHECK(distinct == std::vector<double>{0.5, 1.0, 1.5, 2.0});
}

TEST_CASE("integrate annotates failures with the step index") {
  const LotkaVolterra2 lv2;
  IntegrationConfig cfg = config(1.0, 2);
  cfg.newton_max_iter = 1;
  try {
    integrate(lv2, StateVector{1, 1}, cfg);
    FAIL("expected NoConvergence");
  } catch (const NoConvergence& e) {
    REQUIRE(e.step().has_value());
    CHECK(*e.step() == 1);
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
}

TEST_CASE("every accepted step satisfies the Newton tolerance") {
  const GeneralizedLotkaVolterra glv(make_random_glv(8, 2));
  const IntegrationConfig cfg = config(1.0, 200);
  std::size_t steps = 0;
  StateVector prev(8, 1.0);
  integrate(glv, prev, cfg, nullptr, [&](std::size_t i, double t_i, const NewtonReport& rep) {
    ++steps;
    CHECK(i == steps);
    CHECK(rep.final_residual_norm <= 1e-12);
    CHECK(value_norm2(residual(glv, rep.solution, prev, cfg.dt(), t_i)) == rep.final_residual_norm);
    prev = rep.solution;
  });
  CHECK(steps == 200);
}

TEST_CASE("implicit Euler is first order on dx/dt = -x") {
  const GeneralizedLotkaVolterra linear(make_linear_glv(-1.0));
  double previous = 0.0;
  for (std::size_t m : {100u, 200u, 400u, 800u}) {
    const double err = std::abs(integrate(linear, StateVector{1.0}, config(1.0, m))[0] - std::exp(-1.0));
    if (previous > 0.0) {
      CHECK(previous / err >= 1.8);
      CHECK(previous / err <= 2.2);
    }
    previous = err;
  }
}

TEST_CASE("integrate_recording") {
  const LotkaVolterra2 lv2;
  auto rec3 = integrate_recording(lv2, StateVector{1, 1}, config(0.3, 3));
  CHECK(rec3.tape.size() == 3);
  CHECK(rec3.tape.dim() == 2);

  const GeneralizedLotkaVolterra zero(make_zero_glv(3));
  auto rec_zero = integrate_recording(zero, StateVector{1, 2, 3}, config(1.0, 5));
  while (!rec_zero.tape.empty()) CHECK(rec_zero.tape.pop() == DenseMatrix::identity(3));

  const IntegrationConfig cfg = config(1.0, 1000);
  auto rec = integrate_recording(lv2, StateVector{1, 1}, cfg);
  CHECK(rec.x_final == integrate(lv2, StateVector{1, 1}, cfg));
  CHECK(rec.tape.pop() == residual_jacobian(lv2, rec.x_final, cfg.dt(), cfg.t_final));
}

TEST_CASE("tape pops in reverse step order") {
  const GeneralizedLotkaVolterra glv(make_random_glv(4, 12));
  const IntegrationConfig cfg = config(1.0, 25);
  std::vector<DenseMatrix> pushed;
  integrate(glv, StateVector(4, 1.0), cfg, nullptr, [&](std::size_t, double t_i, const NewtonReport& rep) {
    pushed.push_back(residual_jacobian(glv, rep.solution, cfg.dt(), t_i));
  });
  auto rec = integrate_recording(glv, StateVector(4, 1.0), cfg);
  for (std::size_t i = pushed.size(); i-- > 0;) CHECK(rec.tape.pop() == pushed[i]);
  CHECK(rec.tape.empty());
  CHECK_THROWS_AS(rec.tape.pop(), ContractViolation);
}

TEST_CASE("tape memory is m*n^2 reals plus bounded overhead") {
  for (std::size_t n : {8u, 16u}) {
    for (std::size_t m : {10u, 100u}) {
      const GeneralizedLotkaVolterra glv(make_random_glv(n, 1));
      const auto rec = integrate_recording(glv, StateVector(n, 1.0), config(1.0, m));
      const double payload = static_cast<double>(m * n * n * sizeof(double));
      CHECK(static_cast<double>(rec.tape.bytes()) >= payload);
      CHECK(static_cast<double>(rec.tape.bytes()) <= 1.1 * payload);
    }
  }
}

}  // TEST_SUITE
