#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "diffinv/euler.hpp"
#include "diffinv/ode.hpp"
#include "oracles.hpp"

using namespace diffinv;

namespace {

double fd_mismatch(const OdeSystem& sys, const StateVector& x) {
  const DenseMatrix fd = oracle::central_differences([&](const StateVector& y) { return sys.rhs(0.0, y); }, x, 1e-6);
  return oracle::max_abs_diff(sys.jacobian(0.0, x).entries(), fd.entries());
}

}  // namespace

TEST_SUITE("ode") {

TEST_CASE("lv2 right-hand side") {
  const LotkaVolterra2 lv2;
  const StateVector at_ones = lv2.rhs(0.0, StateVector{1, 1});
  CHECK(at_ones[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(at_ones[1] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(lv2.rhs(0.0, StateVector{0, 0}) == StateVector{0, 0});
  // Interior equilibrium x0 = 0.75/0.25, x1 = 1.1/0.5.
  const StateVector eq = lv2.rhs(0.0, StateVector{3.0, 2.2});
  CHECK(std::abs(eq[0]) <= 1e-15);
  CHECK(std::abs(eq[1]) <= 1e-15);
  CHECK_THROWS_AS(lv2.rhs(0.0, StateVector{1, 2, 3}), ContractViolation);
}

TEST_CASE("lv2 Jacobian") {
  const LotkaVolterra2 lv2;
  const DenseMatrix j = lv2.jacobian(0.0, StateVector{1, 1});
  const DenseMatrix want{{0.6, -0.5}, {0.25, -0.5}};
  CHECK(oracle::max_abs_diff(j.entries(), want.entries()) <= 1e-15);
  CHECK(lv2.jacobian(0.0, StateVector{0, 0}) == DenseMatrix{{1.1, 0}, {0, -0.75}});
}

TEST_CASE("glv right-hand side") {
  const GeneralizedLotkaVolterra glv(make_random_glv(6, 2));
  CHECK(glv.rhs(0.0, StateVector(6, 0.0)) == StateVector(6, 0.0));

  const GeneralizedLotkaVolterra embedded(lv2_as_glv());
  const StateVector at_ones = embedded.rhs(0.0, StateVector{1, 1});
  CHECK(at_ones[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(at_ones[1] == doctest::Approx(-0.5).epsilon(1e-15));

  const GeneralizedLotkaVolterra linear(make_linear_glv(-0.3));
  CHECK(linear.rhs(0.0, StateVector{2.0})[0] == doctest::Approx(-0.6));

  // Component k is x_k (r_k + (A x)_k), computed here by hand.
  const GlvParams p = make_random_glv(4, 9);
  const StateVector x{0.5, 1.5, -0.25, 2.0};
  const StateVector got = GeneralizedLotkaVolterra(p).rhs(0.0, x);
  for (std::size_t k = 0; k < 4; ++k) {
    double f = p.r[k];
    for (std::size_t j = 0; j < 4; ++j) f += p.a(k, j) * x[j];
    CHECK(got[k] == doctest::Approx(x[k] * f).epsilon(1e-14));
  }
}

TEST_CASE("glv Jacobian") {
  const GlvParams p = make_random_glv(5, 3);
  const GeneralizedLotkaVolterra glv(p);
  DenseMatrix diag_r(5);
  for (std::size_t k = 0; k < 5; ++k) diag_r(k, k) = p.r[k];
  CHECK(glv.jacobian(0.0, StateVector(5, 0.0)) == diag_r);

  const GeneralizedLotkaVolterra embedded(lv2_as_glv());
  const LotkaVolterra2 lv2;
  CHECK(oracle::max_abs_diff(embedded.jacobian(0.0, StateVector{1, 1}).entries(),
                             lv2.jacobian(0.0, StateVector{1, 1}).entries()) <= 1e-15);
}

TEST_CASE("analytic Jacobians agree with central differences at 100 random states") {
  std::mt19937_64 gen(31);
  const LotkaVolterra2 lv2;
  const GeneralizedLotkaVolterra embedded(lv2_as_glv());
  const GeneralizedLotkaVolterra glv16(make_random_glv(16, 5));
  const GeneralizedLotkaVolterra glv3(make_random_glv(3, 6));
  const GeneralizedLotkaVolterra linear(make_linear_glv(-1.0, 4));
  for (const OdeSystem* sys :
       {static_cast<const OdeSystem*>(&lv2), static_cast<const OdeSystem*>(&embedded),
        static_cast<const OdeSystem*>(&glv16), static_cast<const OdeSystem*>(&glv3),
        static_cast<const OdeSystem*>(&linear)}) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) worst = std::max(worst, fd_mismatch(*sys, oracle::random_vector(sys->dim(), gen, -2, 2)));
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("glv with the lv2 embedding agrees with lv2") {
  std::mt19937_64 gen(32);
  const LotkaVolterra2 lv2;
  const GeneralizedLotkaVolterra embedded(lv2_as_glv());
  for (int i = 0; i < 100; ++i) {
    const StateVector x = oracle::random_vector(2, gen, -3, 3);
    CHECK(oracle::max_abs_diff(lv2.rhs(0.0, x).span(), embedded.rhs(0.0, x).span()) <= 1e-14);
  }
}

TEST_CASE("make_random_glv") {
  CHECK(make_random_glv(8, 42) == make_random_glv(8, 42));
  CHECK_FALSE(make_random_glv(8, 42) == make_random_glv(8, 43));
  for (std::uint64_t s = 0; s < 50; ++s) {
    const GlvParams p = make_random_glv(1, s);
    CHECK(p.a(0, 0) >= -1.5);
    CHECK(p.a(0, 0) <= -0.5);
    CHECK(p.r[0] >= 0.0);
    CHECK(p.r[0] <= 0.5);
  }
  const GlvParams p = make_random_glv(10, 1);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) {
      const double off = p.a(i, j) - (i == j ? -1.0 : 0.0);
      CHECK(std::abs(off) <= 1.0 / 20.0);
    }
  CHECK_THROWS_AS(make_random_glv(0, 1), ContractViolation);
}

TEST_CASE("random GLV instances integrate for 20 consecutive seeds") {
  IntegrationConfig cfg;
  cfg.m = 100;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const GeneralizedLotkaVolterra glv(make_random_glv(10, s));
    CHECK_NOTHROW(integrate(glv, StateVector(10, 1.0), cfg));
  }
}

TEST_CASE("parameter file round trip") {
  const GlvParams p = make_random_glv(6, 77);
  std::stringstream buffer;
  write_glv_params(buffer, p);
  CHECK(read_glv_params(buffer) == p);

  std::istringstream text("2\n1.1 -0.75\n0 -0.5\n0.25 0\n");
  CHECK(read_glv_params(text) == lv2_as_glv());

  const auto path = std::filesystem::temp_directory_path() / "diffinv_glv_roundtrip.txt";
  save_glv_params(path, p);
  CHECK(load_glv_params(path) == p);
  std::filesystem::remove(path);
}

TEST_CASE("malformed parameter files are rejected") {
  for (const char* bad : {"", "0\n", "-1\n", "2\n1 2\n1 2 3\n", "2\n1 2\n1 2 3 4 5\n", "1\nx\n1\n"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(read_glv_params(in), ContractViolation);
  }
  CHECK_THROWS_AS(load_glv_params("/nonexistent/diffinv.txt"), ContractViolation);
}

}  // TEST_SUITE
