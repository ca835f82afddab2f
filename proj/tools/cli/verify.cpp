#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "diffinv/euler.hpp"
#include "diffinv/inversion.hpp"
#include "diffinv/ode.hpp"

namespace diffinv::cli {

namespace {

double max_abs(std::span<const double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double rel_error(const StateVector& got, const StateVector& want) {
  return max_abs_diff(got.span(), want.span()) / std::max(max_abs(want.span()), 1e-300);
}

double rel_error(const DenseMatrix& got, const DenseMatrix& want) {
  return max_abs_diff(got.entries(), want.entries()) / std::max(max_abs(want.entries()), 1e-300);
}

// Diagonally dominant random matrix, well conditioned by construction.
DenseMatrix random_dominant(std::size_t n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = u(gen);
    a(i, i) += static_cast<double>(n) + 1.0;
  }
  return a;
}

struct Check {
  std::string name;
  std::function<std::string()> run;  // empty string on success, else the reason
};

std::string fail(const std::string& what, double got, double tol) {
  std::ostringstream s;
  s << what << ": " << got << " > " << tol;
  return s.str();
}

std::string check_lemma1() {
  std::mt19937_64 gen(7);
  for (std::size_t n : {2u, 4u, 8u}) {
    for (std::size_t k = 1; k <= 10; ++k) {
      std::vector<DenseMatrix> chain;
      for (std::size_t i = 0; i < k; ++i) chain.push_back(random_dominant(n, gen));
      StateVector v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + static_cast<double>(i);

      StateVector w = v;  // A_1^{-1} (A_2^{-1} ( ... (A_k^{-1} v)))
      for (std::size_t i = k; i-- > 0;) w = lu_solve(lu_factor(chain[i]), w);

      DenseMatrix product = chain[0];  // A_k ... A_1
      for (std::size_t i = 1; i < k; ++i) product = mat_mat(chain[i], product);
      const StateVector direct = lu_solve(lu_factor(product), v);

      if (const double e = rel_error(w, direct); e > 1e-8) return fail("inverse chain mismatch", e, 1e-8);
    }
  }
  return {};
}

std::string check_lemma2() {
  IntegrationConfig cfg;
  cfg.m = 1;
  cfg.t_final = 0.1;
  const LotkaVolterra2 lv2;
  const GeneralizedLotkaVolterra glv(make_random_glv(5, 3));
  for (const OdeSystem* sys : {static_cast<const OdeSystem*>(&lv2), static_cast<const OdeSystem*>(&glv)}) {
    const StateVector x0(sys->dim(), 1.0);
    const auto tj = jacobian_tangent(*sys, x0, cfg);
    const DenseMatrix step = residual_jacobian(*sys, tj.x_final, cfg.dt(), cfg.t_final);
    const DenseMatrix product = mat_mat(tj.jacobian, step);
    const DenseMatrix eye = DenseMatrix::identity(sys->dim());
    if (const double e = max_abs_diff(product.entries(), eye.entries()); e > 1e-9) {
      return fail("E' * dF/dx_1 differs from I", e, 1e-9);
    }
  }
  return {};
}

std::string check_fd_vs_ad(bool perturb) {
  struct Case {
    std::unique_ptr<OdeSystem> sys;
    IntegrationConfig cfg;
  };
  std::vector<Case> cases;
  cases.push_back({std::make_unique<LotkaVolterra2>(), IntegrationConfig{1.0, 1000}});
  cases.push_back({std::make_unique<GeneralizedLotkaVolterra>(make_random_glv(4, 11)), IntegrationConfig{1.0, 100}});
  for (const auto& c : cases) {
    const StateVector x0(c.sys->dim(), 1.0);
    DenseMatrix ad = jacobian_tangent(*c.sys, x0, c.cfg).jacobian;
    if (perturb) ad(0, 0) += 1e-3;
    const DenseMatrix fd = fd_jacobian(*c.sys, x0, c.cfg, 1e-6);
    if (const double e = max_abs_diff(ad.entries(), fd.entries()); e > 1e-5) {
      return fail("tangent Jacobian vs central differences", e, 1e-5);
    }
  }
  return {};
}

std::string check_cross_algorithm() {
  struct Case {
    std::unique_ptr<OdeSystem> sys;
    IntegrationConfig cfg;
  };
  std::vector<Case> cases;
  cases.push_back({std::make_unique<LotkaVolterra2>(), IntegrationConfig{1.0, 1000}});
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    cases.push_back(
        {std::make_unique<GeneralizedLotkaVolterra>(make_random_glv(4 * seed, seed)), IntegrationConfig{1.0, 200}});
  }
  for (const auto& c : cases) {
    const StateVector x0(c.sys->dim(), 1.0);
    const auto bb = diffinv_blackbox(*c.sys, x0, std::nullopt, c.cfg);
    const auto pa = diffinv_partial(*c.sys, x0, std::nullopt, c.cfg);
    const auto fu = diffinv_full(*c.sys, x0, std::nullopt, c.cfg);
    const double e = std::max({rel_error(bb.w, pa.w), rel_error(pa.w, fu.w), rel_error(fu.w, bb.w)});
    if (e > 1e-8) return fail("algorithms disagree", e, 1e-8);
    if (!(bb.x_final == pa.x_final && pa.x_final == fu.x_final)) return "primal results differ between algorithms";
  }
  return {};
}

std::string check_closed_form() {
  const double lambda = -1.0;
  const GeneralizedLotkaVolterra sys(make_linear_glv(lambda));
  const StateVector v{0.75};
  for (std::size_t m : {10u, 100u, 1000u}) {
    const IntegrationConfig cfg{1.0, m};
    const double expected = std::pow(1.0 - lambda * cfg.dt(), static_cast<double>(m)) * v[0];
    const auto full = diffinv_full(sys, StateVector{1.0}, v, cfg);
    if (const double e = std::abs(full.w[0] - expected) / expected; e > 1e-12) return fail("full vs closed form", e, 1e-12);
    const auto bb = diffinv_blackbox(sys, StateVector{1.0}, v, cfg);
    if (const double e = std::abs(bb.w[0] - expected) / expected; e > 1e-10) {
      return fail("blackbox vs closed form", e, 1e-10);
    }
  }
  return {};
}

std::string check_inverse_consistency() {
  const LotkaVolterra2 lv2;
  const GeneralizedLotkaVolterra glv(make_random_glv(6, 5));
  const GeneralizedLotkaVolterra linear(make_linear_glv(-1.0, 3));
  for (const OdeSystem* sys : {static_cast<const OdeSystem*>(&lv2), static_cast<const OdeSystem*>(&glv),
                               static_cast<const OdeSystem*>(&linear)}) {
    const IntegrationConfig cfg{1.0, 200};
    const StateVector x0(sys->dim(), 1.0);
    StateVector v(sys->dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 + static_cast<double>(i);
    const auto w = diffinv_full(*sys, x0, v, cfg).w;
    const auto jac = jacobian_tangent(*sys, x0, cfg).jacobian;
    if (const double e = rel_error(mat_vec(jac, w), v); e > 1e-7) return fail("E' w differs from v", e, 1e-7);
  }
  return {};
}

std::string check_convergence_order() {
  const GeneralizedLotkaVolterra sys(make_linear_glv(-1.0));
  const double exact = std::exp(-1.0);
  double previous = 0.0;
  for (std::size_t m : {100u, 200u, 400u, 800u}) {
    const double err = std::abs(integrate(sys, StateVector{1.0}, IntegrationConfig{1.0, m})[0] - exact);
    if (previous > 0.0) {
      const double ratio = previous / err;
      if (ratio < 1.8 || ratio > 2.2) {
        std::ostringstream s;
        s << "error ratio " << ratio << " at m=" << m << " outside [1.8, 2.2]";
        return s.str();
      }
    }
    previous = err;
  }
  return {};
}

std::vector<Check> all_checks(const VerifyOptions& options) {
  return {
      {"lemma1_inverse_chain", check_lemma1},
      {"lemma2_single_step", check_lemma2},
      {"fd_vs_ad", [&options] { return check_fd_vs_ad(options.perturb_tangent_jacobian); }},
      {"cross_algorithm", check_cross_algorithm},
      {"closed_form_linear", check_closed_form},
      {"inverse_consistency", check_inverse_consistency},
      {"convergence_order", check_convergence_order},
  };
}

}  // namespace

std::vector<std::string> verify_check_names() {
  std::vector<std::string> names;
  for (const auto& c : all_checks({})) names.push_back(c.name);
  return names;
}

std::vector<CheckOutcome> run_verify(const VerifyOptions& options, std::ostream& out) {
  std::vector<CheckOutcome> outcomes;
  for (const auto& check : all_checks(options)) {
    if (!options.filter.empty() && check.name.find(options.filter) == std::string::npos) continue;
    CheckOutcome outcome{check.name, false, {}};
    try {
      outcome.detail = check.run();
      outcome.passed = outcome.detail.empty();
    } catch (const std::exception& e) {
      outcome.detail = std::string("exception: ") + e.what();
    }
    out << (outcome.passed ? "PASS " : "FAIL ") << outcome.name;
    if (!outcome.passed) out << ": " << outcome.detail;
    out << '\n';
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

}  // namespace diffinv::cli
