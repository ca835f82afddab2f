#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>

#include "bench.hpp"
#include "diffinv/errors.hpp"
#include "diffinv/euler.hpp"
#include "diffinv/inversion.hpp"
#include "system_spec.hpp"
#include "verify.hpp"

namespace diffinv::cli {

namespace {

struct ProblemFlags {
  SystemSpec system;
  std::string x0;
  double t = 1.0;
  std::size_t m = 1000;
  double newton_tol = 1e-12;
  unsigned newton_max_iter = 50;
};

void add_problem_flags(CLI::App& cmd, ProblemFlags& f) {
  cmd.add_option("--system", f.system.name, "Right-hand side: lv2, glv, linear or zero")
      ->check(CLI::IsMember({"lv2", "glv", "linear", "zero"}));
  cmd.add_option("--params", f.system.params_file, "GLV parameter file (n, r, A row-major)");
  cmd.add_option("--n", f.system.n, "Dimension for glv/linear/zero (default: from --x0)");
  cmd.add_option("--seed", f.system.seed, "Seed for random GLV parameters (DIFFINV_SEED overrides)");
  cmd.add_option("--lambda", f.system.lambda, "Rate of the linear system dx/dt = lambda x");
  cmd.add_option("--x0", f.x0, "Initial state, comma separated (default: all ones)");
  cmd.add_option("--t", f.t, "Target time")->check(CLI::PositiveNumber);
  cmd.add_option("--m", f.m, "Number of implicit Euler steps")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  cmd.add_option("--newton-tol", f.newton_tol, "Newton residual threshold")->check(CLI::PositiveNumber);
  cmd.add_option("--newton-max-iter", f.newton_max_iter, "Newton iteration cap")
      ->check(CLI::Range(1u, std::numeric_limits<unsigned>::max()));
}

struct Problem {
  std::unique_ptr<OdeSystem> system;
  StateVector x0;
  IntegrationConfig cfg;
};

Problem build_problem(const ProblemFlags& f) {
  std::optional<StateVector> x0;
  if (!f.x0.empty()) x0 = parse_vector(f.x0);
  Problem p;
  p.system = make_system(f.system, x0 ? std::optional<std::size_t>(x0->size()) : std::nullopt);
  p.x0 = x0 ? *x0 : StateVector(p.system->dim(), 1.0);
  if (p.x0.size() != p.system->dim()) {
    throw ContractViolation("--x0 has " + std::to_string(p.x0.size()) + " entries, system dimension is " +
                            std::to_string(p.system->dim()));
  }
  p.cfg = IntegrationConfig{f.t, f.m, f.newton_tol, f.newton_max_iter};
  p.cfg.validate();
  return p;
}

void print_vector(std::ostream& out, const StateVector& x) {
  const auto flags = out.flags();
  const auto precision = out.precision(6);
  out << std::defaultfloat;
  for (double v : x) out << v << '\n';
  out.precision(precision);
  out.flags(flags);
}

std::vector<std::size_t> parse_sizes(const std::string& csv) {
  std::vector<std::size_t> ns;
  for (double v : parse_vector(csv)) {
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw ContractViolation("--n entries must be positive integers");
    }
    ns.push_back(static_cast<std::size_t>(v));
  }
  return ns;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Implicit Euler integration and differential inversion (E')^{-1} v", "diffinv"};
  app.require_subcommand(1);

  ProblemFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "Integrate the IVP and print x(t)");
  add_problem_flags(*solve, solve_flags);

  ProblemFlags invert_flags;
  std::string algorithm_name = "full";
  std::string v_csv;
  bool report = false;
  auto* invert = app.add_subcommand("invert", "Print w = (E')^{-1} v");
  add_problem_flags(*invert, invert_flags);
  invert->add_option("--algorithm", algorithm_name, "blackbox, partial or full")
      ->check(CLI::IsMember({"blackbox", "partial", "full"}));
  invert->add_option("--v", v_csv, "Right-hand side v (default: E(x0))");
  invert->add_flag("--report", report, "Also print flop counts and tape bytes");

  VerifyOptions verify_options;
  auto* verify = app.add_subcommand("verify", "Run the built-in consistency checks");
  verify->add_option("--filter", verify_options.filter, "Run only checks whose name contains this");
  verify->add_flag("--perturb-jacobian", verify_options.perturb_tangent_jacobian,
                   "Test hook: corrupt the tangent Jacobian before the AD-vs-FD check");
  verify->add_flag_callback("--list", [&out] {
    for (const auto& name : verify_check_names()) out << name << '\n';
    throw CLI::Success();
  }, "List check names");

  BenchOptions bench_options;
  std::string bench_ns = "4,8,16,32,48,64";
  std::string output = "-";
  std::string bench_algorithms;
  auto* bench = app.add_subcommand("bench", "Scaling benchmark on random GLV systems, CSV output");
  bench->add_option("--n", bench_ns, "Comma-separated dimensions");
  bench->add_option("--m", bench_options.m, "Implicit Euler steps")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  bench->add_option("--trials", bench_options.trials, "Inversions per cell")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  bench->add_option("--seed", bench_options.seed, "GLV parameter seed (DIFFINV_SEED overrides)");
  bench->add_option("--budget", bench_options.budget_seconds, "Wall-time budget per cell in seconds")
      ->check(CLI::PositiveNumber);
  bench->add_option("--algorithms", bench_algorithms, "Subset, e.g. partial,full");
  bench->add_option("--output,-o", output, "CSV path, '-' for stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) {
      const Problem p = build_problem(solve_flags);
      print_vector(out, integrate(*p.system, p.x0, p.cfg));
      return kExitOk;
    }

    if (invert->parsed()) {
      const Problem p = build_problem(invert_flags);
      const Algorithm algorithm = *parse_algorithm(algorithm_name);
      std::optional<StateVector> v;
      if (!v_csv.empty()) {
        v = parse_vector(v_csv);
        if (v->size() != p.system->dim()) throw ContractViolation("--v must match the system dimension");
      }
      const InversionResult r = differential_inverse(algorithm, *p.system, p.x0, v, p.cfg);
      print_vector(out, r.w);
      if (report) {
        out << "# algorithm: " << to_string(algorithm) << '\n'
            << "# flops_inversion_phase: " << r.inversion_cost.multiply_adds << '\n'
            << "# flops_total: " << r.total_cost.multiply_adds << '\n'
            << "# factorizations: " << r.total_cost.factorizations << '\n'
            << "# solves: " << r.total_cost.solves << '\n'
            << "# tape_bytes: " << r.tape_bytes << '\n';
      }
      return kExitOk;
    }

    if (verify->parsed()) {
      const auto outcomes = run_verify(verify_options, out);
      if (outcomes.empty()) {
        err << "no check matches filter '" << verify_options.filter << "'\n";
        return kExitUsage;
      }
      for (const auto& o : outcomes)
        if (!o.passed) return kExitNumerical;
      return kExitOk;
    }

    if (bench->parsed()) {
      bench_options.ns = parse_sizes(bench_ns);
      bench_options.seed = effective_seed(bench_options.seed);
      if (!bench_algorithms.empty()) {
        bench_options.algorithms.clear();
        std::string_view rest = bench_algorithms;
        while (!rest.empty()) {
          const auto comma = std::min(rest.find(','), rest.size());
          const auto algorithm = parse_algorithm(rest.substr(0, comma));
          if (!algorithm) throw ContractViolation("unknown algorithm '" + std::string(rest.substr(0, comma)) + "'");
          bench_options.algorithms.push_back(*algorithm);
          rest.remove_prefix(std::min(comma + 1, rest.size()));
        }
      }
      const auto records = run_bench(bench_options, err);
      if (output == "-") {
        write_bench_csv(out, records);
      } else {
        std::ofstream file(output, std::ios::binary);
        if (!file) throw ContractViolation("cannot write " + output);
        write_bench_csv(file, records);
      }
      return kExitOk;
    }
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace diffinv::cli
