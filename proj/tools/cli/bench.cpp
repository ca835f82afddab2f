#include "bench.hpp"

#include <chrono>
#include <ostream>
#include <set>

#include "diffinv/errors.hpp"
#include "diffinv/ode.hpp"

namespace diffinv::cli {

std::vector<BenchRecord> run_bench(const BenchOptions& options, std::ostream& log) {
  if (options.ns.empty()) throw ContractViolation("bench: n list is empty");
  if (options.trials == 0) throw ContractViolation("bench: trials must be >= 1");
  IntegrationConfig cfg;
  cfg.m = options.m;
  cfg.validate();

  std::vector<BenchRecord> records;
  std::set<Algorithm> exhausted;
  for (std::size_t n : options.ns) {
    const GeneralizedLotkaVolterra sys(make_random_glv(n, options.seed));
    const StateVector x0(n, 1.0);
    for (Algorithm algorithm : options.algorithms) {
      if (exhausted.count(algorithm)) {
        log << "warning: skipping " << to_string(algorithm) << " n=" << n << " (budget exceeded at smaller n)\n";
        continue;
      }
      BenchRecord rec;
      rec.algorithm = algorithm;
      rec.n = n;
      rec.m = options.m;
      rec.seed = options.seed;
      try {
        for (std::size_t trial = 0; trial < options.trials; ++trial) {
          const auto start = std::chrono::steady_clock::now();
          const InversionResult result = differential_inverse(algorithm, sys, x0, std::nullopt, cfg);
          rec.wall_seconds_total += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          if (trial == 0) {
            rec.flops_inversion_phase = result.inversion_cost.multiply_adds;
            rec.flops_total = result.total_cost.multiply_adds;
            rec.tape_bytes = result.tape_bytes;
          }
          rec.trials = trial + 1;
          if (rec.wall_seconds_total > options.budget_seconds) {
            rec.timed_out = true;
            exhausted.insert(algorithm);
            log << "warning: " << to_string(algorithm) << " n=" << n << " timed out after " << rec.trials
                << " trial(s)\n";
            break;
          }
        }
      } catch (const NumericalError& e) {
        log << "warning: skipping " << to_string(algorithm) << " n=" << n << ": " << e.what() << '\n';
        continue;
      }
      records.push_back(rec);
    }
  }
  return records;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  const auto old_precision = out.precision(9);
  out << "algorithm,n,m,trials,wall_seconds_total,flops_inversion_phase,flops_total,tape_bytes,seed\n";
  for (const auto& r : records) {
    out << to_string(r.algorithm) << ',' << r.n << ',' << r.m << ',' << r.trials << ',' << r.wall_seconds_total
        << ',' << r.flops_inversion_phase << ',' << r.flops_total << ',' << r.tape_bytes << ',' << r.seed << '\n';
  }
  out.precision(old_precision);
}

}  // namespace diffinv::cli
