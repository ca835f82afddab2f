#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "diffinv/inversion.hpp"

namespace diffinv::cli {

struct BenchOptions {
  std::vector<std::size_t> ns{4, 8, 16, 32, 48, 64};
  std::size_t m = 1000;
  std::size_t trials = 3;
  std::uint64_t seed = 1;
  double budget_seconds = 300.0;
  std::vector<Algorithm> algorithms{Algorithm::blackbox, Algorithm::partial, Algorithm::full};
};

/// One (algorithm, n) cell. Flop and tape columns come from the first trial;
/// they are deterministic in (n, m, seed).
struct BenchRecord {
  Algorithm algorithm = Algorithm::full;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t trials = 0;
  double wall_seconds_total = 0.0;
  std::uint64_t flops_inversion_phase = 0;
  std::uint64_t flops_total = 0;
  std::size_t tape_bytes = 0;
  std::uint64_t seed = 0;
  bool timed_out = false;
};

/// Runs every cell sequentially on make_random_glv(n, seed) from x0 = 1.
/// Cells whose integration fails are skipped with a warning on `log`. A cell
/// that exceeds the budget stops after the current trial, keeps the trials it
/// completed, and larger n for that algorithm are skipped.
std::vector<BenchRecord> run_bench(const BenchOptions& options, std::ostream& log);

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);

}  // namespace diffinv::cli
