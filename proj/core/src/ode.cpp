#include "diffinv/ode.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>

namespace diffinv {

namespace {

// Uniform in [0, 1) from the top 53 bits; unlike std::uniform_real_distribution
// this is identical across standard library implementations.
double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

double read_value(std::istream& in, const char* what) {
  double v = 0.0;
  if (!(in >> v)) throw ContractViolation(std::string("GLV parameter file: cannot read ") + what);
  return v;
}

}  // namespace

void GlvParams::validate() const {
  if (r.size() == 0) throw ContractViolation("GLV parameters: n must be >= 1");
  if (a.dim() != r.size()) throw ContractViolation("GLV parameters: A must be n x n with n = len(r)");
}

GeneralizedLotkaVolterra::GeneralizedLotkaVolterra(GlvParams params) : params_(std::move(params)) {
  params_.validate();
}

GlvParams make_random_glv(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ContractViolation("make_random_glv: n must be >= 1");
  std::mt19937_64 gen(seed);
  GlvParams p{StateVector(n), DenseMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) p.r[k] = 0.5 * unit_uniform(gen);
  const double coupling = 1.0 / (2.0 * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double noise = 2.0 * unit_uniform(gen) - 1.0;
      p.a(i, j) = (i == j ? -1.0 : 0.0) + coupling * noise;
    }
  }
  return p;
}

GlvParams lv2_as_glv() { return {StateVector{1.1, -0.75}, DenseMatrix{{0.0, -0.5}, {0.25, 0.0}}}; }

GlvParams make_linear_glv(double lambda, std::size_t n) {
  if (n == 0) throw ContractViolation("make_linear_glv: n must be >= 1");
  return {StateVector(n, lambda), DenseMatrix(n)};
}

GlvParams make_zero_glv(std::size_t n) {
  if (n == 0) throw ContractViolation("make_zero_glv: n must be >= 1");
  return {StateVector(n, 0.0), DenseMatrix(n)};
}

GlvParams read_glv_params(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n < 1) throw ContractViolation("GLV parameter file: first entry must be n >= 1");
  const auto dim = static_cast<std::size_t>(n);
  GlvParams p{StateVector(dim), DenseMatrix(dim)};
  for (std::size_t k = 0; k < dim; ++k) p.r[k] = read_value(in, "r");
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) p.a(i, j) = read_value(in, "A");
  double extra = 0.0;
  if (in >> extra) throw ContractViolation("GLV parameter file: trailing data after A");
  return p;
}

void write_glv_params(std::ostream& out, const GlvParams& params) {
  params.validate();
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  const std::size_t n = params.dim();
  out << n << '\n';
  for (std::size_t k = 0; k < n; ++k) out << (k ? " " : "") << params.r[k];
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out << (j ? " " : "") << params.a(i, j);
    out << '\n';
  }
  out.precision(old_precision);
}

GlvParams load_glv_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open GLV parameter file " + path.string());
  return read_glv_params(in);
}

void save_glv_params(const std::filesystem::path& path, const GlvParams& params) {
  std::ofstream out(path);
  if (!out) throw ContractViolation("cannot write GLV parameter file " + path.string());
  write_glv_params(out, params);
}

}  // namespace diffinv
