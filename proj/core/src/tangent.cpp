#include "diffinv/tangent.hpp"

#include <algorithm>

namespace diffinv {

Tangent sqrt(const Tangent& u) {
  const double v = std::sqrt(u.value());
  std::vector<double> dot(u.width(), 0.0);
  if (u.value() == 0.0) {
    const auto d = u.derivative();
    if (std::any_of(d.begin(), d.end(), [](double x) { return x != 0.0; })) {
      throw DivisionByZeroValue("sqrt of a zero value part with nonzero tangent");
    }
    return Tangent(v, std::move(dot));
  }
  for (std::size_t i = 0; i < dot.size(); ++i) dot[i] = u.derivative(i) / (2.0 * v);
  return Tangent(v, std::move(dot));
}

Tangent lift(double c, std::size_t width) { return Tangent(c, std::vector<double>(width, 0.0)); }

BasicVector<Tangent> seed(const StateVector& x0) {
  const std::size_t n = x0.size();
  BasicVector<Tangent> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> dot(n, 0.0);
    dot[i] = 1.0;
    x[i] = Tangent(x0[i], std::move(dot));
  }
  return x;
}

StateVector values(const BasicVector<Tangent>& x) {
  StateVector v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[i].value();
  return v;
}

DenseMatrix derivatives(const BasicVector<Tangent>& x, std::size_t width) {
  if (width != x.size()) throw ContractViolation("derivatives: Jacobian extraction needs width == size");
  DenseMatrix j(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i].passive() && x[i].width() != width) throw ContractViolation("derivatives: tangent width mismatch");
    for (std::size_t k = 0; k < width; ++k) j(i, k) = x[i].derivative(k);
  }
  return j;
}

}  // namespace diffinv
