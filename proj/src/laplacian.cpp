#include "hardy/laplacian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hardy/weights.hpp"

namespace hardy {

GridFunction::GridFunction(std::vector<PrecReal> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("GridFunction needs at least the value at 0");
  const long bits = values_.front().bits();
  for (const auto& v : values_) {
    if (v.bits() != bits) throw PrecisionMismatch("GridFunction values must share one precision");
    if (!v.is_finite()) throw std::domain_error("GridFunction values must be finite");
  }
}

GridFunction GridFunction::tabulate(std::size_t support_bound, long bits,
                                    const std::function<PrecReal(std::size_t)>& f) {
  std::vector<PrecReal> values;
  values.reserve(support_bound + 1);
  for (std::size_t n = 0; n <= support_bound; ++n) values.push_back(f(n).at(bits));
  return GridFunction(std::move(values));
}

const PrecReal& GridFunction::at(std::size_t n) const {
  if (n >= values_.size()) {
    throw std::out_of_range("GridFunction: index " + std::to_string(n) + " outside [0, " +
                            std::to_string(support_bound()) + "]");
  }
  return values_[n];
}

GridFunction GridFunction::scaled(const PrecReal& factor) const {
  std::vector<PrecReal> values;
  values.reserve(values_.size());
  for (const auto& v : values_) values.push_back(v * factor);
  return GridFunction(std::move(values));
}

PrecReal signed_power(const PrecReal& t, const ExponentPair& pair) {
  if (t.is_zero()) return PrecReal(t.bits());
  const PrecReal magnitude = pow_p_minus_1(abs(t), pair);
  return t.sign() < 0 ? -magnitude : magnitude;
}

double signed_power(double t, double p) {
  if (t == 0.0) return 0.0;
  const double magnitude = std::pow(std::fabs(t), p - 1.0);
  return t < 0.0 ? -magnitude : magnitude;
}

PrecReal apply_p_laplacian(const GridFunction& f, std::size_t n, const ExponentPair& pair) {
  if (n < 1 || n + 1 > f.support_bound()) {
    throw std::out_of_range("apply_p_laplacian: n = " + std::to_string(n) +
                            " needs both neighbours inside [0, " +
                            std::to_string(f.support_bound()) + "]");
  }
  const PrecReal& center = f.at(n);
  return signed_power(center - f.at(n - 1), pair) + signed_power(center - f.at(n + 1), pair);
}

PrecReal hardy_ground_state(const ExponentPair& pair, std::uint64_t n, long bits) {
  if (n == 0) return PrecReal(bits);
  PrecReal base(bits);
  mpfr_set_ui(base.get(), n, MPFR_RNDN);
  return pow(base, pair.inv_q(bits));
}

GridFunction ground_state_grid(const ExponentPair& pair, std::size_t support_bound, long bits) {
  return GridFunction::tabulate(support_bound, bits, [&](std::size_t n) {
    return hardy_ground_state(pair, n, bits);
  });
}

PrecReal weight_from_supersolution(const GridFunction& u, const ExponentPair& pair,
                                   std::size_t n) {
  const PrecReal& value = u.at(n);
  if (value.sign() <= 0) {
    throw std::domain_error("weight_from_supersolution: u(" + std::to_string(n) +
                            ") must be positive");
  }
  return apply_p_laplacian(u, n, pair) / pow_p_minus_1(value, pair);
}

} // namespace hardy
