#ifndef HARDY_LAPLACIAN_HPP
#define HARDY_LAPLACIAN_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "hardy/numerics.hpp"

namespace hardy {

/// Real function sampled on {0, 1, ..., N}. Reads outside that window throw
/// std::out_of_range.
class GridFunction {
public:
  explicit GridFunction(std::vector<PrecReal> values);

  static GridFunction tabulate(std::size_t support_bound, long bits,
                               const std::function<PrecReal(std::size_t)>& f);

  std::size_t support_bound() const { return values_.size() - 1; }
  long bits() const { return values_.front().bits(); }
  const PrecReal& at(std::size_t n) const;

  GridFunction scaled(const PrecReal& factor) const;

private:
  std::vector<PrecReal> values_;
};

/// sgn(t) |t|^(p-1), exactly 0 at t = 0.
PrecReal signed_power(const PrecReal& t, const ExponentPair& pair);
double signed_power(double t, double p);

/// Delta_p f(n) = sum over m = n +- 1 of sgn(f(n) - f(m)) |f(n) - f(m)|^(p-1).
/// Needs 1 <= n <= N - 1; the right boundary is not one-sided.
PrecReal apply_p_laplacian(const GridFunction& f, std::size_t n, const ExponentPair& pair);

/// u(n) = n^((p-1)/p), with u(0) = 0.
PrecReal hardy_ground_state(const ExponentPair& pair, std::uint64_t n, long bits);
GridFunction ground_state_grid(const ExponentPair& pair, std::size_t support_bound, long bits);

/// Delta_p u(n) / u(n)^(p-1). Throws std::domain_error when u(n) <= 0.
PrecReal weight_from_supersolution(const GridFunction& u, const ExponentPair& pair,
                                   std::size_t n);

} // namespace hardy

#endif
