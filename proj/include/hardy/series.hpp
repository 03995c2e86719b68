#ifndef HARDY_SERIES_HPP
#define HARDY_SERIES_HPP

// Truncated power series in x = 1/n over an exact (BigRational) or a
// fixed-precision (PrecReal) coefficient ring.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "hardy/numerics.hpp"

namespace hardy {

inline constexpr std::size_t kDefaultSeriesOrder = 40;

struct Ring {
  enum class Kind { exact, real };
  Kind kind = Kind::exact;
  /// Meaningful for Kind::real only.
  long bits = 0;

  static Ring exact() { return {Kind::exact, 0}; }
  static Ring real(long bits) { return {Kind::real, bits}; }

  std::string to_string() const;
  friend bool operator==(const Ring&, const Ring&) = default;
};

template <class T>
class PowerSeries {
public:
  /// Series with coefficients `coeffs`, truncated at order coeffs.size() - 1.
  PowerSeries(std::vector<T> coeffs, Ring ring);

  static PowerSeries zero(std::size_t order, Ring ring);
  static PowerSeries one(std::size_t order, Ring ring);
  /// The series x truncated at `order` (order >= 1).
  static PowerSeries monomial_x(std::size_t order, Ring ring);

  std::size_t order() const { return coeffs_.size() - 1; }
  const Ring& ring() const { return ring_; }
  const std::vector<T>& coeffs() const { return coeffs_; }
  const T& operator[](std::size_t k) const { return coeffs_.at(k); }

  /// Copy truncated to a lower order.
  PowerSeries truncated(std::size_t order) const;
  /// Divides by x^k. The first k coefficients must be exactly zero when the
  /// ring is exact; otherwise std::logic_error.
  PowerSeries shifted_down(std::size_t k) const;
  PowerSeries scaled(const T& factor) const;

  PowerSeries& operator+=(const PowerSeries& rhs);
  PowerSeries& operator-=(const PowerSeries& rhs);
  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }

private:
  std::vector<T> coeffs_;
  Ring ring_;
};

using ExactSeries = PowerSeries<BigRational>;
using RealSeries = PowerSeries<PrecReal>;

/// Coefficients binom(alpha, k) * sign^k of (1 + sign*x)^alpha, k = 0..order.
ExactSeries binomial_series(const BigRational& alpha, int sign, std::size_t order);
RealSeries binomial_series(const PrecReal& alpha, int sign, std::size_t order);

/// Cauchy product truncated at min(a.order, b.order). Throws
/// std::invalid_argument when the rings differ.
template <class T>
PowerSeries<T> series_mul(const PowerSeries<T>& a, const PowerSeries<T>& b);

/// (1 + h)^alpha = sum_k binom(alpha, k) h^k, truncated at `order`. h must
/// have a zero constant term.
ExactSeries series_pow_binomial(const ExactSeries& h, const BigRational& alpha, std::size_t order);
RealSeries series_pow_binomial(const RealSeries& h, const PrecReal& alpha, std::size_t order);

struct SeriesValue {
  PrecReal value;
  /// |last kept coefficient| * x^(order+1) / (1 - x). For parity-structured
  /// series the larger of the last two coefficients is used, so a trailing
  /// zero does not hide the tail.
  PrecReal tail_bound;
};

/// Horner evaluation at x in [0, 1/2], at x's precision.
SeriesValue series_eval(const ExactSeries& s, const PrecReal& x);
SeriesValue series_eval(const RealSeries& s, const PrecReal& x);

// ---------------------------------------------------------------------------
// Expansion of w_p for integer p

struct WeightExpansion {
  long p;
  /// Always p: w_p(n) = sum_k c[k] n^(-p-k).
  long leading_power;
  std::vector<BigRational> c;

  std::size_t order() const { return c.size() - 1; }
};

/// Exact c[0..order]. Checks that the first p coefficients of the bracket
/// difference vanish, that odd c[k] are zero and even c[k] positive; any
/// violation throws std::logic_error.
WeightExpansion expand_w_integer_p(long p, std::size_t order = kDefaultSeriesOrder);

/// w_p(n) from the truncated expansion, including the n^-p prefactor.
SeriesValue eval_expansion(const WeightExpansion& expansion, const PrecReal& x);

/// Series of (1 - (1 - x)^(1/q))^(p-1) for integer p, truncated at `order`.
ExactSeries left_bracket_series(long p, std::size_t order);

// ---------------------------------------------------------------------------
// Correction series a_p with w_p(n) = ((p-1)/(p n))^p (1 + a_p(n))

using CorrectionSeries = std::variant<ExactSeries, RealSeries>;

/// a_p as a series in x = 1/n. Exact when p is rational; otherwise computed at
/// `bits` of precision.
CorrectionSeries expand_correction(const ExponentPair& pair,
                                   std::size_t order = kDefaultSeriesOrder, long bits = 256);

struct PositivityProbe {
  /// Even k >= 2 whose coefficient is not strictly positive.
  std::vector<std::size_t> non_positive;
  std::size_t checked = 0;
  bool all_positive() const { return non_positive.empty(); }
};

/// Reports the sign of every even correction coefficient with k >= 2.
/// Exploratory only: positivity for non-integer p is open.
PositivityProbe probe_correction_positivity(const ExponentPair& pair,
                                            std::size_t order = kDefaultSeriesOrder);

// ---------------------------------------------------------------------------
// Serialization

/// {"p": 3, "leading_power": 3, "coefficients": ["8/27", "0", ...]}
nlohmann::json to_json(const WeightExpansion& expansion);
/// Header `k,c_k`.
std::string to_csv(const WeightExpansion& expansion);

/// Exact coefficients as "num/den", real ones with `digits` digits.
std::vector<std::string> coefficient_strings(const CorrectionSeries& series, int digits);

} // namespace hardy

#endif
