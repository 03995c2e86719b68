#ifndef HARDY_WEIGHTS_HPP
#define HARDY_WEIGHTS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hardy/numerics.hpp"

namespace hardy {

enum class WeightKind { improved, classical };

std::string_view to_string(WeightKind kind);
/// Accepts "improved" or "classical".
WeightKind parse_weight_kind(std::string_view text);

// The improved weight
//
//   w_p(n) = (1 - (1 - 1/n)^(1/q))^(p-1) - ((1 + 1/n)^(1/q) - 1)^(p-1)
//
// loses roughly p*log2(n) bits to cancellation between the two brackets, so
// every entry point either takes a digit target (and escalates precision via
// required_precision) or an explicit bit count.

/// w_p(n) correct to `target_digits` significant digits. n = 1 routes to
/// eval_w1_closed. Throws PrecisionError when the precision is infeasible.
PrecReal eval_w(const ExponentPair& pair, std::uint64_t n, long target_digits);
PrecReal eval_w_bits(const ExponentPair& pair, std::uint64_t n, long bits);

/// ((p-1)/p)^p * n^-p.
PrecReal eval_w_classical(const ExponentPair& pair, std::uint64_t n, long target_digits);
PrecReal eval_w_classical_bits(const ExponentPair& pair, std::uint64_t n, long bits);

/// w_p(1) = 1 - (2^(1-1/p) - 1)^(p-1).
PrecReal eval_w1_closed(const ExponentPair& pair, long target_digits);
PrecReal eval_w1_closed_bits(const ExponentPair& pair, long bits);

/// The weight as a function of x = 1/n on (0, 1], at x's precision.
PrecReal eval_w_of_x(const ExponentPair& pair, const PrecReal& x);

/// base^(p-1), using an integer power when p is an integer.
PrecReal pow_p_minus_1(const PrecReal& base, const ExponentPair& pair);
/// base^p, using an integer power when p is an integer.
PrecReal pow_p(const PrecReal& base, const ExponentPair& pair);

struct WeightRow {
  std::uint64_t n;
  PrecReal w_improved;
  PrecReal w_classical;
  /// w_improved / w_classical - 1.
  PrecReal ratio_minus_one;
  /// ratio_minus_one exceeds the evaluation error bound 10^-digits / n^2.
  bool verified_positive;
};

struct WeightTable {
  ExponentPair pair;
  long target_digits;
  /// Largest working precision used by any row.
  long precision_bits;
  std::vector<WeightRow> rows;

  bool all_verified_positive() const;
};

/// Rows for n_min..n_max, sorted by n.
WeightTable compare_weights(const ExponentPair& pair, std::uint64_t n_min, std::uint64_t n_max,
                            long target_digits);

/// Header `n,w_improved,w_classical,ratio_minus_one`, LF line endings.
std::string to_csv(const WeightTable& table);
/// Array of row objects.
nlohmann::json to_json(const WeightTable& table);

} // namespace hardy

#endif
