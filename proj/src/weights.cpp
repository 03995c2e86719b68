#include "hardy/weights.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hardy {

std::string_view to_string(WeightKind kind) {
  return kind == WeightKind::improved ? "improved" : "classical";
}

WeightKind parse_weight_kind(std::string_view text) {
  if (text == "improved") return WeightKind::improved;
  if (text == "classical") return WeightKind::classical;
  throw std::invalid_argument("unknown weight kind '" + std::string(text) + "'");
}

PrecReal pow_p_minus_1(const PrecReal& base, const ExponentPair& pair) {
  if (const auto p = pair.integer_value()) return pow(base, *p - 1);
  return pow(base, pair.p(base.bits()) - 1);
}

PrecReal pow_p(const PrecReal& base, const ExponentPair& pair) {
  if (const auto p = pair.integer_value()) return pow(base, *p);
  return pow(base, pair.p(base.bits()));
}

PrecReal eval_w1_closed_bits(const ExponentPair& pair, long bits) {
  const PrecReal inv_q = pair.inv_q(bits);
  PrecReal two_pow(bits);
  mpfr_exp2(two_pow.get(), inv_q.get(), MPFR_RNDN);
  return 1L - pow_p_minus_1(two_pow - 1, pair);
}

PrecReal eval_w1_closed(const ExponentPair& pair, long target_digits) {
  return eval_w1_closed_bits(pair, required_precision(pair, 1, target_digits));
}

PrecReal eval_w_of_x(const ExponentPair& pair, const PrecReal& x) {
  const long bits = x.bits();
  if (x.sign() <= 0 || x > PrecReal(1L, bits)) {
    throw std::domain_error("eval_w_of_x: x must lie in (0, 1]");
  }
  if (x == PrecReal(1L, bits)) return eval_w1_closed_bits(pair, bits);
  const PrecReal inv_q = pair.inv_q(bits);
  // 1 - (1-x)^e and (1+x)^e - 1 without the leading-digit cancellation.
  const PrecReal left = -expm1(inv_q * log1p(-x));
  const PrecReal right = expm1(inv_q * log1p(x));
  return pow_p_minus_1(left, pair) - pow_p_minus_1(right, pair);
}

PrecReal eval_w_bits(const ExponentPair& pair, std::uint64_t n, long bits) {
  if (n < 1) throw std::invalid_argument("eval_w: n must be at least 1");
  if (n == 1) return eval_w1_closed_bits(pair, bits);
  PrecReal x(1L, bits);
  mpfr_div_ui(x.get(), x.get(), n, MPFR_RNDN);
  return eval_w_of_x(pair, x);
}

PrecReal eval_w(const ExponentPair& pair, std::uint64_t n, long target_digits) {
  return eval_w_bits(pair, n, required_precision(pair, n, target_digits));
}

PrecReal eval_w_classical_bits(const ExponentPair& pair, std::uint64_t n, long bits) {
  if (n < 1) throw std::invalid_argument("eval_w_classical: n must be at least 1");
  PrecReal base = pair.inv_q(bits);
  mpfr_div_ui(base.get(), base.get(), n, MPFR_RNDN);
  return pow_p(base, pair);
}

PrecReal eval_w_classical(const ExponentPair& pair, std::uint64_t n, long target_digits) {
  return eval_w_classical_bits(pair, n, required_precision(pair, n, target_digits));
}

bool WeightTable::all_verified_positive() const {
  for (const auto& row : rows) {
    if (!row.verified_positive) return false;
  }
  return true;
}

WeightTable compare_weights(const ExponentPair& pair, std::uint64_t n_min, std::uint64_t n_max,
                            long target_digits) {
  if (n_min < 1 || n_min > n_max) {
    throw std::invalid_argument("compare_weights: need 1 <= n_min <= n_max");
  }
  WeightTable table{pair, target_digits, 0, {}};
  table.rows.reserve(n_max - n_min + 1);
  for (std::uint64_t n = n_min; n <= n_max; ++n) {
    // The ratio itself is O(n^-2), so carry 2*log2(n) extra bits to keep
    // target_digits significant digits in it.
    const long extra = static_cast<long>(std::ceil(2.0 * std::log2(static_cast<double>(n))));
    const long bits = required_precision(pair, n, target_digits) + extra;
    PrecReal w = eval_w_bits(pair, n, bits);
    PrecReal wh = eval_w_classical_bits(pair, n, bits);
    PrecReal ratio = (w - wh) / wh;

    PrecReal tolerance = PrecReal::parse("1e-" + std::to_string(target_digits), bits);
    mpfr_div_ui(tolerance.get(), tolerance.get(), n, MPFR_RNDN);
    mpfr_div_ui(tolerance.get(), tolerance.get(), n, MPFR_RNDN);
    const bool positive = ratio > tolerance && w.sign() > 0;

    table.precision_bits = std::max(table.precision_bits, bits);
    table.rows.push_back({n, std::move(w), std::move(wh), std::move(ratio), positive});
  }
  return table;
}

std::string to_csv(const WeightTable& table) {
  const int digits = static_cast<int>(table.target_digits);
  std::ostringstream out;
  out << "n,w_improved,w_classical,ratio_minus_one\n";
  for (const auto& row : table.rows) {
    out << row.n << ',' << row.w_improved.to_string(digits) << ','
        << row.w_classical.to_string(digits) << ',' << row.ratio_minus_one.to_string(digits)
        << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const WeightTable& table) {
  const int digits = static_cast<int>(table.target_digits);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"n", row.n},
                    {"w_improved", row.w_improved.to_string(digits)},
                    {"w_classical", row.w_classical.to_string(digits)},
                    {"ratio_minus_one", row.ratio_minus_one.to_string(digits)},
                    {"verified_positive", row.verified_positive}});
  }
  return rows;
}

} // namespace hardy
