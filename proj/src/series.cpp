#include "hardy/series.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hardy {

namespace {

BigRational scalar(long v, const Ring&, const BigRational*) { return BigRational(v); }
PrecReal scalar(long v, const Ring& ring, const PrecReal*) { return PrecReal(v, ring.bits); }

template <class T>
T make(long v, const Ring& ring) {
  return scalar(v, ring, static_cast<const T*>(nullptr));
}

bool is_exact_zero(const BigRational& v) { return v.sign() == 0; }
bool is_exact_zero(const PrecReal& v) { return v.is_zero(); }

Ring ring_of(const BigRational&) { return Ring::exact(); }
Ring ring_of(const PrecReal& v) { return Ring::real(v.bits()); }

void check_ring(const BigRational&, const Ring& ring) {
  if (ring.kind != Ring::Kind::exact) throw std::invalid_argument("rational coefficient in a real ring");
}
void check_ring(const PrecReal& v, const Ring& ring) {
  if (ring.kind != Ring::Kind::real || v.bits() != ring.bits) {
    throw std::invalid_argument("real coefficient does not match ring " + ring.to_string());
  }
}

PrecReal to_real(const BigRational& v, long bits) { return PrecReal(v, bits); }
PrecReal to_real(const PrecReal& v, long bits) { return v.at(bits); }

template <class T>
T binom_next(const T& previous, const T& alpha, std::size_t k) {
  // binom(alpha, k) from binom(alpha, k - 1).
  T out = previous * (alpha - make<T>(static_cast<long>(k - 1), ring_of(alpha)));
  return out / make<T>(static_cast<long>(k), ring_of(alpha));
}

template <class T>
PowerSeries<T> binomial_series_impl(const T& alpha, int sign, std::size_t order) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("binomial_series: sign must be +1 or -1");
  const Ring ring = ring_of(alpha);
  std::vector<T> coeffs;
  coeffs.reserve(order + 1);
  coeffs.push_back(make<T>(1, ring));
  T binom = make<T>(1, ring);
  for (std::size_t k = 1; k <= order; ++k) {
    binom = binom_next(binom, alpha, k);
    coeffs.push_back((sign < 0 && k % 2 == 1) ? T(-binom) : binom);
  }
  return PowerSeries<T>(std::move(coeffs), ring);
}

template <class T>
PowerSeries<T> pow_binomial_impl(const PowerSeries<T>& h, const T& alpha, std::size_t order) {
  if (!is_exact_zero(h[0])) {
    throw std::invalid_argument("series_pow_binomial: h must have zero constant term");
  }
  if (ring_of(alpha) != h.ring()) throw std::invalid_argument("series_pow_binomial: ring mismatch");
  const std::size_t n = std::min(order, h.order());
  const PowerSeries<T> base = h.truncated(n);
  PowerSeries<T> result = PowerSeries<T>::one(n, h.ring());
  PowerSeries<T> power = PowerSeries<T>::one(n, h.ring());
  T binom = make<T>(1, h.ring());
  // h^k starts at x^k, so k <= n suffices.
  for (std::size_t k = 1; k <= n; ++k) {
    power = series_mul(power, base);
    binom = binom_next(binom, alpha, k);
    result += power.scaled(binom);
  }
  return result;
}

template <class T>
SeriesValue series_eval_impl(const PowerSeries<T>& s, const PrecReal& x) {
  const long bits = x.bits();
  const PrecReal half = PrecReal(1L, bits) / 2;
  if (x.sign() < 0 || x > half) throw std::domain_error("series_eval: x must lie in [0, 1/2]");
  const auto& c = s.coeffs();
  PrecReal value(bits);
  for (std::size_t k = c.size(); k-- > 0;) value = value * x + to_real(c[k], bits);

  PrecReal last = abs(to_real(c.back(), bits));
  if (c.size() >= 2) last = max(last, abs(to_real(c[c.size() - 2], bits)));
  PrecReal tail = last * pow(x, static_cast<long>(s.order() + 1)) / (1L - x);
  return {std::move(value), std::move(tail)};
}

template <class T>
PowerSeries<T> correction_impl(const T& inv_q, const T& q, const T& alpha, std::size_t order) {
  const Ring ring = ring_of(inv_q);
  const std::size_t n = order + 1;
  // g(x) = q sum_{k>=1} binom(1/q, k+1) x^k and its reflection g(-x).
  std::vector<T> g;
  std::vector<T> g_reflected;
  g.reserve(n + 1);
  g_reflected.reserve(n + 1);
  g.push_back(make<T>(0, ring));
  g_reflected.push_back(make<T>(0, ring));
  T binom = binom_next(make<T>(1, ring), inv_q, 1);  // binom(1/q, 1)
  for (std::size_t k = 1; k <= n; ++k) {
    binom = binom_next(binom, inv_q, k + 1);
    T coeff = q * binom;
    g_reflected.push_back(k % 2 == 1 ? T(-coeff) : coeff);
    g.push_back(std::move(coeff));
  }
  const PowerSeries<T> plus(std::move(g), ring);
  const PowerSeries<T> minus(std::move(g_reflected), ring);

  const PowerSeries<T> bracket =
      series_pow_binomial(minus, alpha, n) - series_pow_binomial(plus, alpha, n);
  PowerSeries<T> a = bracket.shifted_down(1).scaled(q);
  std::vector<T> coeffs = a.coeffs();
  coeffs[0] -= make<T>(1, ring);
  return PowerSeries<T>(std::move(coeffs), ring);
}

} // namespace

std::string Ring::to_string() const {
  return kind == Kind::exact ? "exact" : "real(" + std::to_string(bits) + ")";
}

template <class T>
PowerSeries<T>::PowerSeries(std::vector<T> coeffs, Ring ring) : coeffs_(std::move(coeffs)), ring_(ring) {
  if (coeffs_.empty()) throw std::invalid_argument("PowerSeries needs at least one coefficient");
  for (const auto& c : coeffs_) check_ring(c, ring_);
}

template <class T>
PowerSeries<T> PowerSeries<T>::zero(std::size_t order, Ring ring) {
  return PowerSeries(std::vector<T>(order + 1, make<T>(0, ring)), ring);
}

template <class T>
PowerSeries<T> PowerSeries<T>::one(std::size_t order, Ring ring) {
  PowerSeries s = zero(order, ring);
  s.coeffs_[0] = make<T>(1, ring);
  return s;
}

template <class T>
PowerSeries<T> PowerSeries<T>::monomial_x(std::size_t order, Ring ring) {
  if (order < 1) throw std::invalid_argument("monomial_x needs order >= 1");
  PowerSeries s = zero(order, ring);
  s.coeffs_[1] = make<T>(1, ring);
  return s;
}

template <class T>
PowerSeries<T> PowerSeries<T>::truncated(std::size_t order) const {
  if (order > this->order()) throw std::invalid_argument("truncated: order exceeds series order");
  return PowerSeries(std::vector<T>(coeffs_.begin(), coeffs_.begin() + order + 1), ring_);
}

template <class T>
PowerSeries<T> PowerSeries<T>::shifted_down(std::size_t k) const {
  if (k > order()) throw std::invalid_argument("shifted_down: shift exceeds series order");
  if (ring_.kind == Ring::Kind::exact) {
    for (std::size_t i = 0; i < k; ++i) {
      if (!is_exact_zero(coeffs_[i])) {
        throw std::logic_error("shifted_down: coefficient " + std::to_string(i) + " is not zero");
      }
    }
  }
  return PowerSeries(std::vector<T>(coeffs_.begin() + k, coeffs_.end()), ring_);
}

template <class T>
PowerSeries<T> PowerSeries<T>::scaled(const T& factor) const {
  check_ring(factor, ring_);
  std::vector<T> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c * factor);
  return PowerSeries(std::move(out), ring_);
}

template <class T>
PowerSeries<T>& PowerSeries<T>::operator+=(const PowerSeries& rhs) {
  if (ring_ != rhs.ring_) throw std::invalid_argument("series addition: ring mismatch");
  coeffs_.resize(std::min(coeffs_.size(), rhs.coeffs_.size()), make<T>(0, ring_));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  return *this;
}

template <class T>
PowerSeries<T>& PowerSeries<T>::operator-=(const PowerSeries& rhs) {
  if (ring_ != rhs.ring_) throw std::invalid_argument("series subtraction: ring mismatch");
  coeffs_.resize(std::min(coeffs_.size(), rhs.coeffs_.size()), make<T>(0, ring_));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  return *this;
}

template <class T>
PowerSeries<T> series_mul(const PowerSeries<T>& a, const PowerSeries<T>& b) {
  if (a.ring() != b.ring()) {
    throw std::invalid_argument("series_mul: ring mismatch (" + a.ring().to_string() + " vs " +
                                b.ring().to_string() + ")");
  }
  const std::size_t order = std::min(a.order(), b.order());
  std::vector<T> out(order + 1, make<T>(0, a.ring()));
  for (std::size_t i = 0; i <= order; ++i) {
    if (is_exact_zero(a[i])) continue;
    for (std::size_t j = 0; i + j <= order; ++j) {
      if (is_exact_zero(b[j])) continue;
      out[i + j] += a[i] * b[j];
    }
  }
  return PowerSeries<T>(std::move(out), a.ring());
}

template class PowerSeries<BigRational>;
template class PowerSeries<PrecReal>;
template ExactSeries series_mul(const ExactSeries&, const ExactSeries&);
template RealSeries series_mul(const RealSeries&, const RealSeries&);

ExactSeries binomial_series(const BigRational& alpha, int sign, std::size_t order) {
  return binomial_series_impl(alpha, sign, order);
}

RealSeries binomial_series(const PrecReal& alpha, int sign, std::size_t order) {
  return binomial_series_impl(alpha, sign, order);
}

ExactSeries series_pow_binomial(const ExactSeries& h, const BigRational& alpha, std::size_t order) {
  return pow_binomial_impl(h, alpha, order);
}

RealSeries series_pow_binomial(const RealSeries& h, const PrecReal& alpha, std::size_t order) {
  return pow_binomial_impl(h, alpha, order);
}

SeriesValue series_eval(const ExactSeries& s, const PrecReal& x) { return series_eval_impl(s, x); }
SeriesValue series_eval(const RealSeries& s, const PrecReal& x) { return series_eval_impl(s, x); }

// ---------------------------------------------------------------------------

namespace {

// Both brackets of w(x) to order `total`, expanded with the integer binomial
// theorem over p - 1:
//   (1 - (1-x)^e)^m = sum_j C(m,j) (-1)^j     (1-x)^(j e)
//   ((1+x)^e - 1)^m = sum_j C(m,j) (-1)^(m-j) (1+x)^(j e)
std::pair<ExactSeries, ExactSeries> integer_p_brackets(long p, std::size_t total) {
  const long m = p - 1;
  const BigRational e(m, p);
  ExactSeries left = ExactSeries::zero(total, Ring::exact());
  ExactSeries right = ExactSeries::zero(total, Ring::exact());
  for (long j = 0; j <= m; ++j) {
    const BigRational c = binom_general_rational(BigRational(m), static_cast<unsigned long>(j));
    const BigRational je = BigRational(j) * e;
    left += binomial_series(je, -1, total).scaled(j % 2 == 0 ? c : -c);
    right += binomial_series(je, +1, total).scaled((m - j) % 2 == 0 ? c : -c);
  }
  return {std::move(left), std::move(right)};
}

} // namespace

WeightExpansion expand_w_integer_p(long p, std::size_t order) {
  if (p < 2) throw std::invalid_argument("expand_w_integer_p: p must be an integer >= 2");
  const std::size_t total = static_cast<std::size_t>(p) + order;
  auto [left, right] = integer_p_brackets(p, total);
  const ExactSeries difference = left - right;

  for (long k = 0; k < p; ++k) {
    if (difference[static_cast<std::size_t>(k)].sign() != 0) {
      throw std::logic_error("expand_w_integer_p: coefficient of x^" + std::to_string(k) +
                             " is nonzero below the leading power");
    }
  }
  const ExactSeries shifted = difference.shifted_down(static_cast<std::size_t>(p));
  WeightExpansion out{p, p, shifted.coeffs()};
  for (std::size_t k = 0; k < out.c.size(); ++k) {
    if (k % 2 == 1 && out.c[k].sign() != 0) {
      throw std::logic_error("expand_w_integer_p: parity violation at k = " + std::to_string(k));
    }
    if (k % 2 == 0 && out.c[k].sign() <= 0) {
      throw std::logic_error("expand_w_integer_p: non-positive c_" + std::to_string(k));
    }
  }
  return out;
}

SeriesValue eval_expansion(const WeightExpansion& expansion, const PrecReal& x) {
  const ExactSeries c(expansion.c, Ring::exact());
  SeriesValue v = series_eval(c, x);
  const PrecReal prefactor = pow(x, expansion.leading_power);
  return {v.value * prefactor, v.tail_bound * prefactor};
}

ExactSeries left_bracket_series(long p, std::size_t order) {
  if (p < 2) throw std::invalid_argument("left_bracket_series: p must be an integer >= 2");
  return integer_p_brackets(p, order).first;
}

CorrectionSeries expand_correction(const ExponentPair& pair, std::size_t order, long bits) {
  if (pair.is_rational()) {
    ExactSeries a = correction_impl(pair.inv_q_exact(), pair.q_exact(),
                                    pair.p_exact() - BigRational(1), order);
    if (a[0].sign() != 0) throw std::logic_error("expand_correction: constant term is nonzero");
    for (std::size_t k = 1; k <= a.order(); k += 2) {
      if (a[k].sign() != 0) {
        throw std::logic_error("expand_correction: odd coefficient " + std::to_string(k) +
                               " is nonzero");
      }
    }
    return a;
  }
  return correction_impl(pair.inv_q(bits), pair.q(bits), pair.p(bits) - 1, order);
}

PositivityProbe probe_correction_positivity(const ExponentPair& pair, std::size_t order) {
  const CorrectionSeries series = expand_correction(pair, order);
  PositivityProbe probe;
  std::visit(
      [&](const auto& s) {
        for (std::size_t k = 2; k <= s.order(); k += 2) {
          ++probe.checked;
          if (s[k].sign() <= 0) probe.non_positive.push_back(k);
        }
      },
      series);
  return probe;
}

nlohmann::json to_json(const WeightExpansion& expansion) {
  nlohmann::json coefficients = nlohmann::json::array();
  for (const auto& c : expansion.c) coefficients.push_back(c.to_string());
  return {{"p", expansion.p},
          {"leading_power", expansion.leading_power},
          {"coefficients", std::move(coefficients)}};
}

std::string to_csv(const WeightExpansion& expansion) {
  std::ostringstream out;
  out << "k,c_k\n";
  for (std::size_t k = 0; k < expansion.c.size(); ++k) {
    out << k << ',' << expansion.c[k].to_string() << '\n';
  }
  return out.str();
}

std::vector<std::string> coefficient_strings(const CorrectionSeries& series, int digits) {
  std::vector<std::string> out;
  if (const auto* exact = std::get_if<ExactSeries>(&series)) {
    for (const auto& c : exact->coeffs()) out.push_back(c.to_string());
  } else {
    for (const auto& c : std::get<RealSeries>(series).coeffs()) out.push_back(c.to_string(digits));
  }
  return out;
}

} // namespace hardy
