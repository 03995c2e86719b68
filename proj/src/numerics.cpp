#include "hardy/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>

namespace hardy {

namespace {

void validate_bits(long bits) {
  if (bits < MPFR_PREC_MIN || bits > kMaxPrecisionBits) {
    throw PrecisionError("working precision of " + std::to_string(bits) +
                         " bits is outside the supported range [" +
                         std::to_string(MPFR_PREC_MIN) + ", " +
                         std::to_string(kMaxPrecisionBits) + "]");
  }
}

void check_same(const PrecReal& a, const PrecReal& b) {
  if (a.bits() != b.bits()) {
    throw PrecisionMismatch("PrecReal precision mismatch: " + std::to_string(a.bits()) +
                            " vs " + std::to_string(b.bits()) + " bits");
  }
}

mpz_class parse_integer(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty integer");
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("malformed integer '" + s + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) {
      throw std::invalid_argument("malformed integer '" + s + "'");
    }
  }
  if (s[0] == '+') s.erase(0, 1);
  return mpz_class(s, 10);
}

} // namespace

long bits_for_digits(long digits) {
  return static_cast<long>(std::ceil(static_cast<double>(digits) * std::log2(10.0)));
}

// ---------------------------------------------------------------------------
// BigRational

BigRational::BigRational(long num, long den) : BigRational(mpz_class(num), mpz_class(den)) {}

BigRational::BigRational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::domain_error("BigRational: zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

BigRational::BigRational(const mpq_class& value) : value_(value) { value_.canonicalize(); }

BigRational BigRational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    return BigRational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
  }

  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = s[pos] == '-';
    ++pos;
  }
  std::string digits;
  long frac_len = 0;
  bool seen_point = false;
  for (; pos < s.size() && s[pos] != 'e' && s[pos] != 'E'; ++pos) {
    const char c = s[pos];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_len;
    } else {
      throw std::invalid_argument("malformed number '" + s + "'");
    }
  }
  if (digits.empty()) throw std::invalid_argument("malformed number '" + s + "'");
  long exponent = 0;
  if (pos < s.size()) {
    const mpz_class e = parse_integer(std::string_view(s).substr(pos + 1));
    if (abs(e) > 100000) throw std::invalid_argument("exponent too large in '" + s + "'");
    exponent = e.get_si();
  }
  mpz_class num(digits, 10);
  if (negative) num = -num;
  const long shift = exponent - frac_len;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  return shift >= 0 ? BigRational(num * scale, mpz_class(1)) : BigRational(num, scale);
}

BigRational& BigRational::operator+=(const BigRational& rhs) {
  value_ += rhs.value_;
  return *this;
}
BigRational& BigRational::operator-=(const BigRational& rhs) {
  value_ -= rhs.value_;
  return *this;
}
BigRational& BigRational::operator*=(const BigRational& rhs) {
  value_ *= rhs.value_;
  return *this;
}
BigRational& BigRational::operator/=(const BigRational& rhs) {
  if (rhs.sign() == 0) throw std::domain_error("BigRational: division by zero");
  value_ /= rhs.value_;
  return *this;
}

BigRational abs(const BigRational& x) { return x.sign() < 0 ? -x : x; }

BigRational pow(const BigRational& base, unsigned long exponent) {
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.raw().get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.raw().get_den_mpz_t(), exponent);
  return BigRational(num, den);
}

// ---------------------------------------------------------------------------
// PrecReal

PrecReal::PrecReal(long bits) {
  validate_bits(bits);
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

PrecReal::PrecReal(long value, long bits) : PrecReal(bits) { mpfr_set_si(value_, value, MPFR_RNDN); }

PrecReal::PrecReal(double value, long bits) : PrecReal(bits) { mpfr_set_d(value_, value, MPFR_RNDN); }

PrecReal::PrecReal(const BigRational& value, long bits) : PrecReal(bits) {
  mpfr_set_q(value_, value.raw().get_mpq_t(), MPFR_RNDN);
}

PrecReal PrecReal::parse(std::string_view decimal, long bits) {
  PrecReal out(bits);
  const std::string s(decimal);
  if (s.empty() || mpfr_set_str(out.value_, s.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("malformed decimal '" + s + "'");
  }
  return out;
}

PrecReal::PrecReal(const PrecReal& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

PrecReal::PrecReal(PrecReal&& other) noexcept {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

PrecReal& PrecReal::operator=(const PrecReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

PrecReal& PrecReal::operator=(PrecReal&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

PrecReal::~PrecReal() { mpfr_clear(value_); }

PrecReal PrecReal::at(long bits) const {
  PrecReal out(bits);
  mpfr_set(out.value_, value_, MPFR_RNDN);
  return out;
}

std::string PrecReal::to_string(int digits) const {
  if (digits < 1) throw std::invalid_argument("to_string needs at least one digit");
  char* buffer = nullptr;
  if (mpfr_asprintf(&buffer, "%.*Re", digits - 1, value_) < 0) {
    throw std::runtime_error("mpfr_asprintf failed");
  }
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

PrecReal PrecReal::operator-() const {
  PrecReal out(bits());
  mpfr_neg(out.value_, value_, MPFR_RNDN);
  return out;
}

PrecReal& PrecReal::operator+=(const PrecReal& rhs) {
  check_same(*this, rhs);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
PrecReal& PrecReal::operator-=(const PrecReal& rhs) {
  check_same(*this, rhs);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
PrecReal& PrecReal::operator*=(const PrecReal& rhs) {
  check_same(*this, rhs);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
PrecReal& PrecReal::operator/=(const PrecReal& rhs) {
  check_same(*this, rhs);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

PrecReal operator+(PrecReal a, long b) {
  mpfr_add_si(a.value_, a.value_, b, MPFR_RNDN);
  return a;
}
PrecReal operator-(PrecReal a, long b) {
  mpfr_sub_si(a.value_, a.value_, b, MPFR_RNDN);
  return a;
}
PrecReal operator-(long a, PrecReal b) {
  mpfr_si_sub(b.value_, a, b.value_, MPFR_RNDN);
  return b;
}
PrecReal operator*(PrecReal a, long b) {
  mpfr_mul_si(a.value_, a.value_, b, MPFR_RNDN);
  return a;
}
PrecReal operator/(PrecReal a, long b) {
  mpfr_div_si(a.value_, a.value_, b, MPFR_RNDN);
  return a;
}

bool operator==(const PrecReal& a, const PrecReal& b) {
  check_same(a, b);
  return mpfr_equal_p(a.value_, b.value_) != 0;
}

std::partial_ordering operator<=>(const PrecReal& a, const PrecReal& b) {
  check_same(a, b);
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

#define HARDY_UNARY(name, fn)                \
  PrecReal name(const PrecReal& x) {         \
    PrecReal out(x.bits());                  \
    fn(out.get(), x.get(), MPFR_RNDN);       \
    return out;                              \
  }

HARDY_UNARY(abs, mpfr_abs)
HARDY_UNARY(sqrt, mpfr_sqrt)
HARDY_UNARY(exp, mpfr_exp)
HARDY_UNARY(log, mpfr_log)
HARDY_UNARY(log1p, mpfr_log1p)
HARDY_UNARY(expm1, mpfr_expm1)

#undef HARDY_UNARY

PrecReal pow(const PrecReal& base, const PrecReal& exponent) {
  check_same(base, exponent);
  PrecReal out(base.bits());
  mpfr_pow(out.get(), base.get(), exponent.get(), MPFR_RNDN);
  return out;
}

PrecReal pow(const PrecReal& base, long exponent) {
  PrecReal out(base.bits());
  mpfr_pow_si(out.get(), base.get(), exponent, MPFR_RNDN);
  return out;
}

PrecReal pow2(long exponent, long bits) {
  PrecReal out(bits);
  mpfr_set_si_2exp(out.get(), 1, exponent, MPFR_RNDN);
  return out;
}

PrecReal max(const PrecReal& a, const PrecReal& b) { return a < b ? b : a; }

// ---------------------------------------------------------------------------
// ExponentPair

ExponentPair ExponentPair::rational(const BigRational& p) {
  if (p <= BigRational(1)) {
    throw std::domain_error("exponent p must exceed 1, got " + p.to_string());
  }
  return ExponentPair(p);
}

ExponentPair ExponentPair::real(const PrecReal& p) {
  if (!p.is_finite() || p <= PrecReal(1L, p.bits())) {
    throw std::domain_error("exponent p must be a finite value above 1");
  }
  return ExponentPair(p);
}

ExponentPair ExponentPair::parse(std::string_view text) { return rational(BigRational::parse(text)); }

bool ExponentPair::is_integer() const { return is_rational() && p_exact().is_integer(); }

std::optional<long> ExponentPair::integer_value() const {
  if (!is_integer()) return std::nullopt;
  const mpz_class n = p_exact().numerator();
  if (!n.fits_slong_p()) return std::nullopt;
  return n.get_si();
}

const BigRational& ExponentPair::p_exact() const {
  if (const auto* r = std::get_if<BigRational>(&p_)) return *r;
  throw std::logic_error("exponent p is not rational");
}

BigRational ExponentPair::q_exact() const {
  const BigRational& p = p_exact();
  return p / (p - BigRational(1));
}

BigRational ExponentPair::inv_q_exact() const {
  const BigRational& p = p_exact();
  return (p - BigRational(1)) / p;
}

PrecReal ExponentPair::p(long bits) const {
  if (const auto* r = std::get_if<BigRational>(&p_)) return PrecReal(*r, bits);
  return std::get<PrecReal>(p_).at(bits);
}

PrecReal ExponentPair::q(long bits) const {
  if (is_rational()) return PrecReal(q_exact(), bits);
  const PrecReal pv = p(bits);
  return pv / (pv - 1);
}

PrecReal ExponentPair::inv_q(long bits) const {
  if (is_rational()) return PrecReal(inv_q_exact(), bits);
  const PrecReal pv = p(bits);
  return (pv - 1) / pv;
}

double ExponentPair::p_double() const {
  if (const auto* r = std::get_if<BigRational>(&p_)) return r->to_double();
  return std::get<PrecReal>(p_).to_double();
}

double ExponentPair::q_double() const {
  if (is_rational()) return q_exact().to_double();
  return q(std::max(64L, std::get<PrecReal>(p_).bits())).to_double();
}

std::string ExponentPair::to_string() const {
  if (const auto* r = std::get_if<BigRational>(&p_)) return r->to_string();
  const PrecReal& v = std::get<PrecReal>(p_);
  return v.to_string(static_cast<int>(std::max(2.0, std::floor(v.bits() * 0.30103))));
}

// ---------------------------------------------------------------------------
// Binomials and precision policy

BigRational binom_general_rational(const BigRational& alpha, unsigned long k) {
  BigRational out(1);
  for (unsigned long i = 0; i < k; ++i) {
    out *= alpha - BigRational(static_cast<long>(i));
    out /= BigRational(static_cast<long>(i + 1));
  }
  return out;
}

PrecReal binom_general_real(const PrecReal& alpha, unsigned long k, long bits) {
  if (bits < 16) throw std::invalid_argument("binom_general_real needs at least 16 bits");
  const PrecReal a = alpha.at(bits);
  PrecReal out(1L, bits);
  for (unsigned long i = 0; i < k; ++i) {
    out *= a - static_cast<long>(i);
    out = out / static_cast<long>(i + 1);
  }
  return out;
}

long required_precision(const ExponentPair& pair, std::uint64_t n, long target_digits) {
  if (n < 1) throw std::invalid_argument("required_precision: n must be at least 1");
  if (target_digits < 1) throw std::invalid_argument("required_precision: need at least one digit");
  const double lost = std::max(pair.p_double(), 2.0) * std::log2(static_cast<double>(n));
  return bits_for_digits(target_digits) + static_cast<long>(std::ceil(lost)) + 32;
}

} // namespace hardy
