#ifndef HARDY_NUMERICS_HPP
#define HARDY_NUMERICS_HPP

// Arbitrary-precision scaffolding: exact rationals (GMP), fixed-precision
// reals (MPFR), the Hoelder pair (p, q) and generalized binomial coefficients.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>
#include <mpfr.h>

namespace hardy {

/// Thrown when a requested working precision cannot be honoured.
class PrecisionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown when two PrecReal values with different precisions meet.
class PrecisionMismatch : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Largest working precision the library accepts (about 5 million digits).
inline constexpr long kMaxPrecisionBits = 1L << 24;

/// Number of bits needed to carry `digits` decimal digits.
long bits_for_digits(long digits);

// ---------------------------------------------------------------------------
// BigRational

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
class BigRational {
public:
  BigRational() = default;
  BigRational(long value) : value_(value) {} // NOLINT(implicit)
  BigRational(long num, long den);
  BigRational(const mpz_class& num, const mpz_class& den);
  explicit BigRational(const mpq_class& value);

  /// Parses "a/b", an integer, or a finite decimal such as "2.5", "-0.001"
  /// or "1.5e-3". Decimals are converted exactly.
  static BigRational parse(std::string_view text);

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }
  double to_double() const { return value_.get_d(); }

  /// "num/den", or just "num" for integers.
  std::string to_string() const { return value_.get_str(); }

  BigRational operator-() const { return BigRational(mpq_class(-value_)); }
  BigRational& operator+=(const BigRational& rhs);
  BigRational& operator-=(const BigRational& rhs);
  BigRational& operator*=(const BigRational& rhs);
  BigRational& operator/=(const BigRational& rhs);

  friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
  friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
  friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
  friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }

  friend bool operator==(const BigRational& a, const BigRational& b) {
    return cmp(a.value_, b.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

private:
  mpq_class value_;
};

BigRational abs(const BigRational& x);
BigRational pow(const BigRational& base, unsigned long exponent);

// ---------------------------------------------------------------------------
// PrecReal

/// MPFR value tied to an explicit precision. Arithmetic rounds to nearest at
/// that precision; mixing precisions throws PrecisionMismatch.
class PrecReal {
public:
  explicit PrecReal(long bits);
  PrecReal(long value, long bits);
  PrecReal(int value, long bits) : PrecReal(static_cast<long>(value), bits) {}
  PrecReal(double value, long bits);
  PrecReal(const BigRational& value, long bits);
  static PrecReal parse(std::string_view decimal, long bits);

  PrecReal(const PrecReal& other);
  PrecReal(PrecReal&& other) noexcept;
  PrecReal& operator=(const PrecReal& other);
  PrecReal& operator=(PrecReal&& other) noexcept;
  ~PrecReal();

  long bits() const { return static_cast<long>(mpfr_get_prec(value_)); }
  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  /// Same value rounded (or exactly widened) to another precision.
  PrecReal at(long bits) const;

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }

  /// Scientific notation with exactly `digits` significant digits.
  std::string to_string(int digits) const;

  PrecReal operator-() const;
  PrecReal& operator+=(const PrecReal& rhs);
  PrecReal& operator-=(const PrecReal& rhs);
  PrecReal& operator*=(const PrecReal& rhs);
  PrecReal& operator/=(const PrecReal& rhs);

  friend PrecReal operator+(PrecReal a, const PrecReal& b) { return a += b; }
  friend PrecReal operator-(PrecReal a, const PrecReal& b) { return a -= b; }
  friend PrecReal operator*(PrecReal a, const PrecReal& b) { return a *= b; }
  friend PrecReal operator/(PrecReal a, const PrecReal& b) { return a /= b; }

  friend PrecReal operator+(PrecReal a, long b);
  friend PrecReal operator-(PrecReal a, long b);
  friend PrecReal operator-(long a, PrecReal b);
  friend PrecReal operator*(PrecReal a, long b);
  friend PrecReal operator/(PrecReal a, long b);

  friend bool operator==(const PrecReal& a, const PrecReal& b);
  friend std::partial_ordering operator<=>(const PrecReal& a, const PrecReal& b);

private:
  mpfr_t value_;
};

PrecReal abs(const PrecReal& x);
PrecReal sqrt(const PrecReal& x);
PrecReal exp(const PrecReal& x);
PrecReal log(const PrecReal& x);
PrecReal log1p(const PrecReal& x);
PrecReal expm1(const PrecReal& x);
PrecReal pow(const PrecReal& base, const PrecReal& exponent);
PrecReal pow(const PrecReal& base, long exponent);
/// 2^exponent at the given precision.
PrecReal pow2(long exponent, long bits);
PrecReal max(const PrecReal& a, const PrecReal& b);

// ---------------------------------------------------------------------------
// ExponentPair

/// Hoelder-conjugate pair (p, q) with 1/p + 1/q = 1 and p > 1. Holds p
/// exactly when it is rational, otherwise as a PrecReal.
class ExponentPair {
public:
  static ExponentPair rational(const BigRational& p);
  static ExponentPair real(const PrecReal& p);
  /// Exact parse of "a/b" or a finite decimal.
  static ExponentPair parse(std::string_view text);

  bool is_rational() const { return std::holds_alternative<BigRational>(p_); }
  bool is_integer() const;
  /// p as an integer, if it is one.
  std::optional<long> integer_value() const;

  const BigRational& p_exact() const;
  BigRational q_exact() const;
  /// (p - 1) / p == 1 / q.
  BigRational inv_q_exact() const;

  PrecReal p(long bits) const;
  PrecReal q(long bits) const;
  PrecReal inv_q(long bits) const;
  double p_double() const;
  double q_double() const;

  std::string to_string() const;

private:
  explicit ExponentPair(std::variant<BigRational, PrecReal> p) : p_(std::move(p)) {}
  std::variant<BigRational, PrecReal> p_;
};

// ---------------------------------------------------------------------------
// Generalized binomial coefficients

/// binom(alpha, k) = alpha (alpha - 1) ... (alpha - k + 1) / k!, exactly.
BigRational binom_general_rational(const BigRational& alpha, unsigned long k);

/// Same product at `bits` of precision. Requires bits >= 16.
PrecReal binom_general_real(const PrecReal& alpha, unsigned long k, long bits);

/// Working precision for evaluating w_p(n) to `target_digits` digits:
/// digits * log2(10) + max(p, 2) * log2(n) + 32 guard bits.
long required_precision(const ExponentPair& pair, std::uint64_t n, long target_digits);

} // namespace hardy

#endif
