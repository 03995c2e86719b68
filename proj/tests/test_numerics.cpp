#include "doctest.h"

#include <random>

#include "hardy/numerics.hpp"

using namespace hardy;

TEST_CASE("BigRational stays reduced") {
  const BigRational a(6, 8);
  CHECK(a.numerator() == 3);
  CHECK(a.denominator() == 4);
  const BigRational b(3, -9);
  CHECK(b.to_string() == "-1/3");
  CHECK((a + b).to_string() == "5/12");
  CHECK((a * b).to_string() == "-1/4");
  CHECK((a / b).to_string() == "-9/4");
  CHECK_THROWS_AS(a / BigRational(0), std::domain_error);
  CHECK(BigRational(4, 2).is_integer());
}

TEST_CASE("BigRational::parse is exact") {
  CHECK(BigRational::parse("3/2") == BigRational(3, 2));
  CHECK(BigRational::parse("2.5") == BigRational(5, 2));
  CHECK(BigRational::parse("-0.001") == BigRational(-1, 1000));
  CHECK(BigRational::parse("1.5e-3") == BigRational(3, 2000));
  CHECK(BigRational::parse("12") == BigRational(12));
  CHECK(BigRational::parse("0.1") + BigRational::parse("0.2") == BigRational::parse("0.3"));
  CHECK_THROWS(BigRational::parse("abc"));
  CHECK_THROWS(BigRational::parse("1/0"));
  CHECK_THROWS(BigRational::parse(""));
}

TEST_CASE("binom_general_rational examples") {
  CHECK(binom_general_rational(BigRational(7, 3), 0) == BigRational(1));
  CHECK(binom_general_rational(BigRational(1, 2), 2) == BigRational(-1, 8));
  CHECK(binom_general_rational(BigRational(1, 2), 4) == BigRational(-5, 128));
  CHECK(binom_general_rational(BigRational(5), 2) == BigRational(10));
  CHECK(binom_general_rational(BigRational(3), 5) == BigRational(0));
}

TEST_CASE("binomial times k! is the falling factorial") {
  for (const char* text : {"1/2", "2/3", "-7/5", "13/4", "1/1000"}) {
    const BigRational alpha = BigRational::parse(text);
    BigRational falling(1);
    BigRational factorial(1);
    for (unsigned long k = 0; k <= 25; ++k) {
      CHECK(binom_general_rational(alpha, k) * factorial == falling);
      falling *= alpha - BigRational(static_cast<long>(k));
      factorial *= BigRational(static_cast<long>(k + 1));
    }
  }
}

TEST_CASE("Pascal recurrence holds exactly") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-40, 40);
  std::uniform_int_distribution<long> den(1, 17);
  for (int trial = 0; trial < 50; ++trial) {
    const BigRational alpha(num(rng), den(rng));
    for (unsigned long k = 1; k <= 20; ++k) {
      CHECK(binom_general_rational(alpha, k) ==
            binom_general_rational(alpha - BigRational(1), k) +
                binom_general_rational(alpha - BigRational(1), k - 1));
    }
  }
}

TEST_CASE("q |binom(1/q, k)| is 1 at k = 1 and below 1 after, with alternating sign") {
  for (const char* text : {"1.01", "1.5", "2", "7/3", "4", "10"}) {
    const ExponentPair pair = ExponentPair::parse(text);
    const BigRational q = pair.q_exact();
    const BigRational r = pair.inv_q_exact();
    CHECK(abs(q * binom_general_rational(r, 1)) == BigRational(1));
    for (unsigned long k = 2; k <= 40; ++k) {
      CHECK(abs(q * binom_general_rational(r, k)) < BigRational(1));
    }
    for (unsigned long k = 1; k <= 40; ++k) {
      const int sign = binom_general_rational(r, k + 1).sign();
      CHECK(sign == (k % 2 == 1 ? -1 : 1));
    }
  }
}

TEST_CASE("binom_general_real agrees with the exact path") {
  const PrecReal half = PrecReal::parse("0.5", 128);
  CHECK(binom_general_real(half, 2, 128) == PrecReal(BigRational(-1, 8), 128));
  const PrecReal two_thirds(BigRational(2, 3), 128);
  const PrecReal expected(BigRational(4, 81), 128);
  CHECK(abs(binom_general_real(two_thirds, 3, 128) - expected) < pow2(-120, 128));
  CHECK(binom_general_real(PrecReal(BigRational(3, 7), 64), 0, 64) == PrecReal(1L, 64));
  CHECK_THROWS(binom_general_real(half, 2, 8));
}

TEST_CASE("required_precision covers the stated minimum") {
  const ExponentPair two = ExponentPair::parse("2");
  CHECK(required_precision(two, 1, 30) >= 132);
  CHECK(required_precision(two, 1000, 30) >= 152);
  CHECK(required_precision(ExponentPair::parse("4"), 1000000, 50) >= 279);
  // p below 2 still gets 2 log2(n) bits.
  CHECK(required_precision(ExponentPair::parse("1.1"), 1 << 20, 10) >= 34 + 40 + 32);
  CHECK_THROWS_AS(PrecReal(1L, required_precision(two, 1, 10'000'000)), PrecisionError);
}

TEST_CASE("PrecReal refuses mixed precisions") {
  const PrecReal a(1L, 64);
  const PrecReal b(1L, 128);
  CHECK_THROWS_AS(a + b, PrecisionMismatch);
  CHECK_THROWS_AS((void)(a < b), PrecisionMismatch);
  CHECK(a.at(128) == b);
}

TEST_CASE("PrecReal formatting has the requested significant digits") {
  const PrecReal third = PrecReal(1L, 200) / 3L;
  CHECK(third.to_string(5) == "3.3333e-01");
  CHECK(sqrt(PrecReal(2L, 200)).to_string(20) == "1.4142135623730950488e+00");
}

TEST_CASE("ExponentPair") {
  const ExponentPair pair = ExponentPair::parse("3/2");
  CHECK(pair.is_rational());
  CHECK_FALSE(pair.is_integer());
  CHECK(pair.q_exact() == BigRational(3));
  CHECK(pair.inv_q_exact() == BigRational(1, 3));
  CHECK(ExponentPair::parse("4").integer_value() == 4L);
  CHECK_THROWS_AS(ExponentPair::parse("1"), std::domain_error);
  CHECK_THROWS_AS(ExponentPair::parse("0.5"), std::domain_error);

  const ExponentPair real = ExponentPair::real(sqrt(PrecReal(2L, 128)) + 1L);
  CHECK_FALSE(real.is_rational());
  CHECK_THROWS_AS(real.p_exact(), std::logic_error);
  const PrecReal one = PrecReal(1L, 128);
  CHECK(abs(one / real.p(128) + one / real.q(128) - one) < pow2(-120, 128));
}
