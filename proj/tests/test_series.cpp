#include "doctest.h"

#include <string>
#include <vector>

#include "hardy/series.hpp"
#include "hardy/weights.hpp"

using namespace hardy;

namespace {

std::vector<std::string> strings(const WeightExpansion& e) {
  std::vector<std::string> out;
  for (const auto& c : e.c) out.push_back(c.to_string());
  return out;
}

const ExactSeries& exact(const CorrectionSeries& s) { return std::get<ExactSeries>(s); }

} // namespace

TEST_CASE("integer-p coefficient tables") {
  CHECK(strings(expand_w_integer_p(2, 6)) ==
        std::vector<std::string>{"1/4", "0", "5/64", "0", "21/512", "0", "429/16384"});
  CHECK(strings(expand_w_integer_p(3, 4)) ==
        std::vector<std::string>{"8/27", "0", "8/81", "0", "112/2187"});
  CHECK(strings(expand_w_integer_p(4, 4)) ==
        std::vector<std::string>{"81/256", "0", "891/8192", "0", "58653/1048576"});
  CHECK(strings(expand_w_integer_p(2, 0)) == std::vector<std::string>{"1/4"});
  CHECK_THROWS_AS(expand_w_integer_p(1, 4), std::invalid_argument);
}

TEST_CASE("p = 2 coefficients from the square-root series") {
  // w_2 = 2 - sqrt(1 - x) - sqrt(1 + x) = -2 sum_{j even} binom(1/2, j) x^j
  const WeightExpansion e = expand_w_integer_p(2, 40);
  for (std::size_t k = 0; k <= 40; ++k) {
    const BigRational expected =
        k % 2 == 0 ? BigRational(-2) * binom_general_rational(BigRational(1, 2), k + 2)
                   : BigRational(0);
    CHECK(e.c[k] == expected);
  }
}

TEST_CASE("parity and positivity for p = 2..12") {
  for (long p = 2; p <= 12; ++p) {
    const WeightExpansion e = expand_w_integer_p(p, 40);
    CHECK(e.leading_power == p);
    REQUIRE(e.c.size() == 41);
    for (std::size_t k = 0; k <= 40; ++k) {
      if (k % 2 == 1) {
        CHECK(e.c[k].sign() == 0);
      } else {
        CHECK(e.c[k].sign() > 0);
      }
    }
    // c_0 = ((p-1)/p)^p
    CHECK(e.c[0] == pow(BigRational(p - 1, p), static_cast<unsigned long>(p)));
  }
}

TEST_CASE("truncated expansion brackets the closed form") {
  for (long p : {2L, 3L, 5L}) {
    const WeightExpansion e = expand_w_integer_p(p, 40);
    const ExponentPair pair = ExponentPair::rational(BigRational(p));
    for (std::uint64_t n : {3ULL, 10ULL, 1000ULL}) {
      const long bits = 400;
      const PrecReal x = PrecReal(1L, bits) / static_cast<long>(n);
      const SeriesValue v = eval_expansion(e, x);
      const PrecReal w = eval_w_bits(pair, n, bits);
      // eval_w_bits gives up about p log2(n) bits to cancellation.
      const PrecReal rounding = abs(w) * pow2(-(bits - 60), bits);
      INFO("p = " << p << ", n = " << n);
      CHECK(abs(v.value - w) <= v.tail_bound + rounding);
    }
  }
}

TEST_CASE("left bracket is absolutely monotone") {
  for (long p : {2L, 3L, 6L}) {
    const ExactSeries left = left_bracket_series(p, 30);
    for (const auto& c : left.coeffs()) CHECK(c.sign() >= 0);
  }
}

TEST_CASE("correction series against the closed-form coefficients") {
  for (const char* text : {"2", "3", "4", "5", "7/2"}) {
    const BigRational p = BigRational::parse(text);
    const CorrectionSeries s = expand_correction(ExponentPair::rational(p), 4);
    const BigRational c2 = (BigRational(3) * p - BigRational(1)) / (BigRational(8) * p);
    const BigRational p3 = pow(p, 3);
    const BigRational c4 = (BigRational(215) * p3 - BigRational(38) * p * p -
                            BigRational(31) * p + BigRational(6)) /
                           (BigRational(1152) * p3);
    INFO("p = " << text);
    CHECK(exact(s)[0] == BigRational(0));
    CHECK(exact(s)[1] == BigRational(0));
    CHECK(exact(s)[2] == c2);
    CHECK(exact(s)[3] == BigRational(0));
    CHECK(exact(s)[4] == c4);
  }
  CHECK(exact(expand_correction(ExponentPair::parse("2"), 2))[2] == BigRational(5, 16));
  CHECK(exact(expand_correction(ExponentPair::parse("3"), 4))[4] == BigRational(14, 81));
  CHECK(exact(expand_correction(ExponentPair::parse("4"), 2))[2] == BigRational(11, 32));
}

TEST_CASE("correction series matches w / w^H - 1") {
  const ExponentPair pair = ExponentPair::parse("5/2");
  const CorrectionSeries s = expand_correction(pair, 40);
  const long bits = 300;
  const std::uint64_t n = 50;
  const PrecReal x = PrecReal(1L, bits) / static_cast<long>(n);
  const SeriesValue v = series_eval(exact(s), x);
  const PrecReal ratio = eval_w_bits(pair, n, bits) / eval_w_classical_bits(pair, n, bits) - 1L;
  CHECK(abs(v.value - ratio) <= v.tail_bound);
}

TEST_CASE("irrational p takes the real path") {
  const long bits = 256;
  const PrecReal p = sqrt(PrecReal(5L, bits));
  const CorrectionSeries s = expand_correction(ExponentPair::real(p), 4, bits);
  REQUIRE(std::holds_alternative<RealSeries>(s));
  const RealSeries& r = std::get<RealSeries>(s);
  const PrecReal c2 = (p * 3L - 1L) / (p * 8L);
  CHECK(abs(r[2] - c2) < pow2(-200, bits));
  CHECK(abs(r[1]) < pow2(-200, bits));

  const PositivityProbe probe = probe_correction_positivity(ExponentPair::real(p), 20);
  CHECK(probe.checked == 10);
}

TEST_CASE("series arithmetic") {
  const Ring q = Ring::exact();
  const ExactSeries root = binomial_series(BigRational(1, 2), 1, 12);
  const ExactSeries square = series_mul(root, root);
  CHECK(square[0] == BigRational(1));
  CHECK(square[1] == BigRational(1));
  for (std::size_t k = 2; k <= 12; ++k) CHECK(square[k] == BigRational(0));

  // sqrt((1 + x)^2) = 1 + x through the composed binomial series.
  const ExactSeries h({BigRational(0), BigRational(2), BigRational(1)}, q);
  const ExactSeries composed = series_pow_binomial(h.truncated(2), BigRational(1, 2), 2);
  CHECK(composed[0] == BigRational(1));
  CHECK(composed[1] == BigRational(1));
  CHECK(composed[2] == BigRational(0));
  CHECK_THROWS_AS(series_pow_binomial(ExactSeries::one(3, q), BigRational(1, 2), 3),
                  std::invalid_argument);

  const ExactSeries a = ExactSeries::monomial_x(4, q);
  const ExactSeries b = ExactSeries::one(2, q);
  CHECK((a + b).order() == 2);
  CHECK_THROWS_AS(a.shifted_down(2), std::logic_error);
  CHECK(series_mul(a, a).shifted_down(2)[0] == BigRational(1));
}

TEST_CASE("ring mismatch is rejected") {
  const RealSeries a = RealSeries::one(3, Ring::real(64));
  const RealSeries b = RealSeries::one(3, Ring::real(128));
  CHECK_THROWS_AS(series_mul(a, b), std::invalid_argument);
  CHECK_THROWS(RealSeries({PrecReal(1L, 64)}, Ring::real(128)));
}

TEST_CASE("series_eval tail bound on the geometric series") {
  std::vector<BigRational> ones(11, BigRational(1));
  const ExactSeries s(ones, Ring::exact());
  const PrecReal half = PrecReal(1L, 128) / 2L;
  const SeriesValue v = series_eval(s, half);
  const PrecReal truth(2L, 128);
  CHECK(abs(truth - v.value) <= v.tail_bound);
  CHECK_THROWS_AS(series_eval(s, PrecReal::parse("0.6", 128)), std::domain_error);
}

TEST_CASE("serialization") {
  const WeightExpansion e = expand_w_integer_p(3, 2);
  CHECK(to_csv(e) == "k,c_k\n0,8/27\n1,0\n2,8/81\n");
  const nlohmann::json j = to_json(e);
  CHECK(j["p"] == 3);
  CHECK(j["leading_power"] == 3);
  CHECK(j["coefficients"][2] == "8/81");
  CHECK(coefficient_strings(expand_correction(ExponentPair::parse("2"), 2), 10)[2] == "5/16");
}
