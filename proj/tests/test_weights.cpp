#include "doctest.h"

#include <mpfr.h>

#include <algorithm>
#include <string>

#include "hardy/weights.hpp"

using namespace hardy;

namespace {

// Naive closed form straight through MPFR at a precision far beyond the
// cancellation, sharing no code with the library.
std::string naive_w(long p_num, long p_den, unsigned long n, int digits) {
  constexpr mpfr_prec_t prec = 4000;
  mpfr_t p, e, x, a, b, t;
  for (mpfr_ptr v : {p, e, x, a, b, t}) mpfr_init2(v, prec);
  mpfr_set_si(p, p_num, MPFR_RNDN);
  mpfr_div_si(p, p, p_den, MPFR_RNDN);
  mpfr_si_sub(e, 1, p, MPFR_RNDN);  // e = 1 - p
  mpfr_div(e, e, p, MPFR_RNDN);     // e = (1 - p) / p
  mpfr_neg(e, e, MPFR_RNDN);        // e = 1/q
  mpfr_set_ui(x, 1, MPFR_RNDN);
  mpfr_div_ui(x, x, n, MPFR_RNDN);
  mpfr_sub_ui(t, p, 1, MPFR_RNDN);  // t = p - 1

  mpfr_ui_sub(a, 1, x, MPFR_RNDN);
  mpfr_pow(a, a, e, MPFR_RNDN);
  mpfr_ui_sub(a, 1, a, MPFR_RNDN);
  mpfr_pow(a, a, t, MPFR_RNDN);

  mpfr_add_ui(b, x, 1, MPFR_RNDN);
  mpfr_pow(b, b, e, MPFR_RNDN);
  mpfr_sub_ui(b, b, 1, MPFR_RNDN);
  mpfr_pow(b, b, t, MPFR_RNDN);

  mpfr_sub(a, a, b, MPFR_RNDN);
  char buffer[256];
  mpfr_snprintf(buffer, sizeof buffer, "%.*Re", digits - 1, a);
  for (mpfr_ptr v : {p, e, x, a, b, t}) mpfr_clear(v);
  return buffer;
}

bool agree(const PrecReal& value, const std::string& reference, long digits) {
  const PrecReal ref = PrecReal::parse(reference, value.bits());
  return abs(value - ref) <= abs(ref) * PrecReal::parse("1e-" + std::to_string(digits), value.bits());
}

} // namespace

TEST_CASE("w_2(1) is 2 - sqrt 2") {
  const PrecReal w = eval_w(ExponentPair::parse("2"), 1, 40);
  const PrecReal expected = 2L - sqrt(PrecReal(2L, w.bits()));
  CHECK(abs(w - expected) < PrecReal::parse("1e-45", w.bits()));
  CHECK(w.to_string(5) == "5.8579e-01");
}

TEST_CASE("w(1) closed form matches the general formula") {
  for (const char* text : {"1.05", "3/2", "2", "3", "4", "10"}) {
    const ExponentPair pair = ExponentPair::parse(text);
    const PrecReal closed = eval_w1_closed_bits(pair, 256);
    const PrecReal general = eval_w_of_x(pair, PrecReal(1L, 256));
    CHECK(abs(closed - general) < pow2(-240, 256));
  }
}

TEST_CASE("eval_w keeps its digits despite cancellation") {
  struct Case {
    long num, den;
    unsigned long n;
  };
  const Case cases[] = {{2, 1, 2},          {2, 1, 1000000},  {3, 1, 123456}, {3, 2, 10},
                        {3, 2, 1000000},    {21, 20, 1000},   {10, 1, 50000}, {5, 2, 7},
                        {101, 100, 1 << 20}, {4, 1, 1000000}};
  for (const auto& c : cases) {
    const ExponentPair pair = ExponentPair::rational(BigRational(c.num, c.den));
    const PrecReal w = eval_w(pair, c.n, 30);
    INFO("p = " << pair.to_string() << ", n = " << c.n);
    CHECK(agree(w, naive_w(c.num, c.den, c.n, 45), 29));
  }
}

TEST_CASE("classical weight") {
  const ExponentPair pair = ExponentPair::parse("3");
  const PrecReal w = eval_w_classical(pair, 5, 30);
  // (2/3)^3 / 125
  CHECK(agree(w, "2.370370370370370370370370370370370370e-03", 30));
}

TEST_CASE("compare_weights") {
  const WeightTable table = compare_weights(ExponentPair::parse("2"), 1, 5, 30);
  REQUIRE(table.rows.size() == 5);
  CHECK(table.all_verified_positive());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(table.rows[i].n == i + 1);
    CHECK(table.rows[i].ratio_minus_one.sign() > 0);
  }
  const std::string csv = to_csv(table);
  CHECK(csv.rfind("n,w_improved,w_classical,ratio_minus_one\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);

  const nlohmann::json j = to_json(table);
  REQUIRE(j.size() == 5);
  CHECK(j[0]["n"] == 1);
  CHECK(j[0]["verified_positive"] == true);

  const WeightTable one = compare_weights(ExponentPair::parse("3/2"), 1, 1, 20);
  CHECK(one.rows.size() == 1);
  CHECK_THROWS(compare_weights(ExponentPair::parse("2"), 5, 4, 20));
  CHECK_THROWS(compare_weights(ExponentPair::parse("2"), 0, 4, 20));
}

TEST_CASE("ratio w / w^H - 1 decays like n^-2 but stays positive") {
  const ExponentPair pair = ExponentPair::parse("5/4");
  const WeightTable table = compare_weights(pair, 9990, 10000, 25);
  CHECK(table.all_verified_positive());
  for (const auto& row : table.rows) {
    const double r = row.ratio_minus_one.to_double() * static_cast<double>(row.n * row.n);
    // (3p-1)/(8p) for the leading relative correction.
    CHECK(r == doctest::Approx((3 * 1.25 - 1) / (8 * 1.25)).epsilon(1e-3));
  }
}

TEST_CASE("weight kind names") {
  CHECK(parse_weight_kind("improved") == WeightKind::improved);
  CHECK(parse_weight_kind("classical") == WeightKind::classical);
  CHECK(to_string(WeightKind::classical) == "classical");
  CHECK_THROWS(parse_weight_kind("other"));
}
