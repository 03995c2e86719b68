#include "doctest.h"

#include <cmath>
#include <random>

#include "hardy/proof_machinery.hpp"
#include "hardy/weights.hpp"

using namespace hardy;

namespace {

constexpr long kBits = 160;

// g(sign x) straight from q((1 + sign x)^(1/q) - 1) / (sign x) - 1.
PrecReal closed_g(const ExponentPair& pair, const PrecReal& x, int sign) {
  const PrecReal sx = sign > 0 ? x : -x;
  const PrecReal root = pow(sx + 1L, pair.inv_q(x.bits()));
  return pair.q(x.bits()) * (root - 1L) / sx - 1L;
}

} // namespace

TEST_CASE("g coefficients: recurrence, exact values and sign pattern") {
  for (const char* text : {"1.01", "3/2", "2", "7/3", "5", "10"}) {
    const ExponentPair pair = ExponentPair::parse(text);
    const GSeries g = g_series(pair, 40, kBits);
    REQUIRE(g.exact.has_value());
    CHECK((*g.exact)[1] == BigRational(1) / (BigRational(2) * pair.p_exact()));
    for (std::size_t k = 1; k <= 40; ++k) {
      const PrecReal exact((*g.exact)[k], kBits);
      CHECK(abs(g.a[k] - exact) <= exact * pow2(-(kBits - 16), kBits));
      // a_k = (-1)^k b_k
      const PrecReal b = k % 2 == 0 ? g.b[k] : -g.b[k];
      CHECK(abs(g.a[k] - b) <= exact * pow2(-(kBits - 16), kBits));
      CHECK(g.a[k].sign() > 0);
    }
  }
}

TEST_CASE("eval_g matches the closed form") {
  for (const char* text : {"1.1", "2", "7/2", "9"}) {
    const ExponentPair pair = ExponentPair::parse(text);
    const GSeries g = g_series(pair, 60, kBits);
    for (const char* xs : {"0.001", "0.1", "0.25", "0.5"}) {
      const PrecReal x = PrecReal::parse(xs, kBits);
      for (int sign : {-1, 1}) {
        const SeriesValue v = eval_g(g, x, sign);
        const PrecReal allowance = v.tail_bound + pow2(-(kBits - 24), kBits);
        INFO("p = " << text << ", x = " << xs << ", sign = " << sign);
        CHECK(abs(v.value - closed_g(pair, x, sign)) <= allowance);
      }
    }
  }
  const GSeries g = g_series(ExponentPair::parse("2"), 10, kBits);
  CHECK_THROWS_AS(eval_g(g, PrecReal::parse("0.6", kBits), 1), std::domain_error);
  CHECK_THROWS_AS(eval_g(g, PrecReal(kBits), 1), std::domain_error);
  CHECK_THROWS_AS(eval_g(g, PrecReal::parse("0.1", kBits), 0), std::invalid_argument);
}

TEST_CASE("F_p against (1 + g)^(p-1) directly") {
  for (const char* text : {"3/2", "2", "5/2", "3", "4.75", "8"}) {
    const ExponentPair pair = ExponentPair::parse(text);
    const GSeries g = g_series(pair, 40, kBits);
    for (const char* xs : {"0.01", "0.2", "0.5"}) {
      const PrecReal x = PrecReal::parse(xs, kBits);
      const PrecReal gm = closed_g(pair, x, -1);
      const PrecReal gp = closed_g(pair, x, 1);
      const PrecReal pm1 = pair.p(kBits) - 1L;
      const PrecReal oracle = pow(gm + 1L, pm1) - pow(gp + 1L, pm1) - pm1 * (gm - gp);
      const FValue f = eval_F(g, x);
      INFO("p = " << text << ", x = " << xs);
      CHECK(abs(f.value - oracle) <= f.tolerance + pow2(-(kBits - 24), kBits));
    }
  }
  const GSeries g2 = g_series(ExponentPair::parse("2"), 20, kBits);
  CHECK(eval_F(g2, PrecReal::parse("0.3", kBits)).value.is_zero());
}

TEST_CASE("E_p: both forms and the closed form") {
  const ExponentPair pair = ExponentPair::parse("5/2");
  const GSeries g = g_series(pair, 41, kBits);
  const PrecReal x = PrecReal::parse("0.3", kBits);
  const EValue e = eval_E(g, x);
  CHECK(abs(e.value - e.binomial_form) <= e.tolerance);
  // E = (p-1)(g(-x) - g(x)) - 2(p-1) a_1 x
  const PrecReal pm1 = pair.p(kBits) - 1L;
  const PrecReal closed =
      pm1 * (closed_g(pair, x, -1) - closed_g(pair, x, 1)) - pm1 * g.a[1] * x * 2L;
  CHECK(abs(e.value - closed) <= e.tolerance + pow2(-(kBits - 24), kBits));
}

TEST_CASE("pairwise terms and the odd-even window") {
  CHECK(in_odd_even_window(ExponentPair::parse("1.01")));
  CHECK(in_odd_even_window(ExponentPair::parse("3/2")));
  CHECK(in_odd_even_window(ExponentPair::parse("2")));
  CHECK_FALSE(in_odd_even_window(ExponentPair::parse("5/2")));
  CHECK(in_odd_even_window(ExponentPair::parse("3")));
  CHECK(in_odd_even_window(ExponentPair::parse("3.5")));
  CHECK_FALSE(in_odd_even_window(ExponentPair::parse("6.5")));

  const ExponentPair pair = ExponentPair::parse("3.5");
  const GSeries g = g_series(pair, 40, kBits);
  const PrecReal x = PrecReal::parse("0.4", kBits);
  for (std::size_t n = 1; n <= 15; n += 2) CHECK(pairwise_term(g, x, n).sign() >= 0);
  CHECK_THROWS_AS(pairwise_term(g, x, 2), std::invalid_argument);

  const std::vector<ExponentPair> outside{ExponentPair::parse("5/2")};
  CHECK_THROWS_AS(check_pairwise_positivity(outside, default_x_grid(), 15), std::invalid_argument);
  CHECK_THROWS_AS(check_F_nonnegative(outside, default_x_grid(), {}), std::invalid_argument);
}

TEST_CASE("grids") {
  const Grid x = default_x_grid();
  REQUIRE(x.points.size() == 500);
  CHECK(x.points.front() == BigRational(1, 1000));
  CHECK(x.points.back() == BigRational(1, 2));
  const Grid p = parse_grid("1.1:10:0.1");
  CHECK(p.points.size() == 90);
  CHECK(p.points.back() == BigRational(10));
  CHECK(parse_grid("2").points.size() == 1);
  CHECK(parse_grid("0:1:0.3").points.size() == 4);
  CHECK_THROWS(parse_grid("1:0:0.1"));
  CHECK_THROWS(parse_grid("0:1:0"));
  CHECK_THROWS(parse_grid("0:1"));
  CHECK(default_p_grid().size() == 24);
  CHECK(default_n1_grid().size() == 44);
  CHECK(default_n1_grid().back().p_exact() == BigRational(20));
}

TEST_CASE("individual checks pass on a coarse grid") {
  const std::vector<ExponentPair> ps = default_p_grid();
  const Grid xs = parse_grid("0.01:0.5:0.01");
  CHECK(check_g_bounds(ps, xs).pass);
  CHECK(check_lemma_gpm(ps, xs).pass);
  CHECK(check_lemma_ak_lower(ps, 64).pass);
  CHECK(check_lemma_binom_upper(ps, 1, 64).pass);
  CHECK(check_lemma_g_linear(ps, xs).pass);
  CHECK(check_EF_positive(ps, xs).pass);
  CHECK(check_E_forms(ps, xs).pass);
  CHECK(check_decomposition_identity(ps, xs).pass);
  CHECK(check_n1_case(default_n1_grid()).pass);
  CHECK(check_case2_polynomial(ps).pass);
  CHECK(check_case3_estimate(200).pass);
}

TEST_CASE("gpm bound at p = 2 is 1/12") {
  const std::vector<ExponentPair> ps{ExponentPair::parse("2")};
  const GridCheckReport r = check_lemma_gpm(ps, single_point(BigRational(1, 2)));
  CHECK(r.pass);
  // g(-1/2) + g(1/2) = 4(sqrt(3/2) - sqrt(1/2)) - 2
  const double lhs = 4 * (std::sqrt(1.5) - std::sqrt(0.5)) - 2;
  CHECK(r.worst_margin == doctest::Approx(1.0 / 12 - lhs).epsilon(1e-12));
}

TEST_CASE("checks fail when the truncation cannot support the claim") {
  // At order 1 the geometric tail of g swamps the gap near x = 1/2.
  const std::vector<ExponentPair> ps{ExponentPair::parse("2")};
  ProofOptions coarse;
  coarse.order = 1;
  const GridCheckReport r = check_g_bounds(ps, single_point(BigRational(1, 2)), coarse);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_margin < 0);
  CHECK(r.failures.size() == 1);
}

TEST_CASE("empty reports pass with an infinite margin") {
  const GridCheckReport r = check_case2_polynomial(std::vector<ExponentPair>{ExponentPair::parse("3")});
  CHECK(r.pass);
  CHECK(r.points == 0);
  CHECK(to_json(r)["worst_margin"].is_null());
}

TEST_CASE("pointwise power bound on random inputs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> a_dist(-3.0, 3.0);
  std::uniform_real_distribution<double> t_dist(0.0, 1.0);
  std::uniform_real_distribution<double> p_dist(1.0001, 10.0);
  int failures = 0;
  for (int i = 0; i < 200000; ++i) {
    if (!check_pointwise_power_bound(a_dist(rng), t_dist(rng), p_dist(rng))) ++failures;
  }
  CHECK(failures == 0);
  // Equality at a = 1, t in [0, 1).
  CHECK(check_pointwise_power_bound(1.0, 0.3, 2.5));
  CHECK(check_pointwise_power_bound(0.0, 1.0, 2.0));
  CHECK_THROWS(check_pointwise_power_bound(0.5, 1.5, 2.0));
  CHECK_THROWS(check_pointwise_power_bound(0.5, 0.5, 1.0));
}

TEST_CASE("lemma names round-trip") {
  for (Lemma l : all_lemmas()) CHECK(parse_lemma(lemma_name(l)) == l);
  CHECK_FALSE(parse_lemma("nope").has_value());
}
