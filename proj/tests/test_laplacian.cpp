#include "doctest.h"

#include <cmath>

#include "hardy/laplacian.hpp"
#include "hardy/weights.hpp"

using namespace hardy;

TEST_CASE("p = 2 reduces to the second difference") {
  const ExponentPair pair = ExponentPair::parse("2");
  const long bits = 200;
  const GridFunction f = GridFunction::tabulate(6, bits, [&](std::size_t n) {
    return PrecReal(static_cast<long>(n * n * n), bits);
  });
  // 2 n^3 - (n-1)^3 - (n+1)^3 = -6n
  for (std::size_t n = 1; n <= 5; ++n) {
    CHECK(apply_p_laplacian(f, n, pair) == PrecReal(-6L * static_cast<long>(n), bits));
  }
}

TEST_CASE("signed power") {
  const ExponentPair pair = ExponentPair::parse("3");
  CHECK(signed_power(PrecReal(-2L, 64), pair) == PrecReal(-4L, 64));
  CHECK(signed_power(PrecReal(0L, 64), pair).is_zero());
  CHECK(signed_power(-2.0, 3.0) == -4.0);
  CHECK(signed_power(0.0, 1.5) == 0.0);
  CHECK(signed_power(4.0, 1.5) == doctest::Approx(2.0));
}

TEST_CASE("ground state reproduces w_p") {
  for (const char* text : {"1.05", "3/2", "2", "5/2", "4", "10"}) {
    const ExponentPair pair = ExponentPair::parse(text);
    const long digits = 40;
    const long bits = required_precision(pair, 201, digits);
    const GridFunction u = ground_state_grid(pair, 201, bits);
    const PrecReal tol = PrecReal::parse("1e-38", bits);
    for (std::size_t n = 1; n <= 200; ++n) {
      const PrecReal w = eval_w_bits(pair, n, bits);
      const PrecReal from_u = weight_from_supersolution(u, pair, n);
      INFO("p = " << text << ", n = " << n);
      CHECK(abs(from_u - w) < tol);
    }
  }
}

TEST_CASE("p = 2 ground state by hand") {
  const ExponentPair pair = ExponentPair::parse("2");
  const long bits = 256;
  const GridFunction u = ground_state_grid(pair, 10, bits);
  for (std::size_t n = 1; n <= 9; ++n) {
    const PrecReal s = sqrt(PrecReal(static_cast<long>(n), bits));
    const PrecReal expected = (s * 2L - sqrt(PrecReal(static_cast<long>(n - 1), bits)) -
                               sqrt(PrecReal(static_cast<long>(n + 1), bits))) /
                              s;
    CHECK(abs(weight_from_supersolution(u, pair, n) - expected) < pow2(-240, bits));
  }
}

TEST_CASE("weight_from_supersolution is scale invariant") {
  const ExponentPair pair = ExponentPair::parse("7/3");
  const long bits = 256;
  const GridFunction u = ground_state_grid(pair, 30, bits);
  const GridFunction v = u.scaled(PrecReal::parse("17.25", bits));
  for (std::size_t n = 1; n < 30; ++n) {
    CHECK(abs(weight_from_supersolution(u, pair, n) - weight_from_supersolution(v, pair, n)) <
          pow2(-230, bits));
  }
}

TEST_CASE("domain and range errors") {
  const ExponentPair pair = ExponentPair::parse("2");
  const GridFunction u = ground_state_grid(pair, 5, 64);
  CHECK_THROWS_AS(apply_p_laplacian(u, 0, pair), std::out_of_range);
  CHECK_THROWS_AS(apply_p_laplacian(u, 5, pair), std::out_of_range);
  CHECK_THROWS_AS(u.at(6), std::out_of_range);
  const GridFunction z = GridFunction::tabulate(5, 64, [](std::size_t) { return PrecReal(64); });
  CHECK_THROWS_AS(weight_from_supersolution(z, pair, 2), std::domain_error);
  CHECK(hardy_ground_state(pair, 0, 64).is_zero());
  CHECK(hardy_ground_state(pair, 9, 64) == PrecReal(3L, 64));
}
