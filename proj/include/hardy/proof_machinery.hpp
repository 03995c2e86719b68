#ifndef HARDY_PROOF_MACHINERY_HPP
#define HARDY_PROOF_MACHINERY_HPP

// Executable form of the w_p > w_p^H argument. With q = p/(p-1) and
//
//   g(x) = q sum_{k>=1} binom(1/q, k+1) x^k,   g(-x) = sum_{k>=1} a_k x^k,
//
// the weight decomposes for 0 < x <= 1/2 as
//
//   w(x) = (x/q)^(p-1) (x/q + E_p(x) + F_p(x)),
//   E_p(x) = 2(p-1) sum_{n>=1} a_{2n+1} x^(2n+1),
//   F_p(x) = sum_{n>=2} binom(p-1, n) (g(-x)^n - g(x)^n).
//
// Every bound used along the way is exposed as a grid check. A check passes
// only when its margin beats the accumulated truncation and rounding
// tolerance: for strict inequalities the margin is (gap - tolerance) and must
// be positive, for non-strict ones (gap + tolerance) and must be non-negative.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hardy/numerics.hpp"
#include "hardy/series.hpp"

namespace hardy {

inline constexpr long kDefaultProofBits = 128;

struct ProofOptions {
  std::size_t order = kDefaultSeriesOrder;
  long bits = kDefaultProofBits;
  /// Upper limit on the outer sum of F_p.
  std::size_t max_outer_terms = 400;
};

/// Coefficients of g(-x).
struct GSeries {
  ExponentPair pair;
  std::size_t order;
  long bits;
  /// a[k] = q |binom(1/q, k+1)| for rational p, a[0] = 0.
  std::optional<std::vector<BigRational>> exact;
  /// a[k] at `bits`, built with a_{k+1} = a_k (q(k+1) - 1) / (q(k+2)) from
  /// a_1 = 1/(2p).
  std::vector<PrecReal> a;
  /// b[k] = q binom(1/q, k+1) at `bits`, straight from the falling factorial.
  std::vector<PrecReal> b;
};

GSeries g_series(const ExponentPair& pair, std::size_t order, long bits = kDefaultProofBits);

/// g(sign * x) for 0 < x <= 1/2, with the geometric tail a_order x^(order+1)/(1-x).
SeriesValue eval_g(const GSeries& g, const PrecReal& x, int sign);
SeriesValue eval_g(const ExponentPair& pair, const PrecReal& x, int sign, std::size_t order,
                   long bits);

struct EValue {
  /// 2(p-1) sum a_{2n+1} x^(2n+1).
  PrecReal value;
  /// -2p sum_{k odd >= 3} binom(1/q, k+1) x^k.
  PrecReal binomial_form;
  PrecReal tolerance;
};

/// Both forms of E_p(x); throws std::logic_error if they disagree beyond
/// tolerance.
EValue eval_E(const GSeries& g, const PrecReal& x);

struct FValue {
  PrecReal value;
  /// Outer tail from |binom(p-1, n)| <= (q-1)/4 (n > p) and |g(+-x)| < 1,
  /// plus the inner truncation of g propagated through each power and the
  /// rounding budget.
  PrecReal tolerance;
  /// Sum of |terms|.
  PrecReal scale;
  std::size_t terms;
};

/// Partial sum n = 2..N. The outer sum stops once (q-1)/4 g(-x)^n drops below
/// 2^-(bits/2) or at `max_outer_terms` (>= 2); for integer p it is finite.
FValue eval_F(const GSeries& g, const PrecReal& x, std::size_t max_outer_terms = 400);

/// One odd/even pair of F_p terms (n odd), including n = 1.
/// Throws std::invalid_argument for even n.
PrecReal pairwise_term(const GSeries& g, const PrecReal& x, std::size_t n);

/// True when 2k-1 <= p <= 2k for some integer k >= 1.
bool in_odd_even_window(const ExponentPair& pair);

// ---------------------------------------------------------------------------
// Grids and reports

struct Grid {
  std::string text;
  std::vector<BigRational> points;
};

/// "start:stop:step" with exact decimal arithmetic; stop is included when hit.
Grid parse_grid(std::string_view text);
/// A single point.
Grid single_point(const BigRational& value);

/// {0.001 j : j = 1..500}.
Grid default_x_grid();
/// 1.01, 1.1, 1.25, 1.5, 1.75, 2, 2.25, 2.5, 2.75, then 3..10 in steps of 1/2.
std::vector<ExponentPair> default_p_grid();
/// 1.001, 1.01, 1.05, 1.1, 1.25, 1.5, 1.75, then 2..20 in steps of 1/2.
std::vector<ExponentPair> default_n1_grid();
std::string describe_p_grid(std::span<const ExponentPair> ps);

struct GridFailure {
  std::string p;
  std::string x;
  double lhs;
  double rhs;
};

struct GridCheckReport {
  std::string description;
  std::string grid;
  std::size_t points = 0;
  /// Minimum margin over the grid; +inf when no point was checked.
  double worst_margin;
  /// Largest tolerance charged at any point.
  double max_tolerance = 0.0;
  bool pass = true;
  std::vector<GridFailure> failures;
};

nlohmann::json to_json(const GridCheckReport& report);

// ---------------------------------------------------------------------------
// Checks

/// -1 < g(x) < 0 < -g(x) < g(-x) < 1.
GridCheckReport check_g_bounds(std::span<const ExponentPair> ps, const Grid& xs,
                               const ProofOptions& opts = {});
/// g(-x) + g(x) <= (p+1)/(9p^2).
GridCheckReport check_lemma_gpm(std::span<const ExponentPair> ps, const Grid& xs,
                                const ProofOptions& opts = {});
/// a_k >= 1/(p k (k+1)) for 2 <= k <= k_max, exactly when p is rational.
GridCheckReport check_lemma_ak_lower(std::span<const ExponentPair> ps, std::size_t k_max,
                                     const ProofOptions& opts = {});
/// |binom(p-1, k)| <= 1/(4(p-1)) for k_lo <= k <= k_hi with k > p.
GridCheckReport check_lemma_binom_upper(std::span<const ExponentPair> ps, std::size_t k_lo,
                                        std::size_t k_hi, const ProofOptions& opts = {});
/// g(-x) <= (q-1)(5q-1)/(6q^2) x.
GridCheckReport check_lemma_g_linear(std::span<const ExponentPair> ps, const Grid& xs,
                                     const ProofOptions& opts = {});
/// pairwise_term(n) >= 0 for odd n <= n_max. Every p must lie in an
/// odd-to-even window, otherwise std::invalid_argument.
GridCheckReport check_pairwise_positivity(std::span<const ExponentPair> ps, const Grid& xs,
                                          std::size_t n_max, const ProofOptions& opts = {});
/// F_p >= 0 for integer p and for p >= 3 in an odd-to-even window; other p
/// throw std::invalid_argument.
GridCheckReport check_F_nonnegative(std::span<const ExponentPair> ps, const Grid& xs,
                                    const ProofOptions& opts = {});
/// E_p + F_p > 0.
GridCheckReport check_EF_positive(std::span<const ExponentPair> ps, const Grid& xs,
                                  const ProofOptions& opts = {});
/// The two series for E_p agree.
GridCheckReport check_E_forms(std::span<const ExponentPair> ps, const Grid& xs,
                              const ProofOptions& opts = {});
/// |w(x) - (x/q)^(p-1) (x/q + E_p + F_p)| within tolerance.
GridCheckReport check_decomposition_identity(std::span<const ExponentPair> ps, const Grid& xs,
                                             const ProofOptions& opts = {});
/// w_p(1) > w_p^H(1).
GridCheckReport check_n1_case(std::span<const ExponentPair> ps, long bits = kDefaultProofBits);
/// 74p^3 - 55p^2 - 5p - 2 > 0 for p in (1, 2]; other p are skipped.
GridCheckReport check_case2_polynomial(std::span<const ExponentPair> ps);
/// 1/(n(n+1)) - 2^-(n+1) > 0 for 2 <= n <= n_max, exactly.
GridCheckReport check_case3_estimate(std::size_t n_max);

/// |a - t|^p >= (1 - t)^(p-1) (|a|^p - t) for t in [0, 1], up to a relative
/// rounding allowance of 1e-12.
bool check_pointwise_power_bound(double a, double t, double p);

// ---------------------------------------------------------------------------
// Suite

enum class Lemma {
  g_bounds,
  gpm,
  ak_lower,
  binom_upper,
  g_linear,
  pairwise,
  f_nonnegative,
  ef_positive,
  e_forms,
  decomposition,
  n1_case,
  case2_polynomial,
  case3_estimate,
};

std::string_view lemma_name(Lemma lemma);
std::optional<Lemma> parse_lemma(std::string_view name);
std::vector<Lemma> all_lemmas();

struct SuiteOptions {
  std::vector<ExponentPair> p_grid = default_p_grid();
  Grid x_grid = default_x_grid();
  std::vector<ExponentPair> n1_grid = default_n1_grid();
  ProofOptions proof;
  std::size_t k_max = 64;
  std::size_t pairwise_n_max = 15;
};

/// Runs the selected checks in the order given. Checks with a restricted
/// domain (pairwise, f_nonnegative) only see the applicable p.
std::vector<GridCheckReport> run_lemma_suite(const SuiteOptions& options,
                                             std::span<const Lemma> lemmas);

} // namespace hardy

#endif
