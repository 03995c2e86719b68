#include "hardy/proof_machinery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hardy/weights.hpp"

namespace hardy {

namespace {

// Rounding allowance: 256 ulps at the working precision.
PrecReal rounding_eps(long bits) { return pow2(-(bits - 8), bits); }

std::string decimal(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", v);
  return buffer;
}

std::string decimal(const BigRational& v) { return decimal(v.to_double()); }

class ReportBuilder {
public:
  ReportBuilder(std::string description, std::string grid) {
    report_.description = std::move(description);
    report_.grid = std::move(grid);
    report_.worst_margin = std::numeric_limits<double>::infinity();
  }

  /// Strict checks fail at margin <= 0, non-strict ones at margin < 0.
  void add(const std::string& p, const std::string& x, double lhs, double rhs, int margin_sign,
           double margin, double tolerance, bool strict = true) {
    ++report_.points;
    report_.worst_margin = std::min(report_.worst_margin, margin);
    report_.max_tolerance = std::max(report_.max_tolerance, tolerance);
    if (margin_sign < 0 || (strict && margin_sign == 0)) {
      report_.pass = false;
      if (report_.failures.size() < kMaxRecordedFailures) report_.failures.push_back({p, x, lhs, rhs});
    }
  }

  void add(const std::string& p, const std::string& x, const PrecReal& lhs, const PrecReal& rhs,
           const PrecReal& margin, const PrecReal& tolerance, bool strict = true) {
    add(p, x, lhs.to_double(), rhs.to_double(), margin.sign(), margin.to_double(),
        tolerance.to_double(), strict);
  }

  GridCheckReport finish() && { return std::move(report_); }

private:
  static constexpr std::size_t kMaxRecordedFailures = 50;
  GridCheckReport report_;
};

struct GPair {
  SeriesValue minus;  // g(-x)
  SeriesValue plus;   // g(x)
  PrecReal delta;     // common truncation bound
  PrecReal upper;     // g(-x) + delta, an upper bound for |g(+-x)|
};

GPair eval_g_pair(const GSeries& g, const PrecReal& x) {
  SeriesValue minus = eval_g(g, x, -1);
  SeriesValue plus = eval_g(g, x, +1);
  PrecReal delta = max(minus.tail_bound, plus.tail_bound);
  PrecReal upper = minus.value + delta;
  return {std::move(minus), std::move(plus), std::move(delta), std::move(upper)};
}

struct Evaluated {
  PrecReal value;
  PrecReal tolerance;
};

// One odd/even pair of F terms, with a tolerance from the g truncation.
Evaluated pairwise_eval(const GSeries& g, const GPair& gv, std::size_t n) {
  const long bits = g.bits;
  const PrecReal alpha = g.pair.p(bits) - 1;
  const PrecReal c1 = binom_general_real(alpha, n, bits);
  const PrecReal c2 = binom_general_real(alpha, n + 1, bits);
  const long ln = static_cast<long>(n);
  const PrecReal first = c1 * (pow(gv.minus.value, ln) - pow(gv.plus.value, ln));
  const PrecReal second = c2 * (pow(gv.minus.value, ln + 1) - pow(gv.plus.value, ln + 1));
  const PrecReal value = first + second;
  // d/dg g^m <= m G^(m-1), applied to both g(-x) and g(x).
  PrecReal tolerance = (abs(c1) * ln * pow(gv.upper, ln - 1) + abs(c2) * (ln + 1) * pow(gv.upper, ln)) *
                       gv.delta * 2L;
  tolerance += rounding_eps(bits) * (abs(first) + abs(second));
  return {value, tolerance};
}

template <class Fn>
GridCheckReport x_grid_check(std::string description, std::span<const ExponentPair> ps,
                             const Grid& xs, const ProofOptions& opts, Fn&& point) {
  ReportBuilder builder(std::move(description),
                        "p in " + describe_p_grid(ps) + "; x in " + xs.text + "; order " +
                            std::to_string(opts.order) + "; " + std::to_string(opts.bits) + " bits");
  for (const auto& pair : ps) {
    const GSeries g = g_series(pair, opts.order, opts.bits);
    const std::string p_str = pair.to_string();
    for (const auto& xr : xs.points) {
      const PrecReal x(xr, opts.bits);
      point(builder, g, p_str, decimal(xr), x);
    }
  }
  return std::move(builder).finish();
}

} // namespace

// ---------------------------------------------------------------------------
// g, E, F

GSeries g_series(const ExponentPair& pair, std::size_t order, long bits) {
  if (order < 1) throw std::invalid_argument("g_series: order must be at least 1");
  GSeries g{pair, order, bits, std::nullopt, {}, {}};

  if (pair.is_rational()) {
    const BigRational q = pair.q_exact();
    const BigRational inv_q = pair.inv_q_exact();
    std::vector<BigRational> exact{BigRational(0)};
    for (std::size_t k = 1; k <= order; ++k) {
      exact.push_back(abs(q * binom_general_rational(inv_q, k + 1)));
    }
    g.exact = std::move(exact);
  }

  const PrecReal q = pair.q(bits);
  const PrecReal inv_q = pair.inv_q(bits);
  g.a.reserve(order + 1);
  g.a.push_back(PrecReal(bits));
  g.a.push_back(PrecReal(1L, bits) / (pair.p(bits) * 2L));
  for (std::size_t k = 1; k < order; ++k) {
    const long kk = static_cast<long>(k);
    g.a.push_back(g.a[k] * (q * (kk + 1) - 1L) / (q * (kk + 2)));
  }
  g.b.reserve(order + 1);
  g.b.push_back(PrecReal(bits));
  for (std::size_t k = 1; k <= order; ++k) {
    g.b.push_back(q * binom_general_real(inv_q, k + 1, bits));
  }
  return g;
}

SeriesValue eval_g(const GSeries& g, const PrecReal& x, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("eval_g: sign must be +1 or -1");
  const long bits = g.bits;
  if (x.bits() != bits) throw PrecisionMismatch("eval_g: x precision differs from the series");
  if (x.sign() <= 0 || x > PrecReal(1L, bits) / 2) {
    throw std::domain_error("eval_g: x must lie in (0, 1/2]");
  }
  PrecReal value(bits);
  for (std::size_t k = g.order; k >= 1; --k) {
    const bool negate = sign > 0 && k % 2 == 1;
    value = (value + (negate ? -g.a[k] : g.a[k])) * x;
  }
  PrecReal tail = g.a[g.order] * pow(x, static_cast<long>(g.order + 1)) / (1L - x);
  return {std::move(value), std::move(tail)};
}

SeriesValue eval_g(const ExponentPair& pair, const PrecReal& x, int sign, std::size_t order,
                   long bits) {
  return eval_g(g_series(pair, order, bits), x.at(bits), sign);
}

EValue eval_E(const GSeries& g, const PrecReal& x) {
  const long bits = g.bits;
  if (x.sign() <= 0 || x > PrecReal(1L, bits) / 2) {
    throw std::domain_error("eval_E: x must lie in (0, 1/2]");
  }
  const PrecReal p = g.pair.p(bits);
  PrecReal a_form(bits);
  PrecReal binomial_form(bits);
  std::size_t last_odd = 0;
  for (std::size_t k = 3; k <= g.order; k += 2) {
    const PrecReal xk = pow(x, static_cast<long>(k));
    a_form += g.a[k] * xk;
    // binom(1/q, k+1) = b_k / q
    binomial_form += g.b[k] * xk;
    last_odd = k;
  }
  a_form = a_form * (p - 1) * 2L;
  binomial_form = -(binomial_form * p * 2L) / g.pair.q(bits);

  PrecReal tolerance(bits);
  if (last_odd > 0) {
    // a_k decreases, so the omitted odd terms are below a_last x^(last+2) / (1 - x^2).
    const PrecReal x2 = x * x;
    tolerance = (p - 1) * 2L * g.a[last_odd] * pow(x, static_cast<long>(last_odd + 2)) / (1L - x2);
  }
  tolerance += rounding_eps(bits) * abs(a_form) * static_cast<long>(g.order);
  if (abs(a_form - binomial_form) > tolerance) {
    throw std::logic_error("eval_E: the two forms of E_p disagree beyond tolerance");
  }
  return {std::move(a_form), std::move(binomial_form), std::move(tolerance)};
}

FValue eval_F(const GSeries& g, const PrecReal& x, std::size_t max_outer_terms) {
  if (max_outer_terms < 2) throw std::invalid_argument("eval_F: need at least two outer terms");
  const long bits = g.bits;
  const GPair gv = eval_g_pair(g, x);
  if (!(gv.upper < PrecReal(1L, bits))) {
    throw std::logic_error("eval_F: |g(+-x)| bound reached 1; outer series does not converge");
  }
  const auto integer_p = g.pair.integer_value();
  const PrecReal p = g.pair.p(bits);
  const double p_floor = std::floor(g.pair.p_double());
  if (!integer_p && static_cast<double>(max_outer_terms) < p_floor + 1) {
    throw std::invalid_argument("eval_F: outer_terms must exceed p");
  }
  const PrecReal tail_factor = (g.pair.q(bits) - 1L) / 4L;
  const PrecReal threshold = pow2(-(bits / 2), bits);

  PrecReal sum(bits);
  PrecReal scale(bits);
  PrecReal inner(bits);
  PrecReal binom = p - 1;  // binom(p-1, 1)
  PrecReal pow_minus = gv.minus.value;
  PrecReal pow_plus = gv.plus.value;
  PrecReal pow_upper = gv.upper;  // G^(n-1) inside the loop
  std::size_t n = 1;
  for (;;) {
    if (integer_p && static_cast<long>(n) + 1 > *integer_p - 1) break;
    if (n + 1 > max_outer_terms) break;
    ++n;
    const long nn = static_cast<long>(n);
    binom = binom * (p - nn) / nn;
    pow_minus *= gv.minus.value;
    pow_plus *= gv.plus.value;
    const PrecReal term = binom * (pow_minus - pow_plus);
    sum += term;
    scale += abs(term);
    inner += abs(binom) * nn * pow_upper;
    pow_upper *= gv.upper;  // now G^n
    if (!integer_p && static_cast<double>(n) >= p_floor &&
        tail_factor * pow_upper * gv.upper < threshold) {
      break;
    }
  }

  PrecReal outer(bits);
  if (!integer_p) {
    // Omitted n > N > p: |binom| <= (q-1)/4 and |g^n(-x) - g^n(x)| <= 2 G^n.
    outer = tail_factor * 2L * pow_upper * gv.upper / (1L - gv.upper);
  }
  PrecReal tolerance = outer + inner * gv.delta * 2L + rounding_eps(bits) * scale;
  return {std::move(sum), std::move(tolerance), std::move(scale), n < 2 ? 0 : n - 1};
}

PrecReal pairwise_term(const GSeries& g, const PrecReal& x, std::size_t n) {
  if (n % 2 == 0) throw std::invalid_argument("pairwise_term: n must be odd");
  return pairwise_eval(g, eval_g_pair(g, x), n).value;
}

bool in_odd_even_window(const ExponentPair& pair) {
  // 2k-1 <= p <= 2k  <=>  ceil(p) is even, or p is an odd integer.
  if (pair.is_rational()) {
    const BigRational& p = pair.p_exact();
    mpz_class ceil_p;
    mpz_cdiv_q(ceil_p.get_mpz_t(), p.raw().get_num_mpz_t(), p.raw().get_den_mpz_t());
    if (mpz_even_p(ceil_p.get_mpz_t())) return true;
    return p.is_integer();
  }
  const double p = pair.p_double();
  return static_cast<long>(std::ceil(p)) % 2 == 0;
}

// ---------------------------------------------------------------------------
// Grids

Grid parse_grid(std::string_view text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  if (parts.size() == 1) return single_point(BigRational::parse(parts[0]));
  if (parts.size() != 3) throw std::invalid_argument("grid must be start:stop:step");
  const BigRational start = BigRational::parse(parts[0]);
  const BigRational stop = BigRational::parse(parts[1]);
  const BigRational step = BigRational::parse(parts[2]);
  if (step.sign() <= 0) throw std::invalid_argument("grid step must be positive");
  if (stop < start) throw std::invalid_argument("grid stop lies below start");
  const BigRational span = (stop - start) / step;
  mpz_class count;
  mpz_fdiv_q(count.get_mpz_t(), span.raw().get_num_mpz_t(), span.raw().get_den_mpz_t());
  if (count > 10'000'000) throw std::invalid_argument("grid has more than 10^7 points");
  Grid grid{std::string(text), {}};
  for (long i = 0; i <= count.get_si(); ++i) grid.points.push_back(start + step * BigRational(i));
  return grid;
}

Grid single_point(const BigRational& value) { return Grid{decimal(value), {value}}; }

Grid default_x_grid() { return parse_grid("0.001:0.5:0.001"); }

namespace {
std::vector<ExponentPair> pairs_from(std::initializer_list<const char*> head, const char* tail_grid) {
  std::vector<ExponentPair> out;
  for (const char* p : head) out.push_back(ExponentPair::parse(p));
  for (const auto& p : parse_grid(tail_grid).points) out.push_back(ExponentPair::rational(p));
  return out;
}
} // namespace

std::vector<ExponentPair> default_p_grid() {
  return pairs_from({"1.01", "1.1", "1.25", "1.5", "1.75", "2", "2.25", "2.5", "2.75"}, "3:10:0.5");
}

std::vector<ExponentPair> default_n1_grid() {
  return pairs_from({"1.001", "1.01", "1.05", "1.1", "1.25", "1.5", "1.75"}, "2:20:0.5");
}

std::string describe_p_grid(std::span<const ExponentPair> ps) {
  std::string out = "{";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i > 0) out += ", ";
    out += ps[i].is_rational() ? decimal(ps[i].p_exact()) : ps[i].to_string();
  }
  return out + "}";
}

nlohmann::json to_json(const GridCheckReport& report) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"p", f.p}, {"x", f.x}, {"lhs", f.lhs}, {"rhs", f.rhs}});
  }
  nlohmann::json worst = nullptr;
  if (std::isfinite(report.worst_margin)) worst = report.worst_margin;
  return {{"description", report.description},
          {"grid", report.grid},
          {"points", report.points},
          {"worst_margin", worst},
          {"max_tolerance", report.max_tolerance},
          {"pass", report.pass},
          {"failures", std::move(failures)}};
}

// ---------------------------------------------------------------------------
// Checks

GridCheckReport check_g_bounds(std::span<const ExponentPair> ps, const Grid& xs,
                               const ProofOptions& opts) {
  return x_grid_check(
      "-1 < g(x) < 0 < -g(x) < g(-x) < 1", ps, xs, opts,
      [&](ReportBuilder& out, const GSeries& g, const std::string& p, const std::string& xs_,
          const PrecReal& x) {
        const GPair gv = eval_g_pair(g, x);
        const PrecReal& gm = gv.minus.value;
        const PrecReal& gp = gv.plus.value;
        const PrecReal& d = gv.delta;
        const PrecReal zero(opts.bits);
        const PrecReal one(1L, opts.bits);
        struct Gap {
          PrecReal lhs, rhs, margin;
        };
        const Gap gaps[] = {
            {-one, gp, gp + 1L - d},
            {gp, zero, -gp - d},
            {-gp, gm, gm + gp - d * 2L},
            {gm, one, one - gm - d},
        };
        const Gap* worst = &gaps[0];
        for (const auto& gap : gaps) {
          if (gap.margin < worst->margin) worst = &gap;
        }
        out.add(p, xs_, worst->lhs, worst->rhs, worst->margin, d * 2L);
      });
}

GridCheckReport check_lemma_gpm(std::span<const ExponentPair> ps, const Grid& xs,
                                const ProofOptions& opts) {
  return x_grid_check(
      "g(-x) + g(x) <= (p+1)/(9p^2)", ps, xs, opts,
      [&](ReportBuilder& out, const GSeries& g, const std::string& p, const std::string& xs_,
          const PrecReal& x) {
        const GPair gv = eval_g_pair(g, x);
        const PrecReal pv = g.pair.p(opts.bits);
        const PrecReal bound = (pv + 1L) / (pv * pv * 9L);
        const PrecReal lhs = gv.minus.value + gv.plus.value;
        const PrecReal tol = gv.delta * 2L;
        out.add(p, xs_, lhs, bound, bound - lhs - tol, tol);
      });
}

GridCheckReport check_lemma_ak_lower(std::span<const ExponentPair> ps, std::size_t k_max,
                                     const ProofOptions& opts) {
  ReportBuilder out("a_k >= 1/(p k (k+1))",
                    "p in " + describe_p_grid(ps) + "; k in [2, " + std::to_string(k_max) + "]");
  for (const auto& pair : ps) {
    const GSeries g = g_series(pair, std::max<std::size_t>(k_max, 1), opts.bits);
    const std::string p_str = pair.to_string();
    for (std::size_t k = 2; k <= k_max; ++k) {
      const long kk = static_cast<long>(k);
      if (g.exact) {
        const BigRational bound = BigRational(1) / (pair.p_exact() * BigRational(kk * (kk + 1)));
        const BigRational& a = (*g.exact)[k];
        const BigRational margin = a - bound;
        out.add(p_str, std::to_string(k), a.to_double(), bound.to_double(), margin.sign(),
                margin.to_double(), 0.0, false);
      } else {
        const PrecReal bound = PrecReal(1L, opts.bits) / (pair.p(opts.bits) * (kk * (kk + 1)));
        const PrecReal tol = rounding_eps(opts.bits) * g.a[k] * kk;
        out.add(p_str, std::to_string(k), g.a[k], bound, g.a[k] - bound - tol, tol);
      }
    }
  }
  return std::move(out).finish();
}

GridCheckReport check_lemma_binom_upper(std::span<const ExponentPair> ps, std::size_t k_lo,
                                        std::size_t k_hi, const ProofOptions& opts) {
  ReportBuilder out("|binom(p-1, k)| <= 1/(4(p-1)) for k > p",
                    "p in " + describe_p_grid(ps) + "; k in [" + std::to_string(k_lo) + ", " +
                        std::to_string(k_hi) + "], k > p");
  for (const auto& pair : ps) {
    const std::string p_str = pair.to_string();
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
      if (static_cast<double>(k) <= pair.p_double()) continue;
      if (pair.is_rational()) {
        const BigRational& p = pair.p_exact();
        if (BigRational(static_cast<long>(k)) <= p) continue;
        const BigRational alpha = p - BigRational(1);
        const BigRational lhs = abs(binom_general_rational(alpha, k));
        const BigRational bound = BigRational(1) / (BigRational(4) * alpha);
        const BigRational margin = bound - lhs;
        out.add(p_str, std::to_string(k), lhs.to_double(), bound.to_double(), margin.sign(),
                margin.to_double(), 0.0, false);
      } else {
        const PrecReal alpha = pair.p(opts.bits) - 1L;
        const PrecReal lhs = abs(binom_general_real(alpha, k, opts.bits));
        const PrecReal bound = PrecReal(1L, opts.bits) / (alpha * 4L);
        const PrecReal tol = rounding_eps(opts.bits) * static_cast<long>(k);
        out.add(p_str, std::to_string(k), lhs, bound, bound - lhs - tol, tol);
      }
    }
  }
  return std::move(out).finish();
}

GridCheckReport check_lemma_g_linear(std::span<const ExponentPair> ps, const Grid& xs,
                                     const ProofOptions& opts) {
  return x_grid_check(
      "g(-x) <= (q-1)(5q-1)/(6q^2) x", ps, xs, opts,
      [&](ReportBuilder& out, const GSeries& g, const std::string& p, const std::string& xs_,
          const PrecReal& x) {
        const SeriesValue gm = eval_g(g, x, -1);
        const PrecReal q = g.pair.q(opts.bits);
        const PrecReal bound = (q - 1L) * (q * 5L - 1L) / (q * q * 6L) * x;
        out.add(p, xs_, gm.value, bound, bound - gm.value - gm.tail_bound, gm.tail_bound);
      });
}

GridCheckReport check_pairwise_positivity(std::span<const ExponentPair> ps, const Grid& xs,
                                          std::size_t n_max, const ProofOptions& opts) {
  for (const auto& pair : ps) {
    if (!in_odd_even_window(pair)) {
      throw std::invalid_argument("check_pairwise_positivity: p = " + pair.to_string() +
                                  " is not between an odd and the next even integer");
    }
  }
  return x_grid_check(
      "binom(p-1,n)(g^n(-x)-g^n(x)) + binom(p-1,n+1)(g^(n+1)(-x)-g^(n+1)(x)) >= 0, odd n <= " +
          std::to_string(n_max),
      ps, xs, opts,
      [&](ReportBuilder& out, const GSeries& g, const std::string& p, const std::string& xs_,
          const PrecReal& x) {
        const GPair gv = eval_g_pair(g, x);
        std::optional<Evaluated> worst;
        for (std::size_t n = 1; n <= n_max; n += 2) {
          Evaluated e = pairwise_eval(g, gv, n);
          if (!worst || e.value + e.tolerance < worst->value + worst->tolerance) worst = std::move(e);
        }
        if (!worst) return;
        const PrecReal zero(opts.bits);
        out.add(p, xs_, worst->value, zero, worst->value + worst->tolerance, worst->tolerance,
                false);
      });
}

GridCheckReport check_F_nonnegative(std::span<const ExponentPair> ps, const Grid& xs,
                                    const ProofOptions& opts) {
  for (const auto& pair : ps) {
    const bool applicable = pair.is_integer() || (pair.p_double() >= 3 && in_odd_even_window(pair));
    if (!applicable) {
      throw std::invalid_argument("check_F_nonnegative: F_p >= 0 is not claimed for p = " +
                                  pair.to_string());
    }
  }
  return x_grid_check(
      "F_p(x) >= 0", ps, xs, opts,
      [&](ReportBuilder& out, const GSeries& g, const std::string& p, const std::string& xs_,
          const PrecReal& x) {
        const FValue f = eval_F(g, x, opts.max_outer_terms);
        out.add(p, xs_, f.value, PrecReal(opts.bits), f.value + f.tolerance, f.tolerance, false);
      });
}

GridCheckReport check_EF_positive(std::span<const ExponentPair> ps, const Grid& xs,
                                  const ProofOptions& opts) {
  return x_grid_check(
      "E_p(x) + F_p(x) > 0", ps, xs, opts,
      [&](ReportBuilder& out, const GSeries& g, const std::string& p, const std::string& xs_,
          const PrecReal& x) {
        const EValue e = eval_E(g, x);
        const FValue f = eval_F(g, x, opts.max_outer_terms);
        const PrecReal sum = e.value + f.value;
        const PrecReal tol = e.tolerance + f.tolerance;
        out.add(p, xs_, sum, PrecReal(opts.bits), sum - tol, tol);
      });
}

GridCheckReport check_E_forms(std::span<const ExponentPair> ps, const Grid& xs,
                              const ProofOptions& opts) {
  return x_grid_check(
      "2(p-1) sum a_{2n+1} x^{2n+1} == -2p sum_{k odd >= 3} binom(1/q,k+1) x^k", ps, xs, opts,
      [&](ReportBuilder& out, const GSeries& g, const std::string& p, const std::string& xs_,
          const PrecReal& x) {
        try {
          const EValue e = eval_E(g, x);
          out.add(p, xs_, e.value, e.binomial_form,
                  e.tolerance - abs(e.value - e.binomial_form), e.tolerance, false);
        } catch (const std::logic_error&) {
          out.add(p, xs_, 0.0, 0.0, -1, -1.0, 0.0);
        }
      });
}

GridCheckReport check_decomposition_identity(std::span<const ExponentPair> ps, const Grid& xs,
                                             const ProofOptions& opts) {
  return x_grid_check(
      "w(x) == (x/q)^(p-1) (x/q + E_p(x) + F_p(x))", ps, xs, opts,
      [&](ReportBuilder& out, const GSeries& g, const std::string& p, const std::string& xs_,
          const PrecReal& x) {
        const long bits = opts.bits;
        const PrecReal w = eval_w_of_x(g.pair, x);
        const PrecReal x_over_q = x / g.pair.q(bits);
        const PrecReal prefactor = pow_p_minus_1(x_over_q, g.pair);
        const EValue e = eval_E(g, x);
        const FValue f = eval_F(g, x, opts.max_outer_terms);
        const PrecReal rhs = prefactor * (x_over_q + e.value + f.value);
        // The closed form carries a few ulps per bracket, amplified by the
        // (p-1) power.
        const PrecReal closed_form_error =
            rounding_eps(bits) * prefactor * (g.pair.p(bits) + 2L) * 4L;
        const PrecReal tol = prefactor * (e.tolerance + f.tolerance) + closed_form_error;
        out.add(p, xs_, w, rhs, tol - abs(w - rhs), tol, false);
      });
}

GridCheckReport check_n1_case(std::span<const ExponentPair> ps, long bits) {
  ReportBuilder out("w_p(1) > w_p^H(1)",
                    "p in " + describe_p_grid(ps) + "; " + std::to_string(bits) + " bits");
  const PrecReal eps = rounding_eps(bits);
  for (const auto& pair : ps) {
    const PrecReal w1 = eval_w1_closed_bits(pair, bits);
    const PrecReal wh = eval_w_classical_bits(pair, 1, bits);
    out.add(pair.to_string(), "1", wh, w1, w1 - wh - eps, eps);
  }
  return std::move(out).finish();
}

GridCheckReport check_case2_polynomial(std::span<const ExponentPair> ps) {
  ReportBuilder out("74p^3 - 55p^2 - 5p - 2 > 0 on (1, 2]", "p in " + describe_p_grid(ps) + " within (1, 2]");
  for (const auto& pair : ps) {
    if (pair.p_double() > 2.0) continue;
    if (pair.is_rational()) {
      const BigRational& p = pair.p_exact();
      if (p > BigRational(2)) continue;
      const BigRational value = BigRational(74) * pow(p, 3) - BigRational(55) * pow(p, 2) -
                                BigRational(5) * p - BigRational(2);
      out.add(pair.to_string(), "-", 0.0, value.to_double(), value.sign(), value.to_double(), 0.0);
    } else {
      const PrecReal p = pair.p(kDefaultProofBits);
      const PrecReal value = pow(p, 3L) * 74L - p * p * 55L - p * 5L - 2L;
      const PrecReal tol = rounding_eps(kDefaultProofBits) * 200L;
      out.add(pair.to_string(), "-", PrecReal(kDefaultProofBits), value, value - tol, tol);
    }
  }
  return std::move(out).finish();
}

GridCheckReport check_case3_estimate(std::size_t n_max) {
  ReportBuilder out("1/(n(n+1)) - 2^-(n+1) > 0", "n in [2, " + std::to_string(n_max) + "]");
  for (std::size_t n = 2; n <= n_max; ++n) {
    const long nn = static_cast<long>(n);
    const BigRational lhs = BigRational(1) / BigRational(nn * (nn + 1));
    const BigRational rhs = pow(BigRational(1, 2), n + 1);
    const BigRational margin = lhs - rhs;
    out.add("-", std::to_string(n), rhs.to_double(), lhs.to_double(), margin.sign(),
            margin.to_double(), 0.0);
  }
  return std::move(out).finish();
}

bool check_pointwise_power_bound(double a, double t, double p) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("check_pointwise_power_bound: t must lie in [0, 1]");
  if (!(p > 1.0)) throw std::invalid_argument("check_pointwise_power_bound: p must exceed 1");
  const double lhs = std::pow(std::fabs(a - t), p);
  const double rhs = std::pow(1.0 - t, p - 1.0) * (std::pow(std::fabs(a), p) - t);
  return lhs >= rhs - 1e-12 * (std::fabs(lhs) + std::fabs(rhs));
}

// ---------------------------------------------------------------------------
// Suite

namespace {
constexpr std::pair<Lemma, std::string_view> kLemmaNames[] = {
    {Lemma::g_bounds, "g_bounds"},
    {Lemma::gpm, "gpm"},
    {Lemma::ak_lower, "ak_lower"},
    {Lemma::binom_upper, "binom_upper"},
    {Lemma::g_linear, "g_linear"},
    {Lemma::pairwise, "pairwise"},
    {Lemma::f_nonnegative, "f_nonnegative"},
    {Lemma::ef_positive, "ef"},
    {Lemma::e_forms, "e_forms"},
    {Lemma::decomposition, "decomposition"},
    {Lemma::n1_case, "n1"},
    {Lemma::case2_polynomial, "case2_polynomial"},
    {Lemma::case3_estimate, "case3_estimate"},
};
} // namespace

std::string_view lemma_name(Lemma lemma) {
  for (const auto& [l, name] : kLemmaNames) {
    if (l == lemma) return name;
  }
  return "unknown";
}

std::optional<Lemma> parse_lemma(std::string_view name) {
  for (const auto& [l, n] : kLemmaNames) {
    if (n == name) return l;
  }
  return std::nullopt;
}

std::vector<Lemma> all_lemmas() {
  std::vector<Lemma> out;
  for (const auto& [l, name] : kLemmaNames) out.push_back(l);
  return out;
}

std::vector<GridCheckReport> run_lemma_suite(const SuiteOptions& options,
                                             std::span<const Lemma> lemmas) {
  const auto& ps = options.p_grid;
  const auto& xs = options.x_grid;
  const auto& opts = options.proof;
  std::vector<GridCheckReport> reports;
  for (const Lemma lemma : lemmas) {
    GridCheckReport report;
    switch (lemma) {
    case Lemma::g_bounds: report = check_g_bounds(ps, xs, opts); break;
    case Lemma::gpm: report = check_lemma_gpm(ps, xs, opts); break;
    case Lemma::ak_lower: report = check_lemma_ak_lower(ps, options.k_max, opts); break;
    case Lemma::binom_upper: report = check_lemma_binom_upper(ps, 1, options.k_max, opts); break;
    case Lemma::g_linear: report = check_lemma_g_linear(ps, xs, opts); break;
    case Lemma::pairwise: {
      std::vector<ExponentPair> window;
      for (const auto& pair : ps) {
        if (in_odd_even_window(pair)) window.push_back(pair);
      }
      report = check_pairwise_positivity(window, xs, options.pairwise_n_max, opts);
      break;
    }
    case Lemma::f_nonnegative: {
      std::vector<ExponentPair> applicable;
      for (const auto& pair : ps) {
        if (pair.is_integer() || (pair.p_double() >= 3 && in_odd_even_window(pair))) {
          applicable.push_back(pair);
        }
      }
      report = check_F_nonnegative(applicable, xs, opts);
      break;
    }
    case Lemma::ef_positive: report = check_EF_positive(ps, xs, opts); break;
    case Lemma::e_forms: report = check_E_forms(ps, xs, opts); break;
    case Lemma::decomposition: report = check_decomposition_identity(ps, xs, opts); break;
    case Lemma::n1_case: report = check_n1_case(options.n1_grid, opts.bits); break;
    case Lemma::case2_polynomial: report = check_case2_polynomial(ps); break;
    case Lemma::case3_estimate: report = check_case3_estimate(options.k_max); break;
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

} // namespace hardy
