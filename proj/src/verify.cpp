#include "hardy/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hardy {

namespace {

constexpr long kTableDigits = 20;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void require_weights(std::span<const double> weights, std::size_t N) {
  if (weights.size() < N) throw std::invalid_argument("weight table shorter than the support");
}

/// sgn(t) |t|^(p-1).
double signed_pow(double t, double p) {
  if (t == 0.0) return 0.0;
  if (p == 2.0) return t;
  if (p == 3.0) return t * std::fabs(t);
  return std::copysign(std::pow(std::fabs(t), p - 1.0), t);
}

struct Evaluation {
  double lhs;
  double rhs;
};

Evaluation evaluate(std::span<const double> phi, std::span<const double> w, double p) {
  double lhs = 0.0;
  double rhs = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    lhs += abs_pow(phi[i] - prev, p);
    rhs += w[i] * abs_pow(phi[i], p);
    prev = phi[i];
  }
  lhs += abs_pow(prev, p);
  return {lhs, rhs};
}

double quotient_and_gradient(std::span<const double> phi, std::span<const double> w, double p,
                             std::vector<double>& grad) {
  const std::size_t N = phi.size();
  const Evaluation e = evaluate(phi, w, p);
  if (!(e.rhs > 0.0)) throw std::domain_error("rayleigh quotient: weighted norm is zero");
  const double q = e.lhs / e.rhs;
  grad.assign(N, 0.0);
  double left = signed_pow(phi[0], p);  // s(phi_j - phi_{j-1}) at j = 0
  for (std::size_t j = 0; j < N; ++j) {
    const double next = j + 1 < N ? phi[j + 1] : 0.0;
    const double right = signed_pow(next - phi[j], p);
    const double d_lhs = p * (left - right);
    const double d_rhs = p * w[j] * signed_pow(phi[j], p);
    grad[j] = (d_lhs - q * d_rhs) / e.rhs;
    left = right;
  }
  return q;
}

void normalize(std::vector<double>& phi, std::vector<double>& grad, std::span<const double> w,
               double p) {
  const double rhs = evaluate(phi, w, p).rhs;
  const double c = std::pow(rhs, -1.0 / p);
  for (auto& v : phi) v *= c;
  // The quotient is 0-homogeneous, so its gradient scales by 1/c.
  for (auto& g : grad) g /= c;
}

RayleighResult descend(std::vector<double> phi, std::span<const double> w, double p,
                       std::size_t max_iters, double tol) {
  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-300;
  const std::size_t N = phi.size();
  std::vector<double> grad;
  double value = quotient_and_gradient(phi, w, p, grad);
  normalize(phi, grad, w, p);

  std::vector<double> trial(N);
  std::vector<double> trial_grad;
  double step = 1.0 / std::max(norm2(grad), 1e-300);
  std::size_t it = 0;
  bool converged = false;
  double gnorm = norm2(grad) * norm2(phi);
  for (; it < max_iters; ++it) {
    if (gnorm <= tol * value) {
      converged = true;
      break;
    }
    const double g2 = dot(grad, grad);
    double a = step;
    double trial_value = 0.0;
    bool accepted = false;
    while (a > kMinStep) {
      for (std::size_t i = 0; i < N; ++i) trial[i] = phi[i] - a * grad[i];
      try {
        trial_value = quotient_and_gradient(trial, w, p, trial_grad);
      } catch (const std::domain_error&) {
        a *= 0.5;
        continue;
      }
      if (trial_value <= value - kArmijo * a * g2) {
        accepted = true;
        break;
      }
      a *= 0.5;
    }
    if (!accepted) break;
    normalize(trial, trial_grad, w, p);
    double sy = 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double s = trial[i] - phi[i];
      const double y = trial_grad[i] - grad[i];
      sy += s * y;
      ss += s * s;
    }
    step = sy > 0.0 ? ss / sy : 2.0 * a;
    phi.swap(trial);
    grad.swap(trial_grad);
    value = trial_value;
    gnorm = norm2(grad) * norm2(phi);
  }
  return {value, CompactFunction{std::move(phi)}, it, converged, gnorm};
}

} // namespace

Distribution Distribution::sparse(double density) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw std::invalid_argument("sparse density must lie in [0, 1]");
  }
  return {Kind::sparse, density};
}

std::string Distribution::to_string() const {
  switch (kind) {
  case Kind::uniform: return "uniform";
  case Kind::gaussian: return "gaussian";
  case Kind::sparse: {
    std::ostringstream out;
    out << "sparse:" << density;
    return out.str();
  }
  }
  return "unknown";
}

Distribution parse_distribution(std::string_view text) {
  if (text == "uniform") return Distribution::uniform();
  if (text == "gaussian") return Distribution::gaussian();
  if (text == "sparse") return Distribution::sparse(0.1);
  if (text.starts_with("sparse:")) {
    const std::string rest(text.substr(7));
    std::size_t used = 0;
    double density = 0.0;
    try {
      density = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rest.size()) {
      throw std::invalid_argument("bad sparse density: " + rest);
    }
    return Distribution::sparse(density);
  }
  throw std::invalid_argument("unknown distribution: " + std::string(text));
}

std::vector<double> tabulate_weights(const ExponentPair& pair, WeightKind kind, std::size_t N) {
  std::vector<double> out;
  out.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) {
    const PrecReal w = kind == WeightKind::improved ? eval_w(pair, n, kTableDigits)
                                                    : eval_w_classical(pair, n, kTableDigits);
    out.push_back(w.to_double());
  }
  return out;
}

double abs_pow(double t, double p) {
  if (p == 2.0) return t * t;
  const double a = std::fabs(t);
  if (p == 3.0) return a * a * a;
  return std::pow(a, p);
}

double hardy_lhs(const CompactFunction& phi, double p) {
  double lhs = 0.0;
  double prev = 0.0;
  for (double v : phi.values) {
    lhs += abs_pow(v - prev, p);
    prev = v;
  }
  return lhs + abs_pow(prev, p);
}

double hardy_rhs(const CompactFunction& phi, std::span<const double> weights, double p) {
  require_weights(weights, phi.values.size());
  double rhs = 0.0;
  for (std::size_t i = 0; i < phi.values.size(); ++i) rhs += weights[i] * abs_pow(phi.values[i], p);
  return rhs;
}

double hardy_rhs(const CompactFunction& phi, const ExponentPair& pair, WeightKind kind) {
  return hardy_rhs(phi, tabulate_weights(pair, kind, phi.values.size()), pair.p_double());
}

InequalityReport check_hardy(const CompactFunction& phi, std::span<const double> weights, double p) {
  const double lhs = hardy_lhs(phi, p);
  const double rhs = hardy_rhs(phi, weights, p);
  const double slack = lhs - rhs;
  return {lhs, rhs, slack, slack >= -1e-12 * lhs};
}

InequalityReport check_hardy(const CompactFunction& phi, const ExponentPair& pair, WeightKind kind) {
  return check_hardy(phi, tabulate_weights(pair, kind, phi.values.size()), pair.p_double());
}

CompactFunction random_compact(std::uint64_t seed, std::size_t N, const Distribution& distribution) {
  if (N == 0) throw std::invalid_argument("random_compact: N must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::normal_distribution<double> gaussian(0.0, 1.0);
  std::vector<double> values(N, 0.0);
  switch (distribution.kind) {
  case Distribution::Kind::uniform:
    for (auto& v : values) v = uniform(rng);
    break;
  case Distribution::Kind::gaussian:
    for (auto& v : values) v = gaussian(rng);
    break;
  case Distribution::Kind::sparse: {
    std::bernoulli_distribution keep(distribution.density);
    bool any = false;
    for (auto& v : values) {
      if (keep(rng)) {
        v = uniform(rng);
        any = any || v != 0.0;
      }
    }
    if (!any) {
      const std::size_t at = std::uniform_int_distribution<std::size_t>(0, N - 1)(rng);
      while (values[at] == 0.0) values[at] = uniform(rng);
    }
    break;
  }
  }
  return CompactFunction{std::move(values)};
}

double rayleigh_quotient(const CompactFunction& phi, std::span<const double> weights, double p) {
  const double rhs = hardy_rhs(phi, weights, p);
  if (!(rhs > 0.0)) throw std::domain_error("rayleigh_quotient: weighted norm is zero");
  return hardy_lhs(phi, p) / rhs;
}

double rayleigh_quotient(const CompactFunction& phi, const ExponentPair& pair, WeightKind kind) {
  return rayleigh_quotient(phi, tabulate_weights(pair, kind, phi.values.size()), pair.p_double());
}

std::vector<double> rayleigh_gradient(const CompactFunction& phi, std::span<const double> weights,
                                      double p) {
  require_weights(weights, phi.values.size());
  if (phi.values.empty()) throw std::domain_error("rayleigh_gradient: empty support");
  std::vector<double> grad;
  quotient_and_gradient(phi.values, weights, p, grad);
  return grad;
}

std::vector<double> rayleigh_gradient(const CompactFunction& phi, const ExponentPair& pair,
                                      WeightKind kind) {
  return rayleigh_gradient(phi, tabulate_weights(pair, kind, phi.values.size()), pair.p_double());
}

RayleighResult minimize_rayleigh(const ExponentPair& pair, WeightKind kind, std::size_t N,
                                 std::size_t max_iters, double tol, std::uint64_t seed,
                                 std::size_t restarts) {
  if (N < 2) throw std::invalid_argument("minimize_rayleigh: N must be at least 2");
  const double p = pair.p_double();
  const double exponent = 1.0 / pair.q_double();
  const std::vector<double> w = tabulate_weights(pair, kind, N);

  std::vector<double> start(N);
  const double taper_from = 0.75 * static_cast<double>(N);
  const double taper_len = static_cast<double>(N) + 1.0 - taper_from;
  for (std::size_t i = 0; i < N; ++i) {
    const double n = static_cast<double>(i + 1);
    const double cutoff = n <= taper_from ? 1.0 : (static_cast<double>(N) + 1.0 - n) / taper_len;
    start[i] = std::pow(n, exponent) * cutoff;
  }

  RayleighResult best = descend(start, w, p, max_iters, tol);
  for (std::size_t r = 1; r <= restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0.0, 0.25);
    std::vector<double> perturbed = start;
    for (auto& v : perturbed) v *= 1.0 + noise(rng);
    RayleighResult candidate = descend(std::move(perturbed), w, p, max_iters, tol);
    if (candidate.value < best.value) best = std::move(candidate);
  }
  return best;
}

std::string to_csv(const CompactFunction& phi) {
  std::ostringstream out;
  out.precision(17);
  out << "n,phi_n\n";
  for (std::size_t i = 0; i < phi.values.size(); ++i) out << i + 1 << ',' << phi.values[i] << '\n';
  return out.str();
}

TrialSummary run_hardy_trials(const TrialConfig& config) {
  if (config.ps.empty() || config.distributions.empty()) {
    throw std::invalid_argument("run_hardy_trials: need at least one p and one distribution");
  }
  if (config.support_min < 1 || config.support_max < config.support_min) {
    throw std::invalid_argument("run_hardy_trials: bad support range");
  }
  std::vector<std::vector<double>> improved;
  std::vector<std::vector<double>> classical;
  for (const auto& pair : config.ps) {
    improved.push_back(tabulate_weights(pair, WeightKind::improved, config.support_max));
    classical.push_back(tabulate_weights(pair, WeightKind::classical, config.support_max));
  }

  TrialSummary summary;
  summary.min_slack_improved = std::numeric_limits<double>::infinity();
  summary.min_slack_classical = std::numeric_limits<double>::infinity();
  summary.min_relative_slack_improved = std::numeric_limits<double>::infinity();
  const std::size_t np = config.ps.size();
  for (std::size_t i = 0; i < config.trials; ++i) {
    const std::size_t pi = i % np;
    const Distribution& dist = config.distributions[(i / np) % config.distributions.size()];
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                      static_cast<std::uint32_t>(config.seed >> 32), static_cast<std::uint32_t>(i),
                      static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);
    const std::size_t N = std::uniform_int_distribution<std::size_t>(config.support_min,
                                                                     config.support_max)(rng);
    const std::uint64_t phi_seed = rng();
    const CompactFunction phi = random_compact(phi_seed, N, dist);
    const double p = config.ps[pi].p_double();
    const InequalityReport imp = check_hardy(phi, improved[pi], p);
    const InequalityReport cls = check_hardy(phi, classical[pi], p);
    const bool pass = imp.pass && cls.pass;

    ++summary.trials;
    if (!pass) ++summary.failures;
    if (imp.slack > cls.slack) ++summary.ordering_violations;
    summary.min_slack_improved = std::min(summary.min_slack_improved, imp.slack);
    summary.min_slack_classical = std::min(summary.min_slack_classical, cls.slack);
    if (imp.lhs > 0.0) {
      summary.min_relative_slack_improved =
          std::min(summary.min_relative_slack_improved, imp.slack / imp.lhs);
    }
    if (config.keep_records) {
      summary.records.push_back({i, config.ps[pi].to_string(), dist.to_string(), N, phi_seed,
                                 imp.lhs, imp.rhs, cls.rhs, imp.slack, cls.slack, pass});
    }
  }
  return summary;
}

nlohmann::json to_json(const TrialSummary& summary) {
  auto finite = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : summary.records) {
    records.push_back({{"index", r.index},
                       {"p", r.p},
                       {"distribution", r.distribution},
                       {"N", r.N},
                       {"seed", r.seed},
                       {"lhs", r.lhs},
                       {"rhs_improved", r.rhs_improved},
                       {"rhs_classical", r.rhs_classical},
                       {"slack_improved", r.slack_improved},
                       {"slack_classical", r.slack_classical},
                       {"pass", r.pass}});
  }
  return {{"trials", summary.trials},
          {"failures", summary.failures},
          {"ordering_violations", summary.ordering_violations},
          {"min_slack_improved", finite(summary.min_slack_improved)},
          {"min_slack_classical", finite(summary.min_slack_classical)},
          {"min_relative_slack_improved", finite(summary.min_relative_slack_improved)},
          {"pass", summary.pass()},
          {"records", std::move(records)}};
}

nlohmann::json to_json(const RayleighResult& result) {
  return {{"value", result.value},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"gradient_norm", result.gradient_norm},
          {"N", result.minimizer.support_bound()}};
}

} // namespace hardy
