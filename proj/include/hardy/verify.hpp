#ifndef HARDY_VERIFY_HPP
#define HARDY_VERIFY_HPP

// The Hardy inequality
//
//   sum_{n>=1} |phi(n) - phi(n-1)|^p >= sum_{n>=1} w(n) |phi(n)|^p,  phi(0) = 0,
//
// on finitely supported test functions, and a minimizer for its Rayleigh
// quotient. Everything here runs in double precision; weights are tabulated
// once from the high-precision evaluators.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hardy/numerics.hpp"
#include "hardy/weights.hpp"

namespace hardy {

/// phi(1), ..., phi(N); phi(0) = 0 and phi(n) = 0 for n > N.
struct CompactFunction {
  std::vector<double> values;

  std::size_t support_bound() const { return values.size(); }
};

struct InequalityReport {
  double lhs;
  double rhs;
  double slack;
  bool pass;
};

struct RayleighResult {
  double value;
  CompactFunction minimizer;
  std::size_t iterations;
  bool converged;
  /// ||grad Q|| * ||phi||, which does not depend on the scale of phi.
  double gradient_norm;
};

struct Distribution {
  enum class Kind { uniform, gaussian, sparse };
  Kind kind = Kind::uniform;
  /// Probability that an entry is kept, sparse only.
  double density = 0.1;

  static Distribution uniform() { return {Kind::uniform, 0.0}; }
  static Distribution gaussian() { return {Kind::gaussian, 0.0}; }
  static Distribution sparse(double density);

  std::string to_string() const;
};

/// "uniform", "gaussian", "sparse" or "sparse:DENSITY".
Distribution parse_distribution(std::string_view text);

/// w(1..N) as doubles, index 0 holding n = 1.
std::vector<double> tabulate_weights(const ExponentPair& pair, WeightKind kind, std::size_t N);

/// |t|^p, with exact products for p = 2 and p = 3.
double abs_pow(double t, double p);

/// sum_{n=1}^{N+1} |phi(n) - phi(n-1)|^p.
double hardy_lhs(const CompactFunction& phi, double p);
/// sum_{n=1}^{N} w(n) |phi(n)|^p; `weights` must cover the support.
double hardy_rhs(const CompactFunction& phi, std::span<const double> weights, double p);
double hardy_rhs(const CompactFunction& phi, const ExponentPair& pair, WeightKind kind);

/// Passes when slack >= -1e-12 * lhs.
InequalityReport check_hardy(const CompactFunction& phi, std::span<const double> weights, double p);
InequalityReport check_hardy(const CompactFunction& phi, const ExponentPair& pair, WeightKind kind);

/// Deterministic in (seed, N, distribution). Sparse draws keep at least one
/// nonzero entry. Throws std::invalid_argument for N = 0.
CompactFunction random_compact(std::uint64_t seed, std::size_t N, const Distribution& distribution);

/// lhs / rhs. Throws std::domain_error when rhs is zero.
double rayleigh_quotient(const CompactFunction& phi, std::span<const double> weights, double p);
double rayleigh_quotient(const CompactFunction& phi, const ExponentPair& pair, WeightKind kind);

/// Exact gradient of the quotient with respect to phi(1..N).
std::vector<double> rayleigh_gradient(const CompactFunction& phi, std::span<const double> weights,
                                      double p);
std::vector<double> rayleigh_gradient(const CompactFunction& phi, const ExponentPair& pair,
                                      WeightKind kind);

/// Gradient descent on {rhs = 1} with Barzilai-Borwein trial steps and Armijo
/// backtracking. The first start is the ground state n^(1/q) tapered linearly
/// to zero over the last quarter of the window; `restarts` further starts
/// perturb it with noise drawn from `seed`. Returns the best run. Stops when
/// gradient_norm <= tol * value. Throws std::invalid_argument for N < 2.
RayleighResult minimize_rayleigh(const ExponentPair& pair, WeightKind kind, std::size_t N,
                                 std::size_t max_iters, double tol = 1e-9, std::uint64_t seed = 0,
                                 std::size_t restarts = 1);

/// Header `n,phi_n`.
std::string to_csv(const CompactFunction& phi);

// ---------------------------------------------------------------------------
// Seeded trial batches

struct TrialConfig {
  std::vector<ExponentPair> ps;
  std::vector<Distribution> distributions;
  std::size_t trials = 1000;
  /// N is drawn uniformly from [support_min, support_max].
  std::size_t support_min = 1;
  std::size_t support_max = 200;
  std::uint64_t seed = 0;
  bool keep_records = false;
};

struct TrialRecord {
  std::size_t index;
  std::string p;
  std::string distribution;
  std::size_t N;
  std::uint64_t seed;
  double lhs;
  double rhs_improved;
  double rhs_classical;
  double slack_improved;
  double slack_classical;
  bool pass;
};

struct TrialSummary {
  std::size_t trials = 0;
  /// Trials where either weight kind failed check_hardy.
  std::size_t failures = 0;
  /// Trials where slack(improved) > slack(classical).
  std::size_t ordering_violations = 0;
  double min_slack_improved;
  double min_slack_classical;
  /// Smallest slack(improved) / lhs.
  double min_relative_slack_improved;
  std::vector<TrialRecord> records;

  bool pass() const { return failures == 0 && ordering_violations == 0; }
};

/// Trial i uses p = ps[i mod |ps|] and the distribution after that in turn;
/// its N and phi come from a stream seeded with (seed, i), so any trial can be
/// replayed alone.
TrialSummary run_hardy_trials(const TrialConfig& config);

nlohmann::json to_json(const TrialSummary& summary);
nlohmann::json to_json(const RayleighResult& result);

} // namespace hardy

#endif
