#include "hardy/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "hardy/laplacian.hpp"
#include "hardy/numerics.hpp"
#include "hardy/proof_machinery.hpp"
#include "hardy/series.hpp"
#include "hardy/verify.hpp"
#include "hardy/weights.hpp"

namespace hardy::cli {

namespace {

using nlohmann::json;

/// Bad input detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  std::string format = "csv";
  std::string out_path;
  long digits = 30;
  std::uint64_t seed = 0;
};

struct Report {
  std::string text;
  int exit_code;
};

ExponentPair parse_p(const std::string& text) {
  try {
    return ExponentPair::parse(text);
  } catch (const std::exception& e) {
    throw UsageError("--p " + text + ": " + e.what());
  }
}

std::uint64_t parse_u64(std::string_view text, const std::string& what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(what + ": expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

/// "a..b" or "a", with 1 <= a <= b.
std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  const std::uint64_t lo = parse_u64(std::string_view(text).substr(0, dots), "--n");
  const std::uint64_t hi =
      dots == std::string::npos ? lo : parse_u64(std::string_view(text).substr(dots + 2), "--n");
  if (lo < 1 || hi < lo) throw UsageError("--n: need 1 <= a <= b in a..b");
  return {lo, hi};
}

Grid parse_grid_arg(const std::string& text, const std::string& flag) {
  try {
    return parse_grid(text);
  } catch (const std::exception& e) {
    throw UsageError(flag + " " + text + ": " + e.what());
  }
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

json global_config(const Global& g, const std::string& subcommand) {
  return {{"subcommand", subcommand},
          {"format", g.format},
          {"digits", g.digits},
          {"seed", g.seed},
          {"out", g.out_path.empty() ? json(nullptr) : json(g.out_path)}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

struct WeightArgs {
  std::string p;
  std::string n = "1..10";
};

Report cmd_weight(const Global& g, const WeightArgs& a) {
  const ExponentPair pair = parse_p(a.p);
  const auto [lo, hi] = parse_range(a.n);
  if (g.digits < 1) throw UsageError("--digits must be positive");
  const WeightTable table = compare_weights(pair, lo, hi, g.digits);
  const int code = table.all_verified_positive() ? kExitPass : kExitCheckFailed;
  if (g.format == "csv") return {to_csv(table), code};
  json config = global_config(g, "weight");
  config["p"] = pair.to_string();
  config["n"] = a.n;
  return {dump({{"config", config},
                {"precision_bits", table.precision_bits},
                {"all_verified_positive", table.all_verified_positive()},
                {"rows", to_json(table)}}),
          code};
}

struct SeriesArgs {
  std::string p;
  std::size_t order = kDefaultSeriesOrder;
  bool correction = false;
};

Report cmd_series(const Global& g, const SeriesArgs& a) {
  const ExponentPair pair = parse_p(a.p);
  json config = global_config(g, "series");
  config["p"] = pair.to_string();
  config["order"] = a.order;
  config["correction"] = a.correction;

  std::vector<std::string> coeffs;
  int code = kExitPass;
  json extra = json::object();
  if (a.correction) {
    std::optional<CorrectionSeries> expanded;
    try {
      expanded = expand_correction(pair, a.order);
    } catch (const std::logic_error& e) {
      return {std::string("series: ") + e.what() + "\n", kExitCheckFailed};
    }
    const CorrectionSeries& series = *expanded;
    coeffs = coefficient_strings(series, static_cast<int>(g.digits));
    extra["exact"] = std::holds_alternative<ExactSeries>(series);
    const PositivityProbe probe = probe_correction_positivity(pair, a.order);
    extra["even_coefficients_positive"] = probe.all_positive();
  } else {
    const auto p = pair.integer_value();
    if (!p || *p < 2) throw UsageError("series: the c_k table needs an integer p >= 2");
    try {
      const WeightExpansion expansion = expand_w_integer_p(*p, a.order);
      if (g.format == "csv") return {to_csv(expansion), code};
      json j = to_json(expansion);
      j["config"] = config;
      return {dump(j), code};
    } catch (const std::logic_error& e) {
      return {std::string("series: ") + e.what() + "\n", kExitCheckFailed};
    }
  }
  if (g.format == "csv") {
    std::string text = "k,c_k\n";
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      text += std::to_string(k) + "," + coeffs[k] + "\n";
    }
    return {text, code};
  }
  json j = {{"config", config}, {"p", pair.to_string()}, {"coefficients", coeffs}};
  j.update(extra);
  return {dump(j), code};
}

struct VerifyArgs {
  std::string p = "2";
  std::size_t trials = 1000;
  std::size_t support = 50;
  std::string distribution = "uniform";
  bool supersolution = false;
  std::string n = "1..1000";
};

Report cmd_supersolution(const Global& g, const VerifyArgs& a, const ExponentPair& pair) {
  const auto [lo, hi] = parse_range(a.n);
  if (g.digits < 3) throw UsageError("--digits must be at least 3 for --supersolution");
  const long bits = required_precision(pair, hi + 1, g.digits);
  const GridFunction u = ground_state_grid(pair, hi + 1, bits);
  const PrecReal tolerance = PrecReal::parse("1e-" + std::to_string(g.digits - 2), bits);
  const int shown = static_cast<int>(std::min<long>(g.digits, 20));

  std::ostringstream csv;
  csv << "n,w_supersolution,w_closed,residual\n";
  json rows = json::array();
  double max_residual = 0.0;
  bool pass = true;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    const PrecReal from_u = weight_from_supersolution(u, pair, n);
    const PrecReal closed = eval_w_bits(pair, n, bits);
    const PrecReal residual = abs(from_u - closed);
    if (!(residual < tolerance)) pass = false;
    max_residual = std::max(max_residual, residual.to_double());
    if (g.format == "csv") {
      csv << n << ',' << from_u.to_string(shown) << ',' << closed.to_string(shown) << ','
          << residual.to_string(3) << '\n';
    } else {
      rows.push_back({{"n", n},
                      {"w_supersolution", from_u.to_string(shown)},
                      {"w_closed", closed.to_string(shown)},
                      {"residual", residual.to_string(3)}});
    }
  }
  const int code = pass ? kExitPass : kExitCheckFailed;
  if (g.format == "csv") return {csv.str(), code};
  json config = global_config(g, "verify");
  config["supersolution"] = true;
  config["p"] = pair.to_string();
  config["n"] = a.n;
  return {dump({{"config", config},
                {"precision_bits", bits},
                {"tolerance", tolerance.to_string(3)},
                {"max_residual", max_residual},
                {"pass", pass},
                {"rows", rows}}),
          code};
}

Report cmd_verify(const Global& g, const VerifyArgs& a) {
  const ExponentPair pair = parse_p(a.p);
  if (a.supersolution) return cmd_supersolution(g, a, pair);
  if (a.support < 1) throw UsageError("--support must be at least 1");

  TrialConfig config;
  config.ps = {pair};
  try {
    if (a.distribution == "all") {
      config.distributions = {Distribution::uniform(), Distribution::gaussian(),
                              Distribution::sparse(0.1)};
    } else {
      config.distributions = {parse_distribution(a.distribution)};
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--distribution: ") + e.what());
  }
  config.trials = a.trials;
  config.support_min = a.support;
  config.support_max = a.support;
  config.seed = g.seed;
  config.keep_records = true;
  const TrialSummary summary = run_hardy_trials(config);
  const int code = summary.pass() ? kExitPass : kExitCheckFailed;

  if (g.format == "csv") {
    std::ostringstream csv;
    csv << "index,p,distribution,N,seed,lhs,rhs_improved,rhs_classical,slack_improved,"
           "slack_classical,pass\n";
    for (const auto& r : summary.records) {
      csv << r.index << ',' << r.p << ',' << r.distribution << ',' << r.N << ',' << r.seed << ','
          << fmt_double(r.lhs) << ',' << fmt_double(r.rhs_improved) << ','
          << fmt_double(r.rhs_classical) << ',' << fmt_double(r.slack_improved) << ','
          << fmt_double(r.slack_classical) << ',' << (r.pass ? "true" : "false") << '\n';
    }
    return {csv.str(), code};
  }
  json cfg = global_config(g, "verify");
  cfg["p"] = pair.to_string();
  cfg["trials"] = a.trials;
  cfg["support"] = a.support;
  cfg["distribution"] = a.distribution;
  json j = to_json(summary);
  j["config"] = cfg;
  return {dump(j), code};
}

struct LemmaArgs {
  std::string p;
  std::string p_grid;
  std::string x_grid = "0.001:0.5:0.001";
  std::vector<std::string> only;
  std::size_t order = kDefaultSeriesOrder;
  long precision = kDefaultProofBits;
  std::size_t k_max = 64;
  std::size_t pairwise_n_max = 15;
};

Report cmd_lemmas(const Global& g, const LemmaArgs& a) {
  SuiteOptions options;
  if (!a.p.empty() && !a.p_grid.empty()) throw UsageError("give --p or --p-grid, not both");
  if (!a.p.empty()) {
    options.p_grid = {parse_p(a.p)};
    options.n1_grid = options.p_grid;
  } else if (!a.p_grid.empty()) {
    options.p_grid.clear();
    for (const auto& v : parse_grid_arg(a.p_grid, "--p-grid").points) {
      if (v <= BigRational(1)) throw UsageError("--p-grid: every p must exceed 1");
      options.p_grid.push_back(ExponentPair::rational(v));
    }
    options.n1_grid = options.p_grid;
  }
  options.x_grid = parse_grid_arg(a.x_grid, "--x-grid");
  for (const auto& x : options.x_grid.points) {
    if (x.sign() <= 0 || x > BigRational(1, 2)) throw UsageError("--x-grid: x must lie in (0, 1/2]");
  }
  if (a.order < 1) throw UsageError("--order must be at least 1");
  if (a.precision < 32) throw UsageError("--precision must be at least 32 bits");
  options.proof.order = a.order;
  options.proof.bits = a.precision;
  options.k_max = a.k_max;
  options.pairwise_n_max = a.pairwise_n_max;

  std::vector<Lemma> lemmas;
  for (const auto& name : a.only) {
    const auto lemma = parse_lemma(name);
    if (!lemma) throw UsageError("--only: unknown check '" + name + "'");
    lemmas.push_back(*lemma);
  }
  if (lemmas.empty()) lemmas = all_lemmas();

  const std::vector<GridCheckReport> reports = run_lemma_suite(options, lemmas);
  const bool pass = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
  const int code = pass ? kExitPass : kExitCheckFailed;

  if (g.format == "csv") {
    std::ostringstream csv;
    csv << "lemma,points,worst_margin,max_tolerance,pass,failures,grid\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      csv << lemma_name(lemmas[i]) << ',' << r.points << ','
          << (std::isfinite(r.worst_margin) ? fmt_double(r.worst_margin) : "") << ','
          << fmt_double(r.max_tolerance) << ',' << (r.pass ? "true" : "false") << ','
          << r.failures.size() << ',' << csv_quote(r.grid) << '\n';
    }
    return {csv.str(), code};
  }
  json config = global_config(g, "lemmas");
  config["p"] = a.p.empty() ? json(nullptr) : json(a.p);
  config["p_grid"] = describe_p_grid(options.p_grid);
  config["x_grid"] = options.x_grid.text;
  config["order"] = a.order;
  config["precision_bits"] = a.precision;
  config["k_max"] = a.k_max;
  config["pairwise_n_max"] = a.pairwise_n_max;
  json out = json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    json r = to_json(reports[i]);
    r["lemma"] = lemma_name(lemmas[i]);
    out.push_back(std::move(r));
  }
  return {dump({{"config", config}, {"pass", pass}, {"reports", out}}), code};
}

struct RayleighArgs {
  std::string p = "2";
  std::string weight = "classical";
  std::size_t N = 100;
  std::size_t max_iters = 20000;
  double tol = 1e-9;
  std::size_t restarts = 1;
  std::string phi_out;
};

Report cmd_rayleigh(const Global& g, const RayleighArgs& a) {
  const ExponentPair pair = parse_p(a.p);
  const WeightKind kind = parse_weight_kind(a.weight);
  const RayleighResult result =
      minimize_rayleigh(pair, kind, a.N, a.max_iters, a.tol, g.seed, a.restarts);
  const bool pass = result.value >= 1.0 - a.tol;
  if (!a.phi_out.empty()) {
    std::ofstream file(a.phi_out, std::ios::binary);
    if (!file) throw UsageError("--phi-out: cannot open " + a.phi_out);
    file << to_csv(result.minimizer);
  }
  const int code = pass ? kExitPass : kExitCheckFailed;
  if (g.format == "csv") {
    std::ostringstream csv;
    csv << "p,weight,N,value,iterations,converged,gradient_norm\n"
        << pair.to_string() << ',' << a.weight << ',' << a.N << ',' << fmt_double(result.value)
        << ',' << result.iterations << ',' << (result.converged ? "true" : "false") << ','
        << fmt_double(result.gradient_norm) << '\n';
    return {csv.str(), code};
  }
  json config = global_config(g, "rayleigh");
  config["p"] = pair.to_string();
  config["weight"] = a.weight;
  config["N"] = a.N;
  config["max_iters"] = a.max_iters;
  config["tol"] = a.tol;
  config["restarts"] = a.restarts;
  json j = to_json(result);
  j["config"] = config;
  j["pass"] = pass;
  return {dump(j), code};
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete p-Hardy weights: evaluation, series, and verification", "hardy"};
  app.fallthrough();
  app.require_subcommand(1);

  Global g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", g.out_path, "Write the report to this file instead of stdout");
  app.add_option("--digits", g.digits, "Target decimal digits")->capture_default_str();
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();

  WeightArgs weight;
  auto* weight_cmd = app.add_subcommand("weight", "Compare the improved and classical weights");
  weight_cmd->add_option("--p", weight.p, "Exponent p > 1, as a/b or a decimal")->required();
  weight_cmd->add_option("--n", weight.n, "Range a..b of n")->capture_default_str();

  SeriesArgs series;
  auto* series_cmd = app.add_subcommand("series", "Exact expansion of w_p in powers of 1/n");
  series_cmd->add_option("--p", series.p, "Exponent p")->required();
  series_cmd->add_option("--order", series.order, "Highest coefficient index")->capture_default_str();
  series_cmd->add_flag("--correction", series.correction,
                       "Expand the relative correction a_p instead of c_k");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Random test functions against the inequality");
  verify_cmd->add_option("--p", verify.p, "Exponent p")->capture_default_str();
  verify_cmd->add_option("--trials", verify.trials, "Number of trials")->capture_default_str();
  verify_cmd->add_option("--support", verify.support, "Support bound N")->capture_default_str();
  verify_cmd
      ->add_option("--distribution", verify.distribution,
                   "uniform, gaussian, sparse, sparse:DENSITY or all")
      ->capture_default_str();
  verify_cmd->add_flag("--supersolution", verify.supersolution,
                       "Check Delta_p u / u^(p-1) = w_p for u(n) = n^((p-1)/p)");
  verify_cmd->add_option("--n", verify.n, "Range a..b of n for --supersolution")
      ->capture_default_str();

  LemmaArgs lemmas;
  auto* lemmas_cmd = app.add_subcommand("lemmas", "Grid checks of the bounds behind w_p > w_p^H");
  lemmas_cmd->add_option("--p", lemmas.p, "Single exponent p");
  lemmas_cmd->add_option("--p-grid", lemmas.p_grid, "p grid start:stop:step (default: built-in grid)");
  lemmas_cmd->add_option("--x-grid", lemmas.x_grid, "x grid start:stop:step")->capture_default_str();
  lemmas_cmd->add_option("--only", lemmas.only, "Comma-separated checks to run")->delimiter(',');
  lemmas_cmd->add_option("--order", lemmas.order, "Series order for g")->capture_default_str();
  lemmas_cmd->add_option("--precision", lemmas.precision, "Working precision in bits")
      ->capture_default_str();
  lemmas_cmd->add_option("--k-max", lemmas.k_max, "Largest k for coefficient checks")
      ->capture_default_str();
  lemmas_cmd->add_option("--pairwise-n-max", lemmas.pairwise_n_max, "Largest odd n for pairwise")
      ->capture_default_str();

  RayleighArgs rayleigh;
  auto* rayleigh_cmd = app.add_subcommand("rayleigh", "Minimize the Rayleigh quotient");
  rayleigh_cmd->add_option("--p", rayleigh.p, "Exponent p")->capture_default_str();
  rayleigh_cmd->add_option("--weight", rayleigh.weight, "improved or classical")
      ->check(CLI::IsMember({"improved", "classical"}))
      ->capture_default_str();
  rayleigh_cmd->add_option("--N", rayleigh.N, "Support bound")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24))
      ->capture_default_str();
  rayleigh_cmd->add_option("--max-iters", rayleigh.max_iters, "Iteration cap per start")
      ->capture_default_str();
  rayleigh_cmd->add_option("--tol", rayleigh.tol, "Relative gradient tolerance")
      ->capture_default_str();
  rayleigh_cmd->add_option("--restarts", rayleigh.restarts, "Extra seeded starts")
      ->capture_default_str();
  rayleigh_cmd->add_option("--phi-out", rayleigh.phi_out, "Write the minimizer as n,phi_n");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  Report report;
  try {
    if (weight_cmd->parsed()) {
      report = cmd_weight(g, weight);
    } else if (series_cmd->parsed()) {
      report = cmd_series(g, series);
    } else if (verify_cmd->parsed()) {
      report = cmd_verify(g, verify);
    } else if (lemmas_cmd->parsed()) {
      report = cmd_lemmas(g, lemmas);
    } else {
      report = cmd_rayleigh(g, rayleigh);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PrecisionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }

  if (g.out_path.empty()) {
    out << report.text;
  } else {
    std::ofstream file(g.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << g.out_path << "\n";
      return kExitUsage;
    }
    file << report.text;
  }
  return report.exit_code;
}

} // namespace hardy::cli
