#include "fidcoh/verify.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "fidcoh/channels.hpp"
#include "fidcoh/io.hpp"
#include "fidcoh/measures.hpp"

namespace fidcoh {

namespace {

using io::Json;

constexpr double kMinCoherence = 1e-3;   // off-diagonal mass of C1's coherent samples
constexpr double kL1RelationTol = 1e-12;
constexpr double kRoofMatchTol = 1e-4;
constexpr double kRoofUndershootTol = 1e-9;
constexpr int kMaxKraus = 4;

struct TrialResult {
  double excess;
  Json inputs;
};

DensityMatrix random_state(int dim, Rng& rng) {
  return random_density(dim, 1 + rng.index(dim), rng);
}

double coherence_score(const DensityMatrix& rho, Seed seed) {
  if (rho.dim() == 2) return c_f_qubit(rho);
  RoofConfig cfg;
  cfg.seed = seed;
  return c_f_roof_estimate(rho, cfg).value;
}

TrialResult c1_trial(int dim, Seed seed, double tol) {
  Rng rng(seed);
  const DensityMatrix incoherent = random_incoherent(dim, rng);
  DensityMatrix coherent = random_state(dim, rng);
  while (c_l1(coherent) < kMinCoherence) coherent = random_state(dim, rng);
  const double zero_side = coherence_score(incoherent, derive_seed(seed, 1));
  const double positive_side = coherence_score(coherent, derive_seed(seed, 2));
  return {std::max(zero_side - tol, tol - positive_side),
          {{"incoherent", io::to_json(incoherent)},
           {"coherent", io::to_json(coherent)},
           {"incoherent_score", zero_side},
           {"coherent_score", positive_side}}};
}

TrialResult c3_trial(Seed seed, double tol) {
  Rng rng(seed);
  const DensityMatrix rho = random_state(2, rng);
  const IncoherentChannel channel = random_incoherent_channel(2, 1 + rng.index(kMaxKraus), rng);
  const SelectiveMeasurement m = selective_outcomes(channel, rho);
  double average = 0.0;
  for (const auto& o : m.outcomes) average += o.probability * c_f_qubit(o.post_state);
  const double before = c_f_qubit(rho);
  return {average - before - tol,
          {{"state", io::to_json(rho)},
           {"channel", io::channel_to_json(channel.kraus())},
           {"cf_state", before},
           {"cf_average_outcome", average}}};
}

TrialResult c4_trial(Seed seed, double tol) {
  Rng rng(seed);
  const DensityMatrix a = random_state(2, rng);
  const DensityMatrix b = random_state(2, rng);
  const double lambda = rng.uniform();
  const DensityMatrix mixed(lambda * a.matrix() + (1.0 - lambda) * b.matrix());
  const double lhs = c_f_qubit(mixed);
  const double rhs = lambda * c_f_qubit(a) + (1.0 - lambda) * c_f_qubit(b);
  return {lhs - rhs - tol,
          {{"rho1", io::to_json(a)}, {"rho2", io::to_json(b)}, {"lambda", lambda}, {"cf_mixture", lhs},
           {"cf_average", rhs}}};
}

TrialResult l1_trial(Seed seed, double tol) {
  Rng rng(seed);
  const DensityMatrix rho = random_state(2, rng);
  const double closed = c_f_qubit(rho);
  const double via_l1 = f_of(c_l1(rho) / 2.0);
  return {std::abs(closed - via_l1) - std::min(tol, kL1RelationTol),
          {{"state", io::to_json(rho)}, {"cf_qubit", closed}, {"f_of_l1", via_l1}}};
}

TrialResult roof_trial(Seed seed) {
  Rng rng(seed);
  const DensityMatrix rho = random_state(2, rng);
  RoofConfig cfg;
  cfg.seed = derive_seed(seed, 1);
  const double estimate = c_f_roof_estimate(rho, cfg).value;
  const double closed = c_f_qubit(rho);
  return {std::max(std::abs(estimate - closed) - kRoofMatchTol, closed - estimate - kRoofUndershootTol),
          {{"state", io::to_json(rho)}, {"roof_estimate", estimate}, {"cf_qubit", closed}}};
}

TrialResult run_trial(Suite suite, int dim, Seed seed, double tol) {
  switch (suite) {
    case Suite::C1: return c1_trial(dim, seed, tol);
    case Suite::C3: return c3_trial(seed, tol);
    case Suite::C4: return c4_trial(seed, tol);
    case Suite::L1Relation: return l1_trial(seed, tol);
    case Suite::RoofOracle: return roof_trial(seed);
    case Suite::All: break;
  }
  throw UnsupportedSuite("replay needs a single suite, not ALL");
}

void check_config(Suite suite, const SuiteConfig& cfg) {
  if (cfg.trials < 1) throw UnsupportedSuite("trials must be >= 1");
  if (cfg.dim < 2) throw UnsupportedSuite("dim must be >= 2");
  if (suite != Suite::C1 && suite != Suite::All && cfg.dim != 2) {
    throw UnsupportedSuite(std::string(suite_name(suite)) +
                           " suite requires dim 2: C_F is only known exactly for qubits, and the roof "
                           "estimator's upper bound cannot certify inequalities in higher dimension");
  }
}

// Trials are independent; workers take interleaved indices and the results
// land in trial order, so the report is the same for any thread count.
std::vector<TrialResult> run_trials(Suite suite, const SuiteConfig& cfg) {
  std::vector<TrialResult> results(cfg.trials);
  const auto work = [&](int first, int stride) {
    for (int t = first; t < cfg.trials; t += stride)
      results[t] = run_trial(suite, cfg.dim, trial_seed(cfg.seed, t), cfg.tolerance);
  };
  const int workers =
      static_cast<int>(std::clamp<unsigned>(std::thread::hardware_concurrency(), 1u, 16u));
  if (workers == 1 || cfg.trials < 64) {
    work(0, 1);
    return results;
  }
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  pool.clear();
  return results;
}

VerificationReport run_single(Suite suite, const SuiteConfig& cfg) {
  check_config(suite, cfg);
  std::vector<TrialResult> results = run_trials(suite, cfg);
  VerificationReport report;
  report.suite = suite;
  report.trials_run = cfg.trials;
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < cfg.trials; ++t) {
    const double excess = results[t].excess;
    report.max_violation = std::max(report.max_violation, excess);
    if (excess > 0.0 || std::isnan(excess)) {
      report.violations.push_back({suite, t, trial_seed(cfg.seed, t), excess, results[t].inputs.dump()});
    }
  }
  report.passed = report.violations.empty();
  return report;
}

const std::array<Suite, 5> kAllSuites{Suite::C1, Suite::C3, Suite::C4, Suite::L1Relation, Suite::RoofOracle};

Json report_json(const VerificationReport& r, bool include_inputs) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    Json entry = {{"seed", v.seed.value}, {"magnitude", v.magnitude}, {"trial", v.trial},
                  {"suite", std::string(suite_name(v.suite))}};
    if (include_inputs) entry["inputs"] = Json::parse(v.inputs);
    violations.push_back(std::move(entry));
  }
  Json out = {{"suite", std::string(suite_name(r.suite))},
              {"trials_run", r.trials_run},
              {"max_violation", r.max_violation},
              {"passed", r.passed},
              {"violations", std::move(violations)}};
  if (!r.parts.empty()) {
    Json parts = Json::array();
    for (const auto& p : r.parts) parts.push_back(report_json(p, include_inputs));
    out["parts"] = std::move(parts);
  }
  return out;
}

}  // namespace

std::string_view suite_name(Suite s) {
  switch (s) {
    case Suite::C1: return "C1";
    case Suite::C3: return "C3";
    case Suite::C4: return "C4";
    case Suite::L1Relation: return "L1_RELATION";
    case Suite::RoofOracle: return "ROOF_ORACLE";
    case Suite::All: return "ALL";
  }
  return "?";
}

std::optional<Suite> parse_suite(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "c1") return Suite::C1;
  if (lower == "c3") return Suite::C3;
  if (lower == "c4") return Suite::C4;
  if (lower == "l1" || lower == "l1_relation") return Suite::L1Relation;
  if (lower == "roof" || lower == "roof_oracle") return Suite::RoofOracle;
  if (lower == "all") return Suite::All;
  return std::nullopt;
}

Seed trial_seed(Seed suite_seed, int index) {
  return derive_seed(suite_seed, static_cast<std::uint64_t>(index));
}

double replay_trial(Suite suite, int dim, Seed seed, double tolerance) {
  return run_trial(suite, dim, seed, tolerance).excess;
}

VerificationReport run_c1_suite(const SuiteConfig& cfg) { return run_single(Suite::C1, cfg); }
VerificationReport run_c3_suite(const SuiteConfig& cfg) { return run_single(Suite::C3, cfg); }
VerificationReport run_c4_suite(const SuiteConfig& cfg) { return run_single(Suite::C4, cfg); }
VerificationReport run_l1_relation_suite(const SuiteConfig& cfg) { return run_single(Suite::L1Relation, cfg); }
VerificationReport run_roof_oracle_suite(const SuiteConfig& cfg) { return run_single(Suite::RoofOracle, cfg); }

VerificationReport run_suite(const SuiteConfig& cfg) {
  if (cfg.suite != Suite::All) return run_single(cfg.suite, cfg);
  check_config(Suite::All, cfg);
  if (cfg.dim != 2) throw UnsupportedSuite("ALL includes the qubit-only suites and requires dim 2");

  VerificationReport all;
  all.suite = Suite::All;
  all.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kAllSuites.size(); ++k) {
    SuiteConfig part_cfg = cfg;
    part_cfg.suite = kAllSuites[k];
    part_cfg.seed = derive_seed(cfg.seed, 0x5017e000u + k);
    VerificationReport part = run_single(kAllSuites[k], part_cfg);
    all.trials_run += part.trials_run;
    all.max_violation = std::max(all.max_violation, part.max_violation);
    all.violations.insert(all.violations.end(), part.violations.begin(), part.violations.end());
    all.parts.push_back(std::move(part));
  }
  all.passed = all.violations.empty();
  return all;
}

std::string VerificationReport::to_json(bool include_inputs) const {
  return report_json(*this, include_inputs).dump(2);
}

std::string VerificationReport::summary() const {
  std::ostringstream os;
  os.precision(6);
  os << suite_name(suite) << ": " << (passed ? "passed" : "FAILED") << " (" << trials_run
     << " trials, max excess " << max_violation << ", " << violations.size() << " violations)";
  for (const auto& p : parts) os << "\n  " << p.summary();
  if (!passed) {
    const std::size_t shown = std::min<std::size_t>(violations.size(), 5);
    for (std::size_t i = 0; i < shown; ++i) {
      os << "\n  violation: suite " << suite_name(violations[i].suite) << " trial " << violations[i].trial
         << " seed " << violations[i].seed.value << " magnitude " << violations[i].magnitude;
    }
  }
  return os.str();
}

}  // namespace fidcoh
