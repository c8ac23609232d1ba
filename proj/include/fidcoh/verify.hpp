#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fidcoh/core.hpp"
#include "fidcoh/rng.hpp"

namespace fidcoh {

enum class Suite { C1, C3, C4, L1Relation, RoofOracle, All };

std::string_view suite_name(Suite s);
/// Accepts c1, c3, c4, l1, roof, all (case-insensitive) and the enum spellings.
std::optional<Suite> parse_suite(std::string_view text);

struct SuiteConfig {
  Suite suite = Suite::All;
  int trials = 10000;
  int dim = 2;
  Seed seed{};
  double tolerance = 1e-9;
};

/// Requested suite cannot run with this configuration (e.g. C3 on dim 3).
class UnsupportedSuite : public Error {
 public:
  using Error::Error;
};

struct Violation {
  Suite suite = Suite::All;
  int trial;
  Seed seed;          // trial seed; replay_trial reproduces the magnitude from it
  double magnitude;   // excess beyond the allowed bound (> 0)
  std::string inputs; // JSON of the states/channel involved
};

struct VerificationReport {
  Suite suite = Suite::All;
  int trials_run = 0;
  std::vector<Violation> violations;
  /// Largest excess over all trials; ≤ 0 exactly when the suite passed.
  double max_violation = 0.0;
  bool passed = true;
  std::vector<VerificationReport> parts;  // per-suite reports for Suite::All

  std::string to_json(bool include_inputs = false) const;
  std::string summary() const;
};

/// Seed of trial `index` in a run seeded with `suite_seed`.
Seed trial_seed(Seed suite_seed, int index);

/// Excess of a single trial (> 0 is a violation). Suites are built from this,
/// so a recorded violation replays exactly.
double replay_trial(Suite suite, int dim, Seed seed, double tolerance);

VerificationReport run_c1_suite(const SuiteConfig& cfg);
VerificationReport run_c3_suite(const SuiteConfig& cfg);
VerificationReport run_c4_suite(const SuiteConfig& cfg);
VerificationReport run_l1_relation_suite(const SuiteConfig& cfg);
VerificationReport run_roof_oracle_suite(const SuiteConfig& cfg);
/// Dispatches on cfg.suite; Suite::All runs the five suites and passes iff all do.
VerificationReport run_suite(const SuiteConfig& cfg);

}  // namespace fidcoh
