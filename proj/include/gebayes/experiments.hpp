#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gebayes/bayes.hpp"
#include "gebayes/config.hpp"
#include "gebayes/metrics.hpp"
#include "gebayes/rulebase.hpp"

namespace gebayes {

// Command-line level options; everything else lives in the key-value
// config resolved per experiment.
struct ExperimentOptions {
  std::string experiment;  // linear | advection | emissions | powerplant
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "runs";
  bool published_scale = false;   // restore the published sampler settings
  bool balance = false;       // powerplant: also run the upsampled variant
};

// Writes through a temp file in the same directory, then renames, so a
// crashed run never leaves a partially written output.
void atomic_write(const std::string& path, const std::string& content);

// Built-in defaults for the named experiment, overlaid with the config
// file (when given), the published-scale sampler settings, and the explicit
// seed, in that order.
KeyValueConfig resolve_config(const ExperimentOptions& opt);

struct RuleCandidate {
  std::string label;  // rule-set tag, e.g. a feature name
  double cost = 0.0;  // evolution cost of the winning expression
  std::string expression;
  RuleBase rulebase;
  std::string file;  // path the rule set was written to
};

// First stage: evolve rule candidates from the experiment's grammar and
// cost function, one per rule-set label, and write them under out_dir.
std::vector<RuleCandidate> run_evolve(const KeyValueConfig& cfg,
                                      const std::string& out_dir);

struct FitOutcome {
  std::string variant;  // "none" or a rule-set label
  Trace trace;
  std::vector<double> map;
  MetricsReport metrics;
  RocResult roc;  // classification experiments only
  std::vector<std::string> files;
};

// Second stage: build the log-posterior (likelihood + prior + optional
// rule penalty), sample it, and write trace/summary/metrics files.
// `variant` selects the rule set: "none" disables the penalty, any other
// label reads out_dir/rules_<label>.txt (override with rules.file).
FitOutcome run_fit(const KeyValueConfig& cfg, const std::string& out_dir,
                   const std::string& variant);

// Recomputes and renders the metrics of an existing fit from its trace
// files, without re-sampling.
MetricsReport run_metrics(const KeyValueConfig& cfg,
                          const std::string& out_dir,
                          const std::string& variant);

struct ReproduceOutcome {
  std::vector<RuleCandidate> candidates;
  std::map<std::string, MetricsReport> reports;  // by variant
  std::string table;  // rendered metric comparison across variants
  std::vector<std::string> files;
};

// Full pipeline: data, rule evolution, fits with and without rules, and a
// comparison table across the experiment's model variants.
ReproduceOutcome run_reproduce(const KeyValueConfig& cfg,
                               const std::string& out_dir,
                               bool balance = false);

}  // namespace gebayes
