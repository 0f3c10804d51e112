#pragma once

// Experiment execution and the acceptance suite.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "stratwave/config.hpp"

namespace stratwave {

struct ExperimentOutcome {
  json report;
  bool passed = false;
};

/// Runs a parsed experiment; the report holds every fitted number and the verdict.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

struct CriterionResult {
  std::string id;
  std::string status;  // pass | fail | error | skipped
  std::string measured;
  std::string expected;
  double seconds = 0.0;
  json detail = json::object();
};

/// Criterion identifiers in suite order.
const std::vector<std::string>& criterion_ids();
bool is_known_criterion(const std::string& id);

CriterionResult run_criterion(const std::string& id);

struct AcceptanceSummary {
  std::vector<CriterionResult> results;
  double seconds = 0.0;
  bool all_passed() const;
};

/// Runs the criteria on a bounded pool of `threads` workers; unknown ids are
/// reported as skipped. `progress` (may be empty) is called as each finishes.
AcceptanceSummary run_acceptance(const std::vector<std::string>& ids, unsigned threads,
                                 const std::function<void(const CriterionResult&)>& progress = {});

/// Suite file: {"criteria": ["K-MASS", ...]} or one id per line ('#' comments).
std::vector<std::string> read_suite(const std::string& path);

std::string format_row(const CriterionResult& r);
std::string format_table(const AcceptanceSummary& s);
json summary_to_json(const AcceptanceSummary& s);

}  // namespace stratwave
