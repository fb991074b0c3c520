#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "delgame/params.hpp"

namespace delgame {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationOptions {
  long n_paths = 1'000'000;
  std::uint64_t seed = 7;
  int n_threads = 0;
};

/// Runs the full cross-validation suite (analytic identities, operator
/// closed forms, transform inversion, and Monte Carlo concordance) against
/// the given base parameter set. Sub-sweeps use fixed internal seeds, so the
/// report is reproducible for identical inputs.
std::vector<CheckResult> run_validation(const GameParams& base,
                                        const ValidationOptions& opt = {});

bool all_passed(const std::vector<CheckResult>& results);

/// Stable-key-order JSON rendering of a report.
std::string validation_to_json(const std::vector<CheckResult>& results);

}  // namespace delgame
