#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "delgame/game.hpp"
#include "delgame/inversion.hpp"
#include "delgame/params.hpp"

namespace delgame {

/// Deterministic random stream. Child streams are derived by hashing
/// (seed, index), so batch b always sees the same draws no matter how many
/// workers run; the engine itself is the fully specified std::mt19937_64.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state);
  static RngStream child(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return eng_(); }
  double uniform();  // [0, 1)
  double exponential(double rate);
  long poisson(double mean);

 private:
  std::mt19937_64 eng_;
};

enum class SimMode { Interval, Event };

struct SimConfig {
  long n_paths = 100000;
  std::uint64_t seed = 1;
  SimMode mode = SimMode::Interval;
  long max_observations = 10'000'000;
  std::vector<TransformQuery> query_points;
  int n_threads = 0;  // 0 = hardware concurrency
};

/// Runs one game to completion. The path is extended past the end of the
/// game until both thresholds have crossed, so nu1 and nu2 are both realized;
/// terminal statistics are taken at rho = min(nu1, nu2).
PathOutcome simulate_path(const GameParams& p, RngStream& rng,
                          SimMode mode = SimMode::Interval,
                          bool keep_increments = false,
                          long max_observations = 10'000'000);

struct FunctionalEstimate {
  Complex u, v, theta;
  Complex mean;
  double stderr_est = 0.0;
};

struct Histogram {
  double bin_width = 0.0;  // Freedman-Diaconis
  double lo = 0.0;
  std::vector<long> counts;
};

struct SimSummary {
  long n_paths = 0;
  std::uint64_t seed = 0;
  SimMode mode = SimMode::Interval;
  std::vector<FunctionalEstimate> functional_estimates;
  DistributionTable pmf_a, pmf_b;
  std::vector<double> tau_samples;  // batch order; not serialized
  Histogram tau_hist;
  long wins_a_defeated = 0;   // nu1 < nu2
  long wins_b_defeated = 0;   // nu2 < nu1
  long wins_simultaneous = 0; // nu1 == nu2
  double tau_mean = 0.0;
  double tau_stderr = 0.0;
};

/// Batch-parallel simulation with a deterministic merge: identical
/// (params, config) always produce bit-identical summaries, independent of
/// the worker count.
SimSummary simulate_batch(const GameParams& p, const SimConfig& config);

/// Frequency tables with per-bin standard errors plus a Freedman-Diaconis
/// histogram of the observed ruin times.
struct EmpiricalDistributions {
  DistributionTable pmf_a, pmf_b;
  Histogram tau_hist;
};
EmpiricalDistributions empirical_distributions(std::span<const PathOutcome> outcomes);

/// Stable-key-order JSON rendering of a summary (tau samples omitted).
std::string summary_to_json(const SimSummary& s, const GameParams& p);

}  // namespace delgame
