#include "delgame/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace delgame {

namespace {

constexpr long kBatchSize = 8192;

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Complex int_pow(Complex z, long n) {
  Complex acc = 1.0;
  while (n > 0) {
    if (n & 1) acc *= z;
    z *= z;
    n >>= 1;
  }
  return acc;
}

// Transformed-rejection Poisson sampler for large means (valid for mean >= 10).
long poisson_ptrs(RngStream& rng, double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const long k = static_cast<long>(std::floor((2.0 * a / us + b) * u + mean + 0.43));
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        k * loglam - mean - std::lgamma(static_cast<double>(k) + 1.0))
      return k;
  }
}

}  // namespace

RngStream::RngStream(std::uint64_t state) : eng_(state) {}

RngStream RngStream::child(std::uint64_t seed, std::uint64_t index) {
  return RngStream(splitmix(splitmix(seed) ^ splitmix(index * 0xA24BAED4963EE407ull + 1)));
}

double RngStream::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double RngStream::exponential(double rate) {
  return -std::log1p(-uniform()) / rate;
}

long RngStream::poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean <= 10.0) {
    // inversion by sequential search
    double p = std::exp(-mean);
    double cum = p;
    const double u = uniform();
    long k = 0;
    while (u > cum && k < 4000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cum += p;
    }
    return k;
  }
  return poisson_ptrs(*this, mean);
}

namespace {

double sample_delta(const DeltaLaw& law, RngStream& rng) {
  switch (law.kind) {
    case DeltaKind::Exponential:
      return rng.exponential(law.rate);
    case DeltaKind::Deterministic:
      return law.spacing;
    case DeltaKind::Erlang: {
      double acc = 0.0;
      for (int i = 0; i < law.shape; ++i) acc += rng.exponential(law.rate);
      return acc;
    }
  }
  return 0.0;
}

}  // namespace

PathOutcome simulate_path(const GameParams& p, RngStream& rng, SimMode mode,
                          bool keep_increments, long max_observations) {
  PathOutcome out;
  long a = 0, b = 0;
  double tau = 0.0;
  long nu1 = -1, nu2 = -1;
  // event-mode attack streams (times of the next pending attack)
  double next_a = 0.0, next_b = 0.0;
  if (mode == SimMode::Event) {
    next_a = rng.exponential(p.lambda);
    next_b = rng.exponential(p.mu);
  }

  for (long i = 1; nu1 < 0 || nu2 < 0; ++i) {
    if (i > max_observations)
      fail(ErrorCode::MaxObservationsExceeded,
           "no crossing within the observation cap");
    const double prev_tau = tau;
    const long prev_a = a, prev_b = b;
    const double dt = sample_delta(p.delta, rng);
    tau += dt;
    long x = 0, y = 0;
    if (mode == SimMode::Interval) {
      x = rng.poisson(p.lambda * dt);
      y = rng.poisson(p.mu * dt);
    } else {
      while (next_a <= tau) {
        ++x;
        next_a += rng.exponential(p.lambda);
      }
      while (next_b <= tau) {
        ++y;
        next_b += rng.exponential(p.mu);
      }
    }
    a += x;
    b += y;
    if (keep_increments) {
      if (out.x_increments.empty()) {  // index 0 carries the zero start
        out.x_increments.push_back(0);
        out.y_increments.push_back(0);
      }
      out.x_increments.push_back(x);
      out.y_increments.push_back(y);
    }
    if (nu1 < 0 && a >= p.threshold_a) nu1 = i;
    if (nu2 < 0 && b >= p.threshold_b) nu2 = i;
    if (out.rho == 0 && (nu1 >= 0 || nu2 >= 0)) {
      // i == rho = min(nu1, nu2): freeze terminal and pre-exit state; the
      // loop keeps running only to realize the other exit index.
      out.rho = i;
      out.tau_rho = tau;
      out.a_rho = a;
      out.b_rho = b;
      out.tau_pre = prev_tau;
      out.a_pre = prev_a;
      out.b_pre = prev_b;
    }
  }
  out.nu1 = nu1;
  out.nu2 = nu2;
  return out;
}

namespace {

struct BatchAccum {
  std::vector<Complex> fn_sum;
  std::vector<double> fn_sumsq;  // sum of |value|^2
  std::vector<long> count_a, count_b;
  std::vector<double> tau;
  long wins_a = 0, wins_b = 0, wins_tie = 0;
  double tau_sum = 0.0, tau_sumsq = 0.0;

  explicit BatchAccum(size_t n_queries)
      : fn_sum(n_queries, Complex(0.0)), fn_sumsq(n_queries, 0.0) {}

  void add(const PathOutcome& o, const std::vector<TransformQuery>& queries) {
    for (size_t qi = 0; qi < queries.size(); ++qi) {
      const auto& q = queries[qi];
      const Complex val = int_pow(q.u, o.a_rho) * int_pow(q.v, o.b_rho) *
                          std::exp(-q.theta * o.tau_rho);
      fn_sum[qi] += val;
      fn_sumsq[qi] += std::norm(val);
    }
    auto bump = [](std::vector<long>& c, long k) {
      if (k >= static_cast<long>(c.size())) c.resize(static_cast<size_t>(k) + 1, 0);
      ++c[static_cast<size_t>(k)];
    };
    bump(count_a, o.a_rho);
    bump(count_b, o.b_rho);
    tau.push_back(o.tau_rho);
    tau_sum += o.tau_rho;
    tau_sumsq += o.tau_rho * o.tau_rho;
    if (o.nu1 < o.nu2)
      ++wins_a;
    else if (o.nu2 < o.nu1)
      ++wins_b;
    else
      ++wins_tie;
  }
};

DistributionTable counts_to_pmf(const std::vector<long>& counts, long n) {
  DistributionTable t;
  t.kind = DistributionTable::Kind::Pmf;
  t.empirical = true;
  t.support.resize(counts.size());
  t.values.resize(counts.size());
  t.stderrs.resize(counts.size());
  for (size_t k = 0; k < counts.size(); ++k) {
    const double p = static_cast<double>(counts[k]) / static_cast<double>(n);
    t.support[k] = static_cast<double>(k);
    t.values[k] = p;
    t.stderrs[k] = std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(n)));
  }
  return t;
}

Histogram make_histogram(std::vector<double> samples) {
  Histogram h;
  if (samples.empty()) return h;
  std::sort(samples.begin(), samples.end());
  const size_t n = samples.size();
  const double q1 = samples[n / 4];
  const double q3 = samples[(3 * n) / 4];
  const double iqr = std::max(q3 - q1, 1e-12);
  h.bin_width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
  h.lo = samples.front();
  const double hi = samples.back();
  size_t bins = static_cast<size_t>(std::ceil((hi - h.lo) / h.bin_width)) + 1;
  bins = std::min<size_t>(std::max<size_t>(bins, 1), 100000);
  h.counts.assign(bins, 0);
  for (double s : samples) {
    auto b = static_cast<size_t>((s - h.lo) / h.bin_width);
    if (b >= bins) b = bins - 1;
    ++h.counts[b];
  }
  return h;
}

}  // namespace

SimSummary simulate_batch(const GameParams& p, const SimConfig& config) {
  if (config.n_paths < 1)
    fail(ErrorCode::InvalidArgument, "n_paths must be >= 1");
  const long n_batches = (config.n_paths + kBatchSize - 1) / kBatchSize;
  std::vector<BatchAccum> batches(static_cast<size_t>(n_batches),
                                  BatchAccum(config.query_points.size()));

  std::atomic<long> next{0};
  auto worker = [&] {
    for (;;) {
      const long b = next.fetch_add(1);
      if (b >= n_batches) return;
      RngStream rng = RngStream::child(config.seed, static_cast<std::uint64_t>(b));
      const long lo = b * kBatchSize;
      const long hi = std::min(lo + kBatchSize, config.n_paths);
      auto& acc = batches[static_cast<size_t>(b)];
      acc.tau.reserve(static_cast<size_t>(hi - lo));
      for (long i = lo; i < hi; ++i) {
        const PathOutcome o =
            simulate_path(p, rng, config.mode, false, config.max_observations);
        acc.add(o, config.query_points);
      }
    }
  };

  int n_threads = config.n_threads > 0
                      ? config.n_threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(n_batches)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // merge in batch order: results do not depend on the worker count
  SimSummary s;
  s.n_paths = config.n_paths;
  s.seed = config.seed;
  s.mode = config.mode;
  const size_t nq = config.query_points.size();
  std::vector<Complex> fn_sum(nq, Complex(0.0));
  std::vector<double> fn_sumsq(nq, 0.0);
  std::vector<long> count_a, count_b;
  double tau_sum = 0.0, tau_sumsq = 0.0;
  s.tau_samples.reserve(static_cast<size_t>(config.n_paths));
  for (const auto& acc : batches) {
    for (size_t qi = 0; qi < nq; ++qi) {
      fn_sum[qi] += acc.fn_sum[qi];
      fn_sumsq[qi] += acc.fn_sumsq[qi];
    }
    auto merge_counts = [](std::vector<long>& into, const std::vector<long>& from) {
      if (from.size() > into.size()) into.resize(from.size(), 0);
      for (size_t k = 0; k < from.size(); ++k) into[k] += from[k];
    };
    merge_counts(count_a, acc.count_a);
    merge_counts(count_b, acc.count_b);
    s.tau_samples.insert(s.tau_samples.end(), acc.tau.begin(), acc.tau.end());
    tau_sum += acc.tau_sum;
    tau_sumsq += acc.tau_sumsq;
    s.wins_a_defeated += acc.wins_a;
    s.wins_b_defeated += acc.wins_b;
    s.wins_simultaneous += acc.wins_tie;
  }

  const double n = static_cast<double>(config.n_paths);
  for (size_t qi = 0; qi < nq; ++qi) {
    FunctionalEstimate est;
    est.u = config.query_points[qi].u;
    est.v = config.query_points[qi].v;
    est.theta = config.query_points[qi].theta;
    est.mean = fn_sum[qi] / n;
    const double var =
        n > 1 ? std::max(0.0, (fn_sumsq[qi] - n * std::norm(est.mean)) / (n - 1.0))
              : 0.0;
    est.stderr_est = std::sqrt(var / n);
    s.functional_estimates.push_back(est);
  }
  s.pmf_a = counts_to_pmf(count_a, config.n_paths);
  s.pmf_b = counts_to_pmf(count_b, config.n_paths);
  s.tau_mean = tau_sum / n;
  const double tau_var =
      n > 1 ? std::max(0.0, (tau_sumsq - n * s.tau_mean * s.tau_mean) / (n - 1.0)) : 0.0;
  s.tau_stderr = std::sqrt(tau_var / n);
  s.tau_hist = make_histogram(s.tau_samples);
  return s;
}

EmpiricalDistributions empirical_distributions(std::span<const PathOutcome> outcomes) {
  if (outcomes.empty())
    fail(ErrorCode::InvalidArgument, "need at least one outcome");
  EmpiricalDistributions e;
  std::vector<long> count_a, count_b;
  std::vector<double> tau;
  tau.reserve(outcomes.size());
  auto bump = [](std::vector<long>& c, long k) {
    if (k >= static_cast<long>(c.size())) c.resize(static_cast<size_t>(k) + 1, 0);
    ++c[static_cast<size_t>(k)];
  };
  for (const auto& o : outcomes) {
    bump(count_a, o.a_rho);
    bump(count_b, o.b_rho);
    tau.push_back(o.tau_rho);
  }
  const long n = static_cast<long>(outcomes.size());
  e.pmf_a = counts_to_pmf(count_a, n);
  e.pmf_b = counts_to_pmf(count_b, n);
  e.tau_hist = make_histogram(std::move(tau));
  return e;
}

}  // namespace delgame
