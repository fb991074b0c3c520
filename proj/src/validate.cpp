#include "delgame/validate.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <optional>

#include "delgame/inversion.hpp"
#include "delgame/series.hpp"
#include "delgame/simulate.hpp"
#include "delgame/stats.hpp"
#include "delgame/transforms.hpp"

namespace delgame {

namespace {

std::string strfmt(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

Complex random_disc(RngStream& rng, double max_radius) {
  const double r = max_radius * std::sqrt(rng.uniform());
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  return std::polar(r, phi);
}

GameParams random_params(RngStream& rng, long max_threshold) {
  RawParams raw;
  raw.lambda = 0.1 + 4.9 * rng.uniform();
  raw.mu = 0.1 + 4.9 * rng.uniform();
  raw.delta = DeltaLaw::exponential(0.2 + 7.8 * rng.uniform());
  raw.threshold_a = 1.0 + std::floor(rng.uniform() * static_cast<double>(max_threshold));
  raw.threshold_b = 1.0 + std::floor(rng.uniform() * static_cast<double>(max_threshold));
  return validate_params(raw);
}

std::vector<TransformQuery> reference_grid() {
  std::vector<TransformQuery> grid;
  for (double u : {0.5, 0.8, 1.0})
    for (double v : {0.5, 0.8, 1.0})
      for (double theta : {0.0, 0.5, 1.0}) grid.emplace_back(u, v, theta);
  return grid;
}

CheckResult guard(int id, const std::string& name,
                  const std::function<CheckResult()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {id, name, false, std::string("error: ") + e.what()};
  }
}

// --- check 1: Phi(1,1,0) == 1 over a random parameter sweep ----------------

CheckResult check_normalization() {
  return guard(1, "normalization-sweep", [] {
    RngStream rng(0x6e0a11ce);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const GameParams p = random_params(rng, 10);
      const Complex value = phi_closed(p, TransformQuery(1.0, 1.0, 0.0));
      worst = std::max(worst, std::abs(value - 1.0));
    }
    return CheckResult{1, "normalization-sweep", worst <= 1e-12,
                       strfmt("max |Phi(1,1,0)-1| = %.3e over 100 parameter sets "
                              "(tol 1e-12)",
                              worst)};
  });
}

// --- check 2: closed form vs operator route --------------------------------

CheckResult check_dual_path() {
  return guard(2, "phi-dual-path-consistency", [] {
    RngStream rng(0x2fa57a11);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const GameParams p = random_params(rng, 8);
      const TransformQuery q(random_disc(rng, 1.0), random_disc(rng, 1.0),
                             Complex(3.0 * rng.uniform(), 6.0 * rng.uniform() - 3.0));
      const Complex closed = phi_closed(p, q);
      const Complex viaop = phi_operator(p, q);
      const double denom = std::max(std::abs(closed), std::abs(viaop));
      if (denom > 0.0) worst = std::max(worst, std::abs(closed - viaop) / denom);
    }
    return CheckResult{2, "phi-dual-path-consistency", worst <= 1e-9,
                       strfmt("max relative gap closed vs operator = %.3e over "
                              "100 draws (tol 1e-9)",
                              worst)};
  });
}

// --- check 3: operator closed forms vs series-arithmetic oracle ------------

CheckResult check_operator_forms() {
  return guard(3, "d-operator-closed-forms", [] {
    RngStream rng(0xd0b5eed5);
    double worst = 0.0;
    auto track = [&](Complex got, Complex want) {
      worst = std::max(worst,
                       std::abs(got - want) / std::max(1.0, std::abs(want)));
    };

    auto geometric_series = [](Complex b, int k) {
      BivariateSeries lin = BivariateSeries::constant(1.0, k, 0);
      if (k >= 1) lin.at(1, 0) = -b;
      return lin.reciprocal();
    };

    for (int rep = 0; rep < 60; ++rep) {
      const long k = static_cast<long>(rng.uniform() * 21.0);
      const int n = 1 + static_cast<int>(rng.uniform() * 10.0);
      Complex a = random_disc(rng, 0.95);
      Complex b = random_disc(rng, 0.95);
      // hit the removable-singularity window on a slice of the draws
      if (rep % 6 == 4) b = 1.0 + 1e-10 * random_disc(rng, 1.0);
      if (rep % 6 == 5) b = 1.0;

      const auto geo = geometric_series(b, static_cast<int>(k));
      const auto pow = geometric_series(a, static_cast<int>(k)).pow_trunc(n);
      track(d_op_geometric(k, b), d_op_from_series(geo, k, 0));
      track(d_op_power(k, a, n), d_op_from_series(pow, k, 0));
      track(d_op_product(k, a, b, n), d_op_from_series(geo * pow, k, 0));
      if (std::abs(b) > 1e-14)
        track(d_op_product(k, a, b, a / b, n), d_op_from_series(geo * pow, k, 0));

      // shift property: D^k{x^j g} = D^{k-j}{g} (0 for j > k)
      BivariateSeries g(static_cast<int>(k), 0);
      for (int i = 0; i <= k; ++i) g.at(i, 0) = random_disc(rng, 1.0);
      const long j = static_cast<long>(rng.uniform() * (k + 2.0));
      BivariateSeries shifted(static_cast<int>(k), 0);
      for (long i = j; i <= k; ++i)
        shifted.at(static_cast<int>(i), 0) = g.at(static_cast<int>(i - j), 0);
      track(d_op_from_series(shifted, k, 0),
            j <= k ? d_op_from_series(g, k - j, 0) : Complex(0.0));
    }
    return CheckResult{3, "d-operator-closed-forms", worst <= 1e-10,
                       strfmt("max relative gap closed forms vs coefficient "
                              "sums = %.3e (tol 1e-10)",
                              worst)};
  });
}

// --- check 4: Monte Carlo concordance + deterministic rerun ----------------

struct SharedSim {
  SimSummary first;
  std::string first_json, rerun_json;
  double seconds = 0.0;
};

std::optional<SharedSim> run_shared_sim(const GameParams& base,
                                        const ValidationOptions& opt) {
  if (!base.closed_form_capable()) return std::nullopt;
  SimConfig cfg;
  cfg.n_paths = opt.n_paths;
  cfg.seed = opt.seed;
  cfg.mode = SimMode::Interval;
  cfg.query_points = reference_grid();
  cfg.n_threads = opt.n_threads;
  const auto t0 = std::chrono::steady_clock::now();
  SharedSim shared;
  shared.first = simulate_batch(base, cfg);
  shared.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  shared.first_json = summary_to_json(shared.first, base);
  SimConfig cfg2 = cfg;
  cfg2.n_threads = 3;  // a different worker count must not change anything
  shared.rerun_json = summary_to_json(simulate_batch(base, cfg2), base);
  return shared;
}

CheckResult check_monte_carlo(const GameParams& base,
                              const std::optional<SharedSim>& shared) {
  return guard(4, "monte-carlo-concordance", [&] {
    if (!shared)
      return CheckResult{4, "monte-carlo-concordance", false,
                         "needs an exponential observation law"};
    int within = 0;
    double worst_z = 0.0;
    const auto& ests = shared->first.functional_estimates;
    for (const auto& est : ests) {
      const Complex exact =
          phi_closed(base, TransformQuery(est.u, est.v, est.theta));
      const double diff = std::abs(est.mean - exact);
      if (diff <= 3.5 * est.stderr_est + 1e-14) ++within;
      if (est.stderr_est > 0.0) worst_z = std::max(worst_z, diff / est.stderr_est);
    }
    const bool identical = shared->first_json == shared->rerun_json;
    const bool pass = within >= 25 && identical;
    return CheckResult{
        4, "monte-carlo-concordance", pass,
        strfmt("%d/%zu grid points within 3.5 stderr (need >= 25), worst z = "
               "%.2f; rerun bit-identical: %s; %.1f s for %ld paths",
               within, ests.size(), worst_z, identical ? "yes" : "NO",
               shared->seconds, shared->first.n_paths)};
  });
}

// --- check 5: exact ruin-time density --------------------------------------

CheckResult check_tau_density(const GameParams& base,
                              const std::optional<SharedSim>& shared) {
  return guard(5, "tau-density", [&] {
    if (!base.closed_form_capable())
      return CheckResult{5, "tau-density", false,
                         "needs an exponential observation law"};
    const TauDensity density(base);

    // (a) normalization by quadrature
    double t_hi = 10.0;
    while (density.cdf(t_hi) < 1.0 - 1e-9 && t_hi < 1e6) t_hi *= 2.0;
    const double integral = integrate_adaptive(
        [&](double t) { return density.pdf(t); }, 0.0, t_hi, 1e-9);
    const double norm_gap = std::abs(integral - 1.0);

    // (b) pointwise agreement with the numeric inversion oracle
    double worst_pt = 0.0;
    const auto lst = [&](Complex theta) {
      return detail::phi_closed_eval(base, 1.0, 1.0, theta);
    };
    for (int i = 0; i < 40; ++i) {
      const double t = 0.01 * std::pow(1000.0, i / 39.0);  // log grid on [0.01, 10]
      worst_pt = std::max(worst_pt,
                          std::abs(density.pdf(t) - laplace_invert_numeric(lst, t)));
    }

    // (c) KS against the simulated sample
    double ks = 0.0, ks_crit = 0.0;
    bool ks_ok = false;
    if (shared) {
      std::vector<double> sorted = shared->first.tau_samples;
      std::sort(sorted.begin(), sorted.end());
      ks = ks_statistic(sorted, [&](double t) { return density.cdf(t); });
      ks_crit = kolmogorov_critical(0.01) / std::sqrt(static_cast<double>(sorted.size()));
      ks_ok = ks <= ks_crit;
    }

    const bool pass = norm_gap <= 1e-6 && worst_pt <= 1e-6 && ks_ok;
    return CheckResult{
        5, "tau-density", pass,
        strfmt("|integral-1| = %.2e (tol 1e-6); max |pdf - numeric| = %.2e "
               "(tol 1e-6); KS = %.5f vs crit %.5f",
               norm_gap, worst_pt, ks, ks_crit)};
  });
}

// --- check 6: casualty pmfs vs simulation ----------------------------------

CheckResult check_casualty_pmfs(const GameParams& base,
                                const ValidationOptions& opt) {
  return guard(6, "casualty-pmf-concordance", [&] {
    if (!base.closed_form_capable())
      return CheckResult{6, "casualty-pmf-concordance", false,
                         "needs an exponential observation law"};
    const std::pair<long, long> configs[] = {{2, 2}, {3, 4}, {5, 2}};
    double worst_tv = 0.0, worst_sum = 0.0, worst_clip = 0.0;
    int idx = 0;
    for (const auto& [m, n] : configs) {
      GameParams p = base;
      p.threshold_a = m;
      p.threshold_b = n;
      const long max_k = m + n + 60;
      SimConfig cfg;
      cfg.n_paths = opt.n_paths;
      cfg.seed = opt.seed + 1000 + static_cast<std::uint64_t>(idx++);
      cfg.n_threads = opt.n_threads;
      const SimSummary sim = simulate_batch(p, cfg);
      for (int side = 0; side < 2; ++side) {
        const auto pgf = [&](Complex z) {
          return side == 0 ? marginal_A_pgf(p, z) : marginal_B_pgf(p, z);
        };
        const DistributionTable analytic = pgf_to_pmf(pgf, max_k);
        worst_clip = std::max(worst_clip, analytic.clipped_mass);
        worst_sum = std::max(worst_sum, std::abs(analytic.total_mass() - 1.0));
        const auto& empirical = side == 0 ? sim.pmf_a : sim.pmf_b;
        worst_tv = std::max(worst_tv,
                            total_variation(analytic.values, empirical.values));
      }
    }
    const bool pass = worst_clip <= 1e-9 && worst_sum <= 1e-9 && worst_tv <= 0.005;
    return CheckResult{
        6, "casualty-pmf-concordance", pass,
        strfmt("max clipped mass = %.1e (tol 1e-9); max |sum-1| = %.1e (tol "
               "1e-9); max TV analytic vs %ld-path empirical = %.4f (tol 0.005)",
               worst_clip, worst_sum, opt.n_paths, worst_tv)};
  });
}

// --- check 7: marginal single-sum forms vs specializations -----------------

CheckResult check_marginal_forms(const GameParams& base) {
  return guard(7, "marginal-specializations", [&] {
    if (!base.closed_form_capable())
      return CheckResult{7, "marginal-specializations", false,
                         "needs an exponential observation law"};
    RngStream rng(0x3a97ffab);
    double worst = 0.0;
    const std::pair<long, long> configs[] = {{2, 2}, {3, 4}, {5, 2}};
    for (const auto& [m, n] : configs) {
      GameParams p = base;
      p.threshold_a = m;
      p.threshold_b = n;
      for (int i = 0; i < 20; ++i) {
        const Complex theta(6.0 * rng.uniform(), i % 3 == 0 ? 2.0 * rng.uniform() : 0.0);
        const Complex u = i % 2 == 0 ? Complex(rng.uniform()) : random_disc(rng, 1.0);
        const Complex v = i % 2 == 0 ? Complex(rng.uniform()) : random_disc(rng, 1.0);
        worst = std::max(worst, std::abs(marginal_tau_lst_sum_form(p, theta) -
                                         marginal_tau_lst(p, theta)));
        worst = std::max(worst, std::abs(marginal_A_pgf_sum_form(p, u) -
                                         marginal_A_pgf(p, u)));
        worst = std::max(worst, std::abs(marginal_B_pgf_sum_form(p, v) -
                                         marginal_B_pgf(p, v)));
      }
    }
    return CheckResult{7, "marginal-specializations", worst <= 1e-10,
                       strfmt("max |sum form - specialization| = %.3e over tau/A/B "
                              "marginals (tol 1e-10)",
                              worst)};
  });
}

// --- check 8: exact rational inversion vs numeric oracle -------------------

CheckResult check_laplace_machinery() {
  return guard(8, "laplace-inversion-exact-vs-numeric", [] {
    RngStream rng(0x1a91ace5);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      double poles[3];
      for (;;) {
        for (double& x : poles) x = 0.5 + 9.5 * rng.uniform();
        const double sep = std::min({std::abs(poles[0] - poles[1]),
                                     std::abs(poles[0] - poles[2]),
                                     std::abs(poles[1] - poles[2])});
        if (sep > 0.3) break;
      }
      RationalLstTerm term;
      term.gamma_pole = poles[0];
      term.pole1 = poles[1];
      term.pole2 = poles[2];
      term.mult1 = static_cast<int>(rng.uniform() * 9.0);
      // every fourth case drops the third pole so the two-pole formula is
      // exercised against the residue path as well
      term.mult2 = rep % 4 == 0 ? 0 : static_cast<int>(rng.uniform() * 9.0);
      if (term.mult1 + term.mult2 == 0) term.mult1 = 1;
      // normalize so the inverse is density-scaled: F(0) = 1
      term.coeff = term.gamma_pole * std::pow(term.pole1, term.mult1) *
                   std::pow(term.pole2, term.mult2);
      const auto transform = [&](Complex th) {
        Complex den = (term.gamma_pole + th);
        for (int i = 0; i < term.mult1; ++i) den *= term.pole1 + th;
        for (int i = 0; i < term.mult2; ++i) den *= term.pole2 + th;
        return term.coeff / den;
      };
      for (int ti = 0; ti < 2; ++ti) {
        const double t = 0.01 + 9.99 * rng.uniform();
        const double exact = invert_rational_term(term, t);
        const double numeric = laplace_invert_numeric(transform, t);
        worst = std::max(worst, std::abs(exact - numeric));
        if (term.mult2 == 0) {
          // two-pole family must agree with the dedicated formula too
          const double two_pole = term.coeff * invert_gamma_erlang(
                                                   term.gamma_pole, term.pole1,
                                                   term.mult1, t);
          worst = std::max(worst, std::abs(exact - two_pole));
        }
      }
    }
    return CheckResult{8, "laplace-inversion-exact-vs-numeric", worst <= 1e-7,
                       strfmt("max |exact - numeric| = %.3e over 20 random pole "
                              "configurations (tol 1e-7)",
                              worst)};
  });
}

// --- check 9: interval vs event simulation modes ----------------------------

CheckResult check_mode_equivalence(const GameParams& base,
                                   const ValidationOptions& opt) {
  return guard(9, "simulator-mode-equivalence", [&] {
    SimConfig cfg;
    cfg.n_paths = std::min<long>(opt.n_paths, 100000);
    cfg.n_threads = opt.n_threads;
    cfg.seed = opt.seed + 101;
    cfg.mode = SimMode::Interval;
    const SimSummary interval = simulate_batch(base, cfg);
    cfg.seed = opt.seed + 202;
    cfg.mode = SimMode::Event;
    const SimSummary event = simulate_batch(base, cfg);

    std::vector<double> ta = interval.tau_samples, tb = event.tau_samples;
    std::sort(ta.begin(), ta.end());
    std::sort(tb.begin(), tb.end());
    const double ks = ks_two_sample_statistic(ta, tb);
    const double ne = static_cast<double>(ta.size()) * static_cast<double>(tb.size()) /
                      static_cast<double>(ta.size() + tb.size());
    const double ks_crit = kolmogorov_critical(0.01) / std::sqrt(ne);

    auto to_counts = [](const DistributionTable& t, long n) {
      std::vector<long> c(t.values.size());
      for (size_t k = 0; k < c.size(); ++k)
        c[k] = std::lround(t.values[k] * static_cast<double>(n));
      return c;
    };
    const auto chi_a = chi_square_two_sample(to_counts(interval.pmf_a, cfg.n_paths),
                                             to_counts(event.pmf_a, cfg.n_paths));
    const auto chi_b = chi_square_two_sample(to_counts(interval.pmf_b, cfg.n_paths),
                                             to_counts(event.pmf_b, cfg.n_paths));
    const bool pass = ks <= ks_crit && chi_a.p_value >= 0.01 && chi_b.p_value >= 0.01;
    return CheckResult{
        9, "simulator-mode-equivalence", pass,
        strfmt("two-sample KS = %.5f vs crit %.5f; chi-square p-values A = %.3f, "
               "B = %.3f (reject below 0.01)",
               ks, ks_crit, chi_a.p_value, chi_b.p_value)};
  });
}

}  // namespace

std::vector<CheckResult> run_validation(const GameParams& base,
                                        const ValidationOptions& opt) {
  const auto shared = run_shared_sim(base, opt);
  std::vector<CheckResult> out;
  out.push_back(check_normalization());
  out.push_back(check_dual_path());
  out.push_back(check_operator_forms());
  out.push_back(check_monte_carlo(base, shared));
  out.push_back(check_tau_density(base, shared));
  out.push_back(check_casualty_pmfs(base, opt));
  out.push_back(check_marginal_forms(base));
  out.push_back(check_laplace_machinery());
  out.push_back(check_mode_equivalence(base, opt));
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

std::string validation_to_json(const std::vector<CheckResult>& results) {
  nlohmann::ordered_json out;
  out["all_pass"] = all_passed(results);
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json c;
    c["id"] = r.id;
    c["name"] = r.name;
    c["pass"] = r.pass;
    c["detail"] = r.detail;
    checks.push_back(c);
  }
  out["checks"] = checks;
  return out.dump(2);
}

}  // namespace delgame
