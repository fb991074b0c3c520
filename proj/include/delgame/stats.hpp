#pragma once

#include <functional>
#include <vector>

namespace delgame {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0
/// (series / continued-fraction split).
double regularized_gamma_p(double a, double x);

double chi_square_cdf(double x, int df);
double chi_square_quantile(double p, int df);

/// Kolmogorov asymptotic survival function 2 sum (-1)^{j-1} e^{-2 j^2 x^2}.
double kolmogorov_survival(double x);
/// Solves kolmogorov_survival(k) = alpha (e.g. ~1.6276 at alpha = 0.01).
double kolmogorov_critical(double alpha);

/// One-sample KS statistic of sorted samples against a CDF.
double ks_statistic(const std::vector<double>& sorted_samples,
                    const std::function<double(double)>& cdf);

/// Two-sample KS statistic of two sorted samples.
double ks_two_sample_statistic(const std::vector<double>& sorted_a,
                               const std::vector<double>& sorted_b);

struct ChiSquareTest {
  double stat = 0.0;
  int df = 0;
  double p_value = 1.0;
};

/// Two-sample chi-square homogeneity test on count vectors over a common
/// integer support; cells are pooled from the right until every expected
/// count reaches min_expected.
ChiSquareTest chi_square_two_sample(const std::vector<long>& counts_a,
                                    const std::vector<long>& counts_b,
                                    double min_expected = 5.0);

/// Goodness-of-fit chi-square of observed counts against given probabilities
/// (same pooling rule).
ChiSquareTest chi_square_goodness(const std::vector<long>& counts,
                                  const std::vector<double>& probs,
                                  long n_draws, double min_expected = 5.0);

/// Total variation distance 0.5 * sum |p_k - q_k| over the union support;
/// mass beyond either vector counts in full.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

/// Adaptive Simpson quadrature. The range is first split into uniform panels
/// so localized integrands cannot hide between the initial probe points.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol, int max_depth = 40,
                          int initial_panels = 16);

}  // namespace delgame
