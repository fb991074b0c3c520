#include "delgame/stats.hpp"

#include <algorithm>
#include <cmath>

#include "delgame/error.hpp"

namespace delgame {

namespace {

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) = 1 - P(a, x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    fail(ErrorCode::InvalidArgument, "regularized_gamma_p needs a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double chi_square_cdf(double x, int df) {
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * df, 0.5 * x);
}

double chi_square_quantile(double p, int df) {
  if (!(p > 0.0 && p < 1.0))
    fail(ErrorCode::InvalidArgument, "quantile level must lie in (0, 1)");
  double lo = 0.0, hi = df + 10.0;
  while (chi_square_cdf(hi, df) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (chi_square_cdf(mid, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  double acc = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    acc += (j & 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * acc, 0.0, 1.0);
}

double kolmogorov_critical(double alpha) {
  double lo = 0.2, hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_survival(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ks_statistic(const std::vector<double>& sorted_samples,
                    const std::function<double(double)>& cdf) {
  const size_t n = sorted_samples.size();
  if (n == 0) fail(ErrorCode::InvalidArgument, "empty sample");
  double d = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted_samples[i]);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    d = std::max({d, std::abs(f - hi), std::abs(f - lo)});
  }
  return d;
}

double ks_two_sample_statistic(const std::vector<double>& sorted_a,
                               const std::vector<double>& sorted_b) {
  const size_t n = sorted_a.size(), m = sorted_b.size();
  if (n == 0 || m == 0) fail(ErrorCode::InvalidArgument, "empty sample");
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < n && j < m) {
    if (sorted_a[i] <= sorted_b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

namespace {

// Pool cells from the right until every pooled expected count reaches the
// floor; returns pooled boundaries as index ranges.
std::vector<std::pair<size_t, size_t>> pool_cells(const std::vector<double>& expected,
                                                  double min_expected) {
  std::vector<std::pair<size_t, size_t>> cells;
  size_t start = 0;
  double acc = 0.0;
  for (size_t k = 0; k < expected.size(); ++k) {
    acc += expected[k];
    if (acc >= min_expected) {
      cells.emplace_back(start, k + 1);
      start = k + 1;
      acc = 0.0;
    }
  }
  if (start < expected.size()) {
    if (cells.empty())
      cells.emplace_back(start, expected.size());
    else
      cells.back().second = expected.size();  // fold the light tail in
  }
  return cells;
}

}  // namespace

ChiSquareTest chi_square_two_sample(const std::vector<long>& counts_a,
                                    const std::vector<long>& counts_b,
                                    double min_expected) {
  const size_t len = std::max(counts_a.size(), counts_b.size());
  double n1 = 0.0, n2 = 0.0;
  std::vector<double> pooled(len, 0.0);
  for (size_t k = 0; k < len; ++k) {
    const double a = k < counts_a.size() ? static_cast<double>(counts_a[k]) : 0.0;
    const double b = k < counts_b.size() ? static_cast<double>(counts_b[k]) : 0.0;
    pooled[k] = a + b;
    n1 += a;
    n2 += b;
  }
  const double total = n1 + n2;
  std::vector<double> expected_small(len);
  for (size_t k = 0; k < len; ++k)
    expected_small[k] = pooled[k] * std::min(n1, n2) / total;
  const auto cells = pool_cells(expected_small, min_expected);

  ChiSquareTest r;
  for (const auto& [lo, hi] : cells) {
    double oa = 0.0, ob = 0.0, pk = 0.0;
    for (size_t k = lo; k < hi; ++k) {
      oa += k < counts_a.size() ? static_cast<double>(counts_a[k]) : 0.0;
      ob += k < counts_b.size() ? static_cast<double>(counts_b[k]) : 0.0;
      pk += pooled[k];
    }
    const double ea = pk * n1 / total;
    const double eb = pk * n2 / total;
    if (ea > 0.0) r.stat += (oa - ea) * (oa - ea) / ea;
    if (eb > 0.0) r.stat += (ob - eb) * (ob - eb) / eb;
  }
  r.df = static_cast<int>(cells.size()) - 1;
  r.p_value = r.df >= 1 ? 1.0 - chi_square_cdf(r.stat, r.df) : 1.0;
  return r;
}

ChiSquareTest chi_square_goodness(const std::vector<long>& counts,
                                  const std::vector<double>& probs,
                                  long n_draws, double min_expected) {
  const size_t len = std::max(counts.size(), probs.size());
  // one extra cell holds the unlisted upper tail
  std::vector<double> expected(len + 1, 0.0), observed(len + 1, 0.0);
  double tail_prob = 1.0;
  double listed = 0.0;
  for (size_t k = 0; k < len; ++k) {
    const double p = k < probs.size() ? probs[k] : 0.0;
    expected[k] = p * static_cast<double>(n_draws);
    tail_prob -= p;
    if (k < counts.size()) {
      observed[k] = static_cast<double>(counts[k]);
      listed += observed[k];
    }
  }
  expected[len] = std::max(tail_prob, 0.0) * static_cast<double>(n_draws);
  observed[len] = static_cast<double>(n_draws) - listed;
  const auto cells = pool_cells(expected, min_expected);

  ChiSquareTest r;
  for (const auto& [lo, hi] : cells) {
    double o = 0.0, e = 0.0;
    for (size_t k = lo; k < hi; ++k) {
      o += observed[k];
      e += expected[k];
    }
    if (e > 0.0) r.stat += (o - e) * (o - e) / e;
  }
  r.df = static_cast<int>(cells.size()) - 1;
  r.p_value = r.df >= 1 ? 1.0 - chi_square_cdf(r.stat, r.df) : 1.0;
  return r;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  const size_t len = std::max(p.size(), q.size());
  double acc = 0.0;
  for (size_t k = 0; k < len; ++k) {
    const double a = k < p.size() ? p[k] : 0.0;
    const double b = k < q.size() ? q[k] : 0.0;
    acc += std::abs(a - b);
  }
  return 0.5 * acc;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// budget caps the total function evaluations so a tolerance below the
// integrand's noise floor degrades to a coarser answer instead of runaway
// recursion
double integrate_rec(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double m, double fm, double whole,
                     double tol, int depth, long& budget) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  budget -= 2;
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  if (depth <= 0 || budget <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return integrate_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, budget) +
         integrate_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, budget);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol, int max_depth,
                          int initial_panels) {
  initial_panels = std::max(initial_panels, 1);
  const double h = (b - a) / initial_panels;
  const double panel_tol = tol / initial_panels;
  long budget = 2'000'000;
  double acc = 0.0;
  for (int k = 0; k < initial_panels; ++k) {
    const double lo = a + k * h, hi = k + 1 == initial_panels ? b : a + (k + 1) * h;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fhi = f(hi), fmid = f(mid);
    acc += integrate_rec(f, lo, flo, hi, fhi, mid, fmid,
                         simpson(lo, flo, hi, fhi, fmid), panel_tol, max_depth,
                         budget);
  }
  return acc;
}

}  // namespace delgame
