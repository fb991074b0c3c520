#include "delgame/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "delgame/transforms.hpp"

namespace delgame {

namespace {

double int_pow(double x, int n) {
  double acc = 1.0;
  bool inv = n < 0;
  unsigned e = inv ? static_cast<unsigned>(-n) : static_cast<unsigned>(n);
  while (e > 0) {
    if (e & 1) acc *= x;
    x *= x;
    e >>= 1;
  }
  return inv ? 1.0 / acc : acc;
}

struct PoleFactor {
  double pole;
  int mult;
};

// A sum of terms coef[r] * t^r * e^{-pole t}.
struct ExpPoly {
  double pole;
  std::vector<double> coef;
};

void check_separation(const std::vector<PoleFactor>& factors) {
  for (size_t i = 0; i < factors.size(); ++i)
    for (size_t j = i + 1; j < factors.size(); ++j)
      if (std::abs(factors[i].pole - factors[j].pole) <= 1e-9)
        fail(ErrorCode::PolesTooClose,
             "poles must be pairwise separated by more than 1e-9");
}

// Residue expansion of coeff / prod_j (pole_j + theta)^{mult_j} into
// exponential polynomials, one per pole. For the pole p_i of order q, the
// y-coefficients come from the Taylor series (to order q-1) of the remaining
// factors at theta = -p_i.
std::vector<ExpPoly> partial_fractions(double coeff,
                                       const std::vector<PoleFactor>& factors) {
  check_separation(factors);
  std::vector<ExpPoly> out;
  for (size_t i = 0; i < factors.size(); ++i) {
    const int q = factors[i].mult;
    std::vector<double> g(q, 0.0);
    g[0] = 1.0;
    std::vector<double> tmp(q), fac(q);
    for (size_t j = 0; j < factors.size(); ++j) {
      if (j == i) continue;
      const double c = factors[j].pole - factors[i].pole;
      const int qj = factors[j].mult;
      // (c + h)^{-qj} = sum_t C(qj+t-1, t) (-1)^t c^{-qj-t} h^t
      fac[0] = int_pow(c, -qj);
      for (int t = 1; t < q; ++t)
        fac[t] = -fac[t - 1] * (qj + t - 1) / (t * c);
      std::fill(tmp.begin(), tmp.end(), 0.0);
      for (int s = 0; s < q; ++s)
        for (int t = 0; t + s < q; ++t) tmp[s + t] += g[s] * fac[t];
      g.swap(tmp);
    }
    // F = sum_s g_s (p_i + theta)^{s-q}; the (q-s)-order pole inverts to
    // t^{q-1-s} e^{-p_i t} / (q-1-s)!.
    ExpPoly part;
    part.pole = factors[i].pole;
    part.coef.assign(q, 0.0);
    double rfact = 1.0;
    for (int r = 0; r < q; ++r) {
      if (r > 0) rfact *= r;
      part.coef[r] = coeff * g[q - 1 - r] / rfact;
    }
    out.push_back(std::move(part));
  }
  return out;
}

// Value plus a rounding-envelope estimate (the same sum with absolute
// coefficients, scaled by eps): the residue representation cancels between
// pole contributions, so the envelope is the honest accuracy limit.
struct EvalEstimate {
  double value = 0.0;
  double error = 0.0;
};

EvalEstimate eval_exp_polys(const std::vector<ExpPoly>& parts, double t) {
  EvalEstimate out;
  double envelope = 0.0;
  size_t n_coef = 0;
  for (const auto& part : parts) {
    double poly = 0.0, poly_abs = 0.0;
    for (size_t r = part.coef.size(); r-- > 0;) {
      poly = poly * t + part.coef[r];
      poly_abs = poly_abs * t + std::abs(part.coef[r]);
    }
    const double damp = std::exp(-part.pole * t);
    out.value += poly * damp;
    envelope += poly_abs * damp;
    n_coef += part.coef.size();
  }
  out.error = envelope * 1e-15 * static_cast<double>(n_coef + 2);
  return out;
}

// Ascending expansion around t = 0. With D = sum of multiplicities,
//   F(theta) = coeff theta^{-D} prod_i (1 + p_i/theta)^{-q_i}
//            = coeff sum_j e_j theta^{-(D+j)},
// so the inverse is coeff sum_j e_j t^{D+j-1}/(D+j-1)! (one extra power of t
// per term when integrating for the CDF). This route stays accurate exactly
// where the residue route cancels; empty result means the coefficients
// overflowed and the expansion is unusable.
std::vector<double> ascending_coeffs(const std::vector<PoleFactor>& factors,
                                     int order) {
  std::vector<double> e(static_cast<size_t>(order) + 1, 0.0);
  e[0] = 1.0;
  // the convolution is lower-triangular, so the prefix below any overflowing
  // index stays exact; just shrink the usable length
  size_t limit = e.size();
  std::vector<double> fac(e.size()), tmp(e.size());
  for (const auto& f : factors) {
    fac[0] = 1.0;
    for (size_t s = 1; s < limit; ++s) {
      fac[s] = -fac[s - 1] * (f.mult + static_cast<double>(s) - 1) * f.pole /
               static_cast<double>(s);
      if (!(std::abs(fac[s]) <= 1e290)) {
        limit = s;
        break;
      }
    }
    std::fill(tmp.begin(), tmp.begin() + static_cast<long>(limit), 0.0);
    for (size_t s = 0; s < limit; ++s) {
      if (e[s] == 0.0) continue;
      for (size_t u = 0; s + u < limit; ++u) tmp[s + u] += e[s] * fac[u];
    }
    e.swap(tmp);
    for (size_t s = 0; s < limit; ++s)
      if (!(std::abs(e[s]) <= 1e290)) {
        limit = s;
        break;
      }
  }
  if (limit < 8) return {};
  e.resize(limit);
  return e;
}

EvalEstimate eval_ascending(double coeff, int total_degree,
                            const std::vector<double>& e, double t,
                            bool integrated) {
  const int base = total_degree - 1 + (integrated ? 1 : 0);
  if (t <= 0.0) return {base == 0 ? coeff : 0.0, 0.0};
  double term_t = std::exp(base * std::log(t) - std::lgamma(base + 1.0));
  double acc = 0.0, max_term = 0.0;
  int small_run = 0;
  size_t used = 0;
  for (size_t j = 0; j < e.size(); ++j) {
    const double term = e[j] * term_t;
    acc += term;
    max_term = std::max(max_term, std::abs(term));
    term_t *= t / static_cast<double>(base + j + 1);
    ++used;
    if (std::abs(term) <= 1e-18 * std::max(std::abs(acc), 1e-300)) {
      if (++small_run >= 4) break;
    } else {
      small_run = 0;
    }
  }
  if (small_run < 4)  // ran off the precomputed order: unusable at this t
    return {coeff * acc, std::abs(coeff) * std::max(max_term, 1.0)};
  return {coeff * acc, std::abs(coeff) * max_term * 1e-15 * static_cast<double>(used)};
}

int total_degree_of(const std::vector<PoleFactor>& factors) {
  int d = 0;
  for (const auto& f : factors) d += f.mult;
  return d;
}

constexpr int kAscendingOrder = 360;

std::vector<PoleFactor> term_factors(const RationalLstTerm& term) {
  if (term.mult1 < 0 || term.mult2 < 0)
    fail(ErrorCode::InvalidArgument, "multiplicities must be >= 0");
  if (term.mult1 + term.mult2 > 400)
    fail(ErrorCode::InvalidArgument, "total multiplicity above supported cap");
  std::vector<PoleFactor> factors{{term.gamma_pole, 1}};
  if (term.mult1 > 0) factors.push_back({term.pole1, term.mult1});
  if (term.mult2 > 0) factors.push_back({term.pole2, term.mult2});
  return factors;
}

}  // namespace

double erlang_tail(int n, double x) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "erlang_tail needs n >= 1");
  double term = 1.0, sum = 1.0;
  for (int i = 1; i < n; ++i) {
    term *= x / i;
    sum += term;
  }
  return 1.0 - std::exp(-x) * sum;
}

double invert_gamma_erlang(double gamma_pole, double pole1, int m, double t) {
  if (m < 1) fail(ErrorCode::InvalidArgument, "multiplicity must be >= 1");
  if (t < 0.0) fail(ErrorCode::InvalidArgument, "t must be >= 0");
  const double d = pole1 - gamma_pole;
  if (std::abs(d) <= 1e-9)
    fail(ErrorCode::PolesTooClose, "gamma and lambda poles are confluent");
  return std::exp(-gamma_pole * t) / int_pow(d, m) * erlang_tail(m, d * t);
}

double invert_rational_term(const RationalLstTerm& term, double t) {
  if (t < 0.0) fail(ErrorCode::InvalidArgument, "t must be >= 0");
  const auto factors = term_factors(term);
  const EvalEstimate residue =
      eval_exp_polys(partial_fractions(term.coeff, factors), t);
  if (residue.error <= 1e-13 * std::max(1.0, std::abs(residue.value)))
    return residue.value;
  // the pole contributions cancel here; try the ascending expansion instead
  const auto e = ascending_coeffs(factors, kAscendingOrder);
  if (e.empty()) return residue.value;
  const EvalEstimate series =
      eval_ascending(term.coeff, total_degree_of(factors), e, t, false);
  return series.error < residue.error ? series.value : residue.value;
}

double laplace_invert_numeric(const std::function<Complex(Complex)>& transform,
                              double t, const EulerOptions& opt) {
  if (!(t > 0.0)) fail(ErrorCode::InvalidArgument, "t must be > 0");
  const double a2t = opt.shift / (2.0 * t);
  const int total = opt.pre_terms + opt.accel_terms;

  // Shifted Bromwich trapezoid: partial sums of the alternating series
  //   F(a)/2 + sum_k (-1)^k Re F(a + i pi k / t).
  std::vector<double> partial(static_cast<size_t>(total) + 1);
  double run = 0.5 * transform(Complex(a2t, 0.0)).real();
  partial[0] = run;
  for (int k = 1; k <= total; ++k) {
    const double re =
        transform(Complex(a2t, std::numbers::pi * k / t)).real();
    run += (k & 1) ? -re : re;
    partial[static_cast<size_t>(k)] = run;
    if (!std::isfinite(run))
      fail(ErrorCode::NonConvergent, "transform values are not finite");
  }

  // Binomial (Euler) averaging of the last accel_terms+1 partial sums;
  // consecutive averaging passes double as the convergence estimate.
  std::vector<double> avg(partial.end() - (opt.accel_terms + 1), partial.end());
  double prev = avg.back();
  for (int pass = 0; pass < opt.accel_terms; ++pass) {
    for (size_t i = 0; i + 1 < avg.size(); ++i) avg[i] = 0.5 * (avg[i] + avg[i + 1]);
    avg.pop_back();
    if (avg.size() == 1) break;
    prev = avg[0];
  }
  const double scale = std::exp(opt.shift / 2.0) / t;
  const double value = scale * avg[0];
  const double err = scale * std::abs(avg[0] - prev);
  if (err > opt.divergence_tol * std::max(1.0, std::abs(value)))
    fail(ErrorCode::NonConvergent,
         "Euler acceleration did not settle (oscillating tail)");
  return value;
}

TauDensity::TauDensity(const GameParams& p) {
  if (!p.closed_form_capable())
    fail(ErrorCode::NotClosedFormCapable,
         "the exact density needs exponential observation gaps");
  const double g = p.delta.rate, l = p.lambda, lm = p.lambda + p.mu;
  if (std::abs(g - l) <= 1e-9 || std::abs(g - lm) <= 1e-9 ||
      std::abs(l - lm) <= 1e-9)
    fail(ErrorCode::PolesTooClose,
         "observation rate coincides with an attack-rate pole");
  const long m = p.threshold_a, n = p.threshold_b;
  if (m + n > 400)
    fail(ErrorCode::InvalidArgument, "thresholds beyond the exact-path cap");

  // Terms of the marginal LST of the ruin time:
  //   g l^M / ((g+th)(l+th)^M)
  //   + sum_j C(N+j-1,j) g l^j mu^N / ((g+th)(l+mu+th)^{N+j})
  //   - sum_j C(N+j-1,j) g l^M mu^N / ((g+th)(l+th)^{M-j}(l+mu+th)^{N+j})
  std::vector<ExpPoly> merged;
  auto add_term = [&](double coeff, const std::vector<PoleFactor>& factors) {
    for (auto& part : partial_fractions(coeff, factors)) {
      auto it = std::find_if(merged.begin(), merged.end(), [&](const ExpPoly& e) {
        return e.pole == part.pole;
      });
      if (it == merged.end()) {
        merged.push_back(std::move(part));
        continue;
      }
      if (it->coef.size() < part.coef.size()) it->coef.resize(part.coef.size(), 0.0);
      for (size_t r = 0; r < part.coef.size(); ++r) it->coef[r] += part.coef[r];
    }
    auto e = ascending_coeffs(factors, kAscendingOrder);
    if (!e.empty())
      terms_.push_back({coeff, total_degree_of(factors), std::move(e)});
  };

  const double mu_n = int_pow(p.mu, static_cast<int>(n));
  add_term(g * int_pow(l, static_cast<int>(m)), {{g, 1}, {l, static_cast<int>(m)}});
  double binom = 1.0;
  for (long j = 0; j < m; ++j) {
    if (j > 0) binom *= static_cast<double>(n + j - 1) / static_cast<double>(j);
    const double c2 = binom * g * int_pow(l, static_cast<int>(j)) * mu_n;
    add_term(c2, {{g, 1}, {lm, static_cast<int>(n + j)}});
    const double c3 = -binom * g * int_pow(l, static_cast<int>(m)) * mu_n;
    add_term(c3, {{g, 1},
                  {l, static_cast<int>(m - j)},
                  {lm, static_cast<int>(n + j)}});
  }

  double w_sum = 0.0;
  for (auto& part : merged) {
    PolePart pp;
    pp.pole = part.pole;
    pp.coef = std::move(part.coef);
    pp.cdf_w.resize(pp.coef.size());
    double rfact = 1.0;
    for (size_t r = 0; r < pp.coef.size(); ++r) {
      if (r > 0) rfact *= static_cast<double>(r);
      pp.cdf_w[r] = pp.coef[r] * rfact / int_pow(pp.pole, static_cast<int>(r) + 1);
      w_sum += pp.cdf_w[r];
    }
    parts_.push_back(std::move(pp));
  }
  // the weights integrate the density, so they sum to exactly 1; whatever is
  // left over is realized construction error and feeds the error model below
  cdf_const_gap_ = w_sum - 1.0;
}

double TauDensity::eval(double t, bool integrated) const {
  // fast route: merged per-pole exponential polynomials
  EvalEstimate fast;
  double envelope = 0.0;
  size_t n_coef = 0;
  if (!integrated) {
    for (const auto& part : parts_) {
      double poly = 0.0, poly_abs = 0.0;
      for (size_t r = part.coef.size(); r-- > 0;) {
        poly = poly * t + part.coef[r];
        poly_abs = poly_abs * t + std::abs(part.coef[r]);
      }
      const double damp = std::exp(-part.pole * t);
      fast.value += poly * damp;
      envelope += poly_abs * damp;
      n_coef += part.coef.size();
    }
  } else {
    // two complementary forms: sum w_r P(r+1, pt) directly, or subtract the
    // upper tails from the exact total mass 1; the tails damp whichever side
    // of the weights would otherwise cancel
    double direct = 0.0, env_direct = 0.0, p_max = 0.0;
    double upper = 0.0, env_upper = 0.0, q_max = 0.0;
    for (const auto& part : parts_) {
      const double x = part.pole * t;
      const double ex = std::exp(-x);
      double pterm = ex;        // e^{-x} x^r / r!
      double lower = 1.0 - ex;  // erlang_tail(r+1, x), in [0, 1] for x >= 0
      double tail = ex;         // complementary e^{-x} sum_{i<=r} x^i/i!
      for (size_t r = 0; r < part.cdf_w.size(); ++r) {
        if (r > 0) {
          pterm *= x / static_cast<double>(r);
          lower -= pterm;
          tail += pterm;
        }
        direct += part.cdf_w[r] * lower;
        env_direct += std::abs(part.cdf_w[r]) * std::abs(lower);
        p_max = std::max(p_max, std::abs(lower));
        upper += part.cdf_w[r] * tail;
        env_upper += std::abs(part.cdf_w[r]) * std::abs(tail);
        q_max = std::max(q_max, std::abs(tail));
      }
      n_coef += part.cdf_w.size();
    }
    const double gap = std::abs(cdf_const_gap_);
    const double scale = 1e-15 * static_cast<double>(n_coef + 2);
    const double err_direct = env_direct * scale + gap * p_max;
    const double err_upper = env_upper * scale + gap * q_max;
    if (err_direct <= err_upper) {
      fast.value = direct;
      fast.error = err_direct;
    } else {
      fast.value = 1.0 - upper;
      fast.error = err_upper;
    }
    envelope = 0.0;  // already folded into fast.error
  }
  if (!integrated)
    fast.error = envelope * 1e-15 * static_cast<double>(n_coef + 2);
  if (fast.error <= 1e-13 * std::max(1.0, std::abs(fast.value))) return fast.value;

  // cancellation detected: re-sum through the per-term ascending expansions
  EvalEstimate slow;
  for (const auto& term : terms_) {
    const EvalEstimate one =
        eval_ascending(term.coeff, term.total_degree, term.e, t, integrated);
    slow.value += one.value;
    slow.error += one.error;
  }
  return slow.error < fast.error ? slow.value : fast.value;
}

double TauDensity::pdf(double t) const { return eval(t, false); }

double TauDensity::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  return eval(t, true);
}

double TauDensity::mean() const {
  double acc = 0.0;
  for (const auto& part : parts_) {
    double rfact = 1.0;  // (r+1)! accumulated below
    for (size_t r = 0; r < part.coef.size(); ++r) {
      rfact *= static_cast<double>(r + 1);
      acc += part.coef[r] * rfact / int_pow(part.pole, static_cast<int>(r) + 2);
    }
  }
  return acc;
}

double tau_pdf(const GameParams& p, double t) {
  if (t < 0.0) fail(ErrorCode::InvalidArgument, "t must be >= 0");
  return TauDensity(p).pdf(t);
}

DistributionTable tau_pdf_table(const GameParams& p, double t0, double dt,
                                long n) {
  if (n < 1 || !(dt > 0.0) || t0 < 0.0)
    fail(ErrorCode::InvalidArgument, "need t0 >= 0, dt > 0, n >= 1");
  const TauDensity density(p);
  DistributionTable table;
  table.kind = DistributionTable::Kind::Pdf;
  table.empirical = false;
  table.support.resize(static_cast<size_t>(n));
  table.values.resize(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double t = t0 + dt * static_cast<double>(i);
    double value = density.pdf(t);
    if (value < 0.0) {
      table.clipped_mass += -value * dt;
      value = 0.0;
    }
    table.support[static_cast<size_t>(i)] = t;
    table.values[static_cast<size_t>(i)] = value;
  }
  return table;
}

double DistributionTable::total_mass() const {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc;
}

DistributionTable pgf_to_pmf(const std::function<Complex(Complex)>& pgf,
                             long max_k, long grid_points, double radius) {
  if (max_k < 0) fail(ErrorCode::InvalidArgument, "max_k must be >= 0");
  if (!(radius > 0.0 && radius <= 1.0))
    fail(ErrorCode::InvalidArgument, "radius must lie in (0, 1]");
  const long n = grid_points == 0 ? std::max<long>(4 * (max_k + 1), 64) : grid_points;
  if (n < 4 || n < 4 * max_k)
    fail(ErrorCode::GridTooCoarse, "need at least 4*max_k sample points");

  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<Complex> samples(static_cast<size_t>(n));
  for (long j = 0; j < n; ++j)
    samples[static_cast<size_t>(j)] =
        pgf(std::polar(radius, two_pi * static_cast<double>(j) / static_cast<double>(n)));

  DistributionTable table;
  table.kind = DistributionTable::Kind::Pmf;
  table.empirical = false;
  table.support.resize(static_cast<size_t>(max_k) + 1);
  table.values.resize(static_cast<size_t>(max_k) + 1);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (long k = 0; k <= max_k; ++k) {
    Complex acc = 0.0;
    for (long j = 0; j < n; ++j) {
      const long r = (j * k) % n;
      acc += samples[static_cast<size_t>(j)] *
             std::polar(1.0, -two_pi * static_cast<double>(r) / static_cast<double>(n));
    }
    acc *= inv_n / int_pow(radius, static_cast<int>(k));
    table.max_imag_residue = std::max(table.max_imag_residue, std::abs(acc.imag()));
    double mass = acc.real();
    if (mass < 0.0) {
      table.clipped_mass += -mass;
      mass = 0.0;
    }
    table.support[static_cast<size_t>(k)] = static_cast<double>(k);
    table.values[static_cast<size_t>(k)] = mass;
  }
  return table;
}

}  // namespace delgame
