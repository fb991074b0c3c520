#include "delgame/transforms.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "delgame/series.hpp"

namespace delgame {

namespace {

Complex int_pow(Complex z, long n) {
  Complex acc = 1.0;
  while (n > 0) {
    if (n & 1) acc *= z;
    z *= z;
    n >>= 1;
  }
  return acc;
}

void require_closed_form(const GameParams& p) {
  if (!p.closed_form_capable())
    fail(ErrorCode::NotClosedFormCapable,
         "closed-form transforms need exponential observation gaps");
}

// Test hook: flipping the sign of psi lets the validation suite prove it
// catches a corrupted closed form.
bool psi_sign_fault() {
  static const bool flip = [] {
    const char* f = std::getenv("DELGAME_FAULT_INJECT");
    return f != nullptr && std::strcmp(f, "psi-sign") == 0;
  }();
  return flip;
}

struct ClosedFormParts {
  Complex s;      // lambda(1-u) + mu(1-v) + theta
  Complex p;      // lambda + mu + theta
  Complex p_mv;   // p - mu v = lambda + mu(1-v) + theta
  Complex a, b, c_big, ratio, psi;
};

ClosedFormParts closed_form_parts(const GameParams& g, Complex u, Complex v,
                                  Complex theta) {
  ClosedFormParts r;
  r.s = g.lambda * (1.0 - u) + g.mu * (1.0 - v) + theta;
  r.p = g.lambda + g.mu + theta;
  r.p_mv = r.p - g.mu * v;
  r.a = g.lambda * u / r.p;
  r.b = g.lambda * u / r.p_mv;
  r.c_big = g.mu * v / r.p;
  r.ratio = r.p_mv / r.p;  // equals a/b without the 0/0 hazard at u = 0
  const long m = g.threshold_a, n = g.threshold_b;
  r.psi = d_op_geometric(m - 1, r.b) -
          int_pow(r.c_big, n) *
              d_op_product(m - 1, r.a, r.b, r.ratio, static_cast<int>(n));
  if (psi_sign_fault()) r.psi = -r.psi;
  return r;
}

}  // namespace

namespace detail {

Complex gamma_eval(const GameParams& p, Complex u, Complex v, Complex theta) {
  return p.delta.lst(theta + p.lambda * (1.0 - u) + p.mu * (1.0 - v));
}

Complex phi_closed_eval(const GameParams& g, Complex u, Complex v,
                        Complex theta) {
  const ClosedFormParts cf = closed_form_parts(g, u, v, theta);
  if (cf.s == 0.0) return 1.0;  // u = v = 1, theta = 0: total mass
  const double rate = g.delta.rate;
  return rate / (rate + cf.s) * (1.0 - cf.s / cf.p_mv * cf.psi);
}

Complex phi_operator_eval(const GameParams& g, Complex u, Complex v,
                          Complex theta) {
  const Complex gamma_uv = gamma_eval(g, u, v, theta);
  const Complex one_minus = 1.0 - gamma_uv;
  if (one_minus == 0.0) return 1.0;

  const int kx = static_cast<int>(g.threshold_a) - 1;
  const int ky = static_cast<int>(g.threshold_b) - 1;

  if (g.delta.kind == DeltaKind::Deterministic) {
    const double radius = 0.7;
    const int grid = std::max(64, 4 * (std::max(kx, ky) + 1));
    const Complex d = d_op_via_cauchy(
        [&](Complex x, Complex y) {
          return 1.0 / (1.0 - gamma_eval(g, u * x, v * y, theta));
        },
        kx, ky, radius, grid);
    return 1.0 - one_minus * d;
  }

  // Exponential and Erlang laws make gamma(ux, vy, theta) rational in (x, y):
  // with q = rate + theta + lambda + mu, the one-step transform equals
  // (rate / (q - lambda u x - mu v y))^shape, expanded exactly on the grid.
  const int shape = g.delta.kind == DeltaKind::Erlang ? g.delta.shape : 1;
  BivariateSeries lin = BivariateSeries::constant(
      g.delta.rate + theta + g.lambda + g.mu, kx, ky);
  if (kx >= 1) lin.at(1, 0) = -g.lambda * u;
  if (ky >= 1) lin.at(0, 1) = -g.mu * v;
  BivariateSeries gamma_series =
      (g.delta.rate * lin.reciprocal()).pow_trunc(shape);
  BivariateSeries h = BivariateSeries::constant(1.0, kx, ky) - gamma_series;
  const Complex d = d_op_from_series(h.reciprocal(), kx, ky);
  return 1.0 - one_minus * d;
}

}  // namespace detail

Complex gamma_joint(const GameParams& p, const TransformQuery& q) {
  return detail::gamma_eval(p, q.u, q.v, q.theta);
}

Complex phi_closed(const GameParams& p, const TransformQuery& q) {
  require_closed_form(p);
  return detail::phi_closed_eval(p, q.u, q.v, q.theta);
}

Complex phi_operator(const GameParams& p, const TransformQuery& q) {
  return detail::phi_operator_eval(p, q.u, q.v, q.theta);
}

ClosedFormIntermediates closed_form_intermediates(const GameParams& p,
                                                  const TransformQuery& q) {
  require_closed_form(p);
  const ClosedFormParts cf = closed_form_parts(p, q.u, q.v, q.theta);
  return {cf.p, cf.a, cf.b, cf.c_big, cf.psi};
}

Complex marginal_tau_lst(const GameParams& p, Complex theta) {
  require_closed_form(p);
  TransformQuery q(1.0, 1.0, theta);  // validates Re theta >= 0
  return detail::phi_closed_eval(p, q.u, q.v, q.theta);
}

Complex marginal_A_pgf(const GameParams& p, Complex u) {
  require_closed_form(p);
  TransformQuery q(u, 1.0, 0.0);
  return detail::phi_closed_eval(p, q.u, q.v, q.theta);
}

Complex marginal_B_pgf(const GameParams& p, Complex v) {
  require_closed_form(p);
  TransformQuery q(1.0, v, 0.0);
  return detail::phi_closed_eval(p, q.u, q.v, q.theta);
}

// The three single-sum forms below share the pattern
//   sum_{j<M} C(N+j-1,j) w^j (1 - base^{M-j})
// and are deliberately written out independently of phi_closed.

namespace {

Complex marginal_sum(long m, long n, Complex w, Complex base) {
  Complex binom = 1.0, wpow = 1.0, acc = 0.0;
  for (long j = 0; j < m; ++j) {
    if (j > 0) {
      binom *= static_cast<double>(n + j - 1) / static_cast<double>(j);
      wpow *= w;
    }
    acc += binom * wpow * (1.0 - int_pow(base, m - j));
  }
  return acc;
}

}  // namespace

MarginalIntermediates marginal_intermediates(const GameParams& g, Complex theta,
                                             Complex u, Complex v) {
  require_closed_form(g);
  const long m = g.threshold_a, n = g.threshold_b;
  MarginalIntermediates out;
  out.f_sum = marginal_sum(m, n, g.lambda / (g.lambda + g.mu + theta),
                           g.lambda / (g.lambda + theta));
  out.g_sum = marginal_sum(m, n, g.lambda * u / (g.lambda + g.mu), u);
  out.b_marg = g.lambda / (g.lambda + g.mu * (1.0 - v));
  out.h_sum = marginal_sum(m, n, g.lambda / (g.lambda + g.mu), out.b_marg);
  return out;
}

Complex marginal_tau_lst_sum_form(const GameParams& g, Complex theta) {
  require_closed_form(g);
  const long m = g.threshold_a, n = g.threshold_b;
  const Complex b = g.lambda / (g.lambda + theta);
  const Complex c = g.mu / (g.lambda + g.mu + theta);
  const Complex f_sum = marginal_sum(m, n, g.lambda / (g.lambda + g.mu + theta), b);
  return g.delta.rate / (g.delta.rate + theta) *
         (int_pow(b, m) + int_pow(c, n) * f_sum);
}

Complex marginal_A_pgf_sum_form(const GameParams& g, Complex u) {
  require_closed_form(g);
  const long m = g.threshold_a, n = g.threshold_b;
  const Complex c = g.mu / (g.lambda + g.mu);
  const Complex g_sum = marginal_sum(m, n, g.lambda * u / (g.lambda + g.mu), u);
  return g.delta.rate / (g.delta.rate + g.lambda * (1.0 - u)) *
         (int_pow(u, m) + int_pow(c, n) * g_sum);
}

Complex marginal_B_pgf_sum_form(const GameParams& g, Complex v) {
  require_closed_form(g);
  const long m = g.threshold_a, n = g.threshold_b;
  const Complex b = g.lambda / (g.lambda + g.mu * (1.0 - v));
  const Complex c = g.mu * v / (g.lambda + g.mu);
  const Complex h_sum = marginal_sum(m, n, g.lambda / (g.lambda + g.mu), b);
  return g.delta.rate / (g.delta.rate + g.mu * (1.0 - v)) *
         (int_pow(b, m) + int_pow(c, n) * h_sum);
}

}  // namespace delgame
