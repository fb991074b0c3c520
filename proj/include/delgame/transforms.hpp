#pragma once

#include "delgame/params.hpp"

namespace delgame {

/// One-step joint transform gamma(u,v,theta) = E[u^X1 v^Y1 e^{-theta tau1}],
/// i.e. the Delta-law LST evaluated at theta + lambda(1-u) + mu(1-v).
Complex gamma_joint(const GameParams& p, const TransformQuery& q);

/// Joint transform Phi(u,v,theta) = E[u^{A_rho} v^{B_rho} e^{-theta tau_rho}]
/// by the explicit closed form (exponential observation gaps only; throws
/// NotClosedFormCapable otherwise).
Complex phi_closed(const GameParams& p, const TransformQuery& q);

/// The same functional computed through the operator route:
/// Phi = 1 - [1 - gamma(u,v,theta)] * D^{threshold_a-1, threshold_b-1}
/// of 1/(1 - gamma(ux, vy, theta)). Rational gamma (exponential, Erlang) is
/// expanded by exact truncated series arithmetic; the deterministic law goes
/// through the Cauchy-integral extraction.
Complex phi_operator(const GameParams& p, const TransformQuery& q);

/// Marginal transforms, computed as specializations of phi_closed.
Complex marginal_tau_lst(const GameParams& p, Complex theta);
Complex marginal_A_pgf(const GameParams& p, Complex u);
Complex marginal_B_pgf(const GameParams& p, Complex v);

/// Independent single-sum forms of the marginals, kept as cross-checks of
/// the specializations above.
Complex marginal_tau_lst_sum_form(const GameParams& p, Complex theta);
Complex marginal_A_pgf_sum_form(const GameParams& p, Complex u);
Complex marginal_B_pgf_sum_form(const GameParams& p, Complex v);

/// The sums of the single-sum marginal forms, exposed for diagnostics. At the
/// boundary points (theta = 0, u = 1, v = 1) each sum vanishes and the
/// corresponding marginal collapses to 1.
struct MarginalIntermediates {
  Complex f_sum;   // ruin-time form at theta
  Complex g_sum;   // A-casualty form at u
  Complex h_sum;   // B-casualty form at v
  Complex b_marg;  // lambda / (lambda + mu (1 - v))
};
MarginalIntermediates marginal_intermediates(const GameParams& p, Complex theta,
                                             Complex u, Complex v);

/// Intermediates of the closed form, exposed for diagnostics and tests.
struct ClosedFormIntermediates {
  Complex p;      // lambda + mu + theta
  Complex a;      // lambda u / p
  Complex b;      // lambda u / (p - mu v)
  Complex c_big;  // mu v / p
  Complex psi;
};
ClosedFormIntermediates closed_form_intermediates(const GameParams& p,
                                                  const TransformQuery& q);

namespace detail {
// Unchecked evaluators used internally (e.g. on scaled arguments inside the
// Cauchy extraction, or just off the admissible domain in derivative tests).
Complex gamma_eval(const GameParams& p, Complex u, Complex v, Complex theta);
Complex phi_closed_eval(const GameParams& p, Complex u, Complex v, Complex theta);
Complex phi_operator_eval(const GameParams& p, Complex u, Complex v, Complex theta);
}  // namespace detail

}  // namespace delgame
