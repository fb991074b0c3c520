#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "delgame/simulate.hpp"
#include "delgame/transforms.hpp"

using delgame::Complex;
using delgame::DeltaLaw;
using delgame::Error;
using delgame::GameParams;
using delgame::TransformQuery;

namespace {

GameParams make_params(double lambda, double mu, DeltaLaw law, long m, long n) {
  delgame::RawParams raw;
  raw.lambda = lambda;
  raw.mu = mu;
  raw.delta = law;
  raw.threshold_a = static_cast<double>(m);
  raw.threshold_b = static_cast<double>(n);
  return delgame::validate_params(raw);
}

GameParams reference(long m = 3, long n = 4) {
  return make_params(1.0, 2.0, DeltaLaw::exponential(5.0), m, n);
}

double dist(Complex a, Complex b) { return std::abs(a - b); }

}  // namespace

TEST_CASE("one-step transform values") {
  // LST of any law at 0 is 1
  CHECK(dist(gamma_joint(reference(), TransformQuery(1.0, 1.0, 0.0)), 1.0) < 1e-15);
  // exponential law: 5 / (5 + 1 + 2 + 1)
  CHECK(dist(gamma_joint(reference(), TransformQuery(0.0, 0.0, 1.0)), 5.0 / 9.0) <
        1e-15);
  // point-mass law: exp(-d s)
  const GameParams det = make_params(1.0, 2.0, DeltaLaw::deterministic(0.5), 3, 4);
  CHECK(dist(gamma_joint(det, TransformQuery(1.0, 1.0, 2.0)), std::exp(-1.0)) <
        1e-15);
  // erlang law: (rate / (rate + s))^shape
  const GameParams erl = make_params(1.0, 2.0, DeltaLaw::erlang(2, 5.0), 3, 4);
  CHECK(dist(gamma_joint(erl, TransformQuery(0.0, 0.0, 1.0)),
             std::pow(5.0 / 9.0, 2)) < 1e-15);
}

TEST_CASE("total probability mass at (1,1,0)") {
  for (long m : {1L, 2L, 5L})
    for (long n : {1L, 3L, 7L}) {
      const GameParams p = make_params(0.7, 2.3, DeltaLaw::exponential(4.1), m, n);
      CHECK(dist(phi_closed(p, TransformQuery(1.0, 1.0, 0.0)), 1.0) <= 1e-12);
      CHECK(dist(phi_operator(p, TransformQuery(1.0, 1.0, 0.0)), 1.0) <= 1e-12);
    }
  // the operator route is exact at (1,1,0) for every law
  const GameParams det = make_params(1.0, 2.0, DeltaLaw::deterministic(0.3), 2, 2);
  CHECK(dist(phi_operator(det, TransformQuery(1.0, 1.0, 0.0)), 1.0) == 0.0);
  const GameParams erl = make_params(1.0, 2.0, DeltaLaw::erlang(3, 6.0), 2, 2);
  CHECK(dist(phi_operator(erl, TransformQuery(1.0, 1.0, 0.0)), 1.0) == 0.0);
}

TEST_CASE("unit-threshold game reduces to the one-step ratio") {
  const GameParams p = make_params(1.0, 2.0, DeltaLaw::exponential(5.0), 1, 1);
  const TransformQuery q(0.8, 0.8, 0.3);
  const Complex want =
      1.0 - (1.0 - gamma_joint(p, q)) /
                (1.0 - gamma_joint(p, TransformQuery(0.0, 0.0, 0.3)));
  CHECK(dist(phi_closed(p, q), want) < 1e-13);
  CHECK(dist(phi_operator(p, q), want) < 1e-13);
}

TEST_CASE("unit-threshold identity holds for every observation law") {
  // with M = N = 1 the operator collapses to evaluation at the origin, so
  // Phi = 1 - (1 - gamma(u,v,theta)) / (1 - gamma(0,0,theta)) for any law
  const GameParams laws[] = {
      make_params(1.0, 2.0, DeltaLaw::exponential(5.0), 1, 1),
      make_params(1.0, 2.0, DeltaLaw::deterministic(0.4), 1, 1),
      make_params(1.0, 2.0, DeltaLaw::erlang(4, 9.0), 1, 1),
  };
  for (const auto& p : laws) {
    for (double u : {0.0, 0.4, 0.9})
      for (double theta : {0.0, 0.7}) {
        const TransformQuery q(u, 0.8, theta);
        const Complex want =
            1.0 - (1.0 - gamma_joint(p, q)) /
                      (1.0 - gamma_joint(p, TransformQuery(0.0, 0.0, theta)));
        CHECK(dist(phi_operator(p, q), want) <= 1e-10);
      }
  }
}

TEST_CASE("closed form equals the operator route on a reference grid") {
  const GameParams p = reference();
  for (double u : {0.5, 0.8, 1.0})
    for (double v : {0.5, 0.8, 1.0})
      for (double theta : {0.0, 0.5, 1.0}) {
        const TransformQuery q(u, v, theta);
        const Complex closed = phi_closed(p, q);
        const Complex viaop = phi_operator(p, q);
        CHECK(dist(closed, viaop) <= 1e-9 * std::max(1.0, std::abs(closed)));
      }
}

TEST_CASE("analytic routes agree on the domain boundary") {
  // unit-circle arguments with imaginary theta: the regime the coefficient
  // extraction samples
  const GameParams p = reference(4, 3);
  for (int k = 0; k < 12; ++k) {
    const Complex u = std::polar(1.0, 2.0 * M_PI * k / 12.0);
    const Complex v = std::polar(1.0, 2.0 * M_PI * ((k + 5) % 12) / 12.0);
    const TransformQuery q(u, v, Complex(0.0, 0.4 * k - 2.0));
    const Complex closed = phi_closed(p, q);
    const Complex viaop = phi_operator(p, q);
    CHECK(dist(closed, viaop) <= 1e-9 * std::max(1.0, std::abs(closed)));
  }
}

TEST_CASE("closed form requires the exponential law") {
  const GameParams det = make_params(1.0, 2.0, DeltaLaw::deterministic(0.2), 3, 4);
  CHECK_THROWS_AS((void)phi_closed(det, TransformQuery(0.5, 0.5, 0.5)), Error);
  CHECK_THROWS_AS((void)marginal_tau_lst(det, 1.0), Error);
  CHECK_THROWS_AS((void)marginal_A_pgf(det, 0.5), Error);
  CHECK_THROWS_AS((void)marginal_B_pgf(det, 0.5), Error);
}

TEST_CASE("closed-form intermediates satisfy their algebraic relation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const GameParams p = reference(1 + rep % 5, 1 + rep % 7);
    const TransformQuery q(unit(rng), unit(rng), unit(rng) * 2.0);
    const auto cf = closed_form_intermediates(p, q);
    // b (p - mu v) = a p, both sides equal lambda u
    const Complex lhs = cf.b * (cf.p - p.mu * q.v);
    const Complex rhs = cf.a * cf.p;
    CHECK(dist(lhs, rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    if (q.theta.real() > 0.0) CHECK(std::abs(cf.b) < 1.0);
  }
}

TEST_CASE("transform modulus never exceeds 1 on the admissible domain") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const GameParams p = make_params(0.2 + 3.0 * unit(rng), 0.2 + 3.0 * unit(rng),
                                     DeltaLaw::exponential(0.5 + 5.0 * unit(rng)),
                                     1 + rep % 6, 1 + rep % 4);
    const Complex u = std::polar(unit(rng), 2.0 * M_PI * unit(rng));
    const Complex v = std::polar(unit(rng), 2.0 * M_PI * unit(rng));
    const Complex theta(3.0 * unit(rng), 6.0 * unit(rng) - 3.0);
    CHECK(std::abs(phi_closed(p, TransformQuery(u, v, theta))) <= 1.0 + 1e-12);
  }
}

TEST_CASE("marginal transforms specialize the joint one") {
  const GameParams p22 = reference(2, 2);
  CHECK(dist(marginal_tau_lst(p22, 0.0), 1.0) < 1e-14);
  CHECK(dist(marginal_tau_lst(p22, 1.0),
             phi_closed(p22, TransformQuery(1.0, 1.0, 1.0))) == 0.0);

  const GameParams p23 = reference(2, 3);
  CHECK(dist(marginal_A_pgf(p23, 1.0), 1.0) < 1e-14);
  CHECK(dist(marginal_A_pgf(p23, 0.5),
             phi_closed(p23, TransformQuery(0.5, 1.0, 0.0))) == 0.0);

  const GameParams p32 = reference(3, 2);
  CHECK(dist(marginal_B_pgf(p32, 1.0), 1.0) < 1e-14);
  CHECK(dist(marginal_B_pgf(p32, 0.5),
             phi_closed(p32, TransformQuery(1.0, 0.5, 0.0))) == 0.0);
}

TEST_CASE("single-sum marginal forms agree with the specializations") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (long m : {1L, 2L, 3L, 5L})
    for (long n : {1L, 2L, 4L}) {
      const GameParams p = reference(m, n);
      for (int i = 0; i < 10; ++i) {
        const Complex theta(5.0 * unit(rng), i % 2 ? unit(rng) : 0.0);
        const Complex u = std::polar(unit(rng), 2.0 * M_PI * unit(rng));
        const Complex v = std::polar(unit(rng), 2.0 * M_PI * unit(rng));
        CHECK(dist(marginal_tau_lst_sum_form(p, theta),
                   marginal_tau_lst(p, theta)) <= 1e-10);
        CHECK(dist(marginal_A_pgf_sum_form(p, u), marginal_A_pgf(p, u)) <= 1e-10);
        CHECK(dist(marginal_B_pgf_sum_form(p, v), marginal_B_pgf(p, v)) <= 1e-10);
      }
    }
}

TEST_CASE("marginal sums vanish at the boundary points") {
  const GameParams p = reference(4, 3);
  const auto mi = delgame::marginal_intermediates(p, 0.0, 1.0, 1.0);
  CHECK(std::abs(mi.f_sum) == 0.0);  // base is exactly 1 at theta = 0
  CHECK(std::abs(mi.g_sum) == 0.0);
  CHECK(std::abs(mi.h_sum) == 0.0);
  CHECK(dist(mi.b_marg, 1.0) == 0.0);
  CHECK(dist(marginal_tau_lst_sum_form(p, 0.0), 1.0) == 0.0);
  CHECK(dist(marginal_A_pgf_sum_form(p, 1.0), 1.0) == 0.0);
  CHECK(dist(marginal_B_pgf_sum_form(p, 1.0), 1.0) == 0.0);

  // away from the boundary the pieces recombine into the displayed forms
  const Complex v = 0.6;
  const auto mi2 = delgame::marginal_intermediates(p, 0.0, 1.0, v);
  const Complex c = p.mu * v / (p.lambda + p.mu);
  Complex cn = 1.0, bm = 1.0;
  for (long i = 0; i < p.threshold_b; ++i) cn *= c;
  for (long i = 0; i < p.threshold_a; ++i) bm *= mi2.b_marg;
  const Complex recombined =
      p.delta.rate / (p.delta.rate + p.mu * (1.0 - v)) * (bm + cn * mi2.h_sum);
  CHECK(dist(recombined, marginal_B_pgf(p, v)) <= 1e-12);
}

TEST_CASE("the ruin-time LST is strictly decreasing in real theta") {
  const GameParams p = reference(2, 2);
  double prev = 1.0;
  for (double theta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double value = marginal_tau_lst(p, theta).real();
    CHECK(value < prev);
    CHECK(value > 0.0);
    prev = value;
  }
}

TEST_CASE("operator route tracks simulation for non-exponential laws") {
  // the closed form does not exist here, so Monte Carlo is the oracle
  std::vector<std::pair<GameParams, const char*>> cases = {
      {make_params(1.0, 2.0, DeltaLaw::deterministic(0.4), 2, 3), "deterministic"},
      {make_params(1.0, 2.0, DeltaLaw::erlang(3, 7.5), 2, 3), "erlang"},
  };
  for (const auto& [p, label] : cases) {
    CAPTURE(label);
    delgame::SimConfig cfg;
    cfg.n_paths = 200000;
    cfg.seed = 99;
    cfg.query_points = {TransformQuery(0.7, 0.9, 0.3), TransformQuery(0.5, 0.5, 0.0),
                        TransformQuery(1.0, 0.8, 1.0)};
    const auto summary = delgame::simulate_batch(p, cfg);
    for (const auto& est : summary.functional_estimates) {
      const Complex exact = phi_operator(p, TransformQuery(est.u, est.v, est.theta));
      CHECK(std::abs(est.mean - exact) <= 3.5 * est.stderr_est + 1e-14);
    }
  }
}
