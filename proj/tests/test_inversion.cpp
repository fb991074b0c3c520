#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "delgame/inversion.hpp"
#include "delgame/stats.hpp"
#include "delgame/transforms.hpp"

using delgame::Complex;
using delgame::DeltaLaw;
using delgame::Error;
using delgame::ErrorCode;
using delgame::GameParams;
using delgame::RationalLstTerm;

namespace {

GameParams reference(long m, long n) {
  delgame::RawParams raw;
  raw.lambda = 1.0;
  raw.mu = 2.0;
  raw.delta = DeltaLaw::exponential(5.0);
  raw.threshold_a = static_cast<double>(m);
  raw.threshold_b = static_cast<double>(n);
  return delgame::validate_params(raw);
}

}  // namespace

TEST_CASE("erlang_tail basics") {
  CHECK(delgame::erlang_tail(1, 0.0) == 0.0);
  CHECK(delgame::erlang_tail(1, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(delgame::erlang_tail(2, 1.0) ==
        doctest::Approx(1.0 - 2.0 * std::exp(-1.0)).epsilon(1e-14));
  // negative arguments are legitimate for the signed algebra
  CHECK(delgame::erlang_tail(1, -1.0) == doctest::Approx(1.0 - std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("two-pole inversion formula") {
  // m = 1 collapses to the elementary difference of exponentials
  for (double t : {0.0, 0.3, 1.0, 4.0}) {
    const double want = (std::exp(-t) - std::exp(-2.0 * t)) / (2.0 - 1.0);
    CHECK(delgame::invert_gamma_erlang(1.0, 2.0, 1, t) ==
          doctest::Approx(want).epsilon(1e-13));
  }
  CHECK(delgame::invert_gamma_erlang(1.0, 2.0, 3, 0.0) == 0.0);
  CHECK(delgame::invert_gamma_erlang(2.0, 0.5, 4, 0.0) == 0.0);
  CHECK_THROWS_AS((void)delgame::invert_gamma_erlang(2.0, 2.0, 1, 1.0), Error);

  // m = 3 against the numeric oracle, poles in both orders
  for (double t : {0.5, 1.0, 2.0}) {
    for (auto [g, l] : {std::pair{1.0, 2.0}, std::pair{5.0, 1.0}}) {
      const auto transform = [&](Complex th) {
        return 1.0 / ((g + th) * (l + th) * (l + th) * (l + th));
      };
      CHECK(delgame::invert_gamma_erlang(g, l, 3, t) ==
            doctest::Approx(delgame::laplace_invert_numeric(transform, t))
                .epsilon(1e-8));
    }
  }
}

TEST_CASE("three-pole residue inversion") {
  SUBCASE("single pole") {
    RationalLstTerm term;
    term.gamma_pole = 1.5;
    for (double t : {0.0, 0.7, 3.0})
      CHECK(delgame::invert_rational_term(term, t) ==
            doctest::Approx(std::exp(-1.5 * t)).epsilon(1e-14));
  }
  SUBCASE("simple three-pole partial fractions") {
    RationalLstTerm term;
    term.gamma_pole = 1.0;
    term.pole1 = 2.0;
    term.mult1 = 1;
    term.pole2 = 3.0;
    term.mult2 = 1;
    // residues: 1/2, -1, 1/2
    const double t = 1.0;
    const double want =
        0.5 * std::exp(-t) - std::exp(-2.0 * t) + 0.5 * std::exp(-3.0 * t);
    CHECK(delgame::invert_rational_term(term, t) ==
          doctest::Approx(want).epsilon(1e-13));
    CHECK(want == doctest::Approx(0.07349797153304044).epsilon(1e-12));
    const auto transform = [&](Complex th) {
      return 1.0 / ((1.0 + th) * (2.0 + th) * (3.0 + th));
    };
    CHECK(delgame::invert_rational_term(term, t) ==
          doctest::Approx(delgame::laplace_invert_numeric(transform, t))
              .epsilon(1e-8));
  }
  SUBCASE("value at t = 0 vanishes when the total degree exceeds 1") {
    RationalLstTerm term;
    term.gamma_pole = 1.0;
    term.pole1 = 2.5;
    term.mult1 = 4;
    term.pole2 = 4.0;
    term.mult2 = 2;
    term.coeff = 1.0 * std::pow(2.5, 4) * std::pow(4.0, 2);
    CHECK(std::abs(delgame::invert_rational_term(term, 0.0)) < 1e-9);
  }
  SUBCASE("confluent poles are rejected") {
    RationalLstTerm term;
    term.gamma_pole = 2.0;
    term.pole1 = 2.0 + 1e-12;
    term.mult1 = 1;
    CHECK_THROWS_AS((void)delgame::invert_rational_term(term, 1.0), Error);
  }
  SUBCASE("small-t regime where the residue representation cancels") {
    // high multiplicities with close-by poles: the pole contributions are
    // ~1e10 while the value is ~1e-10, so the ascending expansion must take
    // over; reference values from a 50-digit inversion
    RationalLstTerm term;
    term.gamma_pole = 8.3831;
    term.pole1 = 9.0727;
    term.mult1 = 3;
    term.pole2 = 7.3618;
    term.mult2 = 7;
    term.coeff = term.gamma_pole * std::pow(term.pole1, 3) * std::pow(term.pole2, 7);
    CHECK(std::abs(delgame::invert_rational_term(term, 0.0534) -
                   2.49733865597e-10) <= 1e-16);
    CHECK(std::abs(delgame::invert_rational_term(term, 0.2561) -
                   0.000323217254634) <= 1e-12);
    CHECK(std::abs(delgame::invert_rational_term(term, 0.7305) -
                   0.271890154573) <= 1e-8);
    CHECK(std::abs(delgame::invert_rational_term(term, 2.0) -
                   0.298745886527) <= 1e-8);
  }
}

TEST_CASE("numeric Laplace inversion on known pairs") {
  const auto exp1 = [](Complex th) { return 1.0 / (th + 1.0); };
  CHECK(delgame::laplace_invert_numeric(exp1, 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-8));

  const auto ramp = [](Complex th) { return 1.0 / (th * th); };
  CHECK(delgame::laplace_invert_numeric(ramp, 2.0) ==
        doctest::Approx(2.0).epsilon(1e-8));

  const auto twopole = [](Complex th) { return 1.0 / ((th + 1.0) * (th + 2.0)); };
  CHECK(delgame::laplace_invert_numeric(twopole, 0.5) ==
        doctest::Approx(std::exp(-0.5) - std::exp(-1.0)).epsilon(1e-8));
  CHECK(std::exp(-0.5) - std::exp(-1.0) ==
        doctest::Approx(0.23865121854119108).epsilon(1e-14));

  // a transform that explodes along the contour must be reported, not returned
  const auto diverging = [](Complex th) { return std::exp(th); };
  CHECK_THROWS_AS((void)delgame::laplace_invert_numeric(diverging, 1.0), Error);
}

TEST_CASE("ruin-time density: normalization, oracle, moment") {
  const GameParams p = reference(2, 2);
  const delgame::TauDensity density(p);

  SUBCASE("integrates to one") {
    double t_hi = 10.0;
    while (density.cdf(t_hi) < 1.0 - 1e-9) t_hi *= 2.0;
    const double integral = delgame::integrate_adaptive(
        [&](double t) { return density.pdf(t); }, 0.0, t_hi, 1e-9);
    CHECK(std::abs(integral - 1.0) <= 1e-6);
  }

  SUBCASE("nonnegative and matches the numeric inversion pointwise") {
    const auto lst = [&](Complex th) {
      return delgame::detail::phi_closed_eval(p, 1.0, 1.0, th);
    };
    for (int i = 0; i <= 50; ++i) {
      const double t = 0.01 + (10.0 - 0.01) * i / 50.0;
      const double exact = density.pdf(t);
      CHECK(exact >= -1e-9);
      CHECK(std::abs(exact - delgame::laplace_invert_numeric(lst, t)) <= 1e-6);
    }
  }

  SUBCASE("cdf matches the quadrature of the pdf") {
    for (double t : {0.5, 1.0, 2.5}) {
      const double quad = delgame::integrate_adaptive(
          [&](double s) { return density.pdf(s); }, 0.0, t, 1e-10);
      CHECK(density.cdf(t) == doctest::Approx(quad).epsilon(1e-8));
    }
  }

  SUBCASE("closed-form mean matches the LST derivative and the quadrature") {
    // central difference of the LST at 0 (evaluated just off the axis where
    // the rational forms stay analytic)
    const double h = 1e-5;
    const double diff =
        -(delgame::detail::phi_closed_eval(p, 1.0, 1.0, h).real() -
          delgame::detail::phi_closed_eval(p, 1.0, 1.0, -h).real()) /
        (2.0 * h);
    const double quad = delgame::integrate_adaptive(
        [&](double t) { return t * density.pdf(t); }, 0.0, 64.0, 1e-10);
    CHECK(density.mean() == doctest::Approx(diff).epsilon(1e-4));
    CHECK(density.mean() == doctest::Approx(quad).epsilon(1e-6));
  }

  SUBCASE("pole confluence is rejected") {
    delgame::RawParams raw;
    raw.lambda = 5.0;  // collides with the observation rate
    raw.mu = 2.0;
    raw.delta = DeltaLaw::exponential(5.0);
    raw.threshold_a = 2;
    raw.threshold_b = 2;
    CHECK_THROWS_AS(delgame::TauDensity{delgame::validate_params(raw)}, Error);
  }
}

TEST_CASE("pgf coefficient extraction") {
  SUBCASE("monomial is a point mass") {
    const auto table = delgame::pgf_to_pmf(
        [](Complex u) { return u * u * u; }, 6);
    for (long k = 0; k <= 6; ++k)
      CHECK(table.values[static_cast<size_t>(k)] ==
            doctest::Approx(k == 3 ? 1.0 : 0.0).epsilon(1e-12));
    CHECK(table.max_imag_residue < 1e-10);
  }
  SUBCASE("fair coin") {
    const auto table = delgame::pgf_to_pmf(
        [](Complex u) { return 0.5 + 0.5 * u; }, 4);
    CHECK(table.values[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(table.values[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(table.values[2] == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("geometric pmf round-trips through its pgf") {
    const double q = 0.35;
    const auto pgf = [&](Complex u) { return (1.0 - q) / (1.0 - q * u); };
    const auto table = delgame::pgf_to_pmf(pgf, 80);
    for (long k = 0; k <= 20; ++k)
      CHECK(table.values[static_cast<size_t>(k)] ==
            doctest::Approx((1.0 - q) * std::pow(q, k)).epsilon(1e-10));
    CHECK(std::abs(table.total_mass() - 1.0) <= 1e-9);
    // applying the pmf back reproduces the pgf on test points
    for (double u : {0.3, 0.9, -0.5}) {
      Complex acc = 0.0;
      for (size_t k = 0; k < table.values.size(); ++k)
        acc += table.values[k] * std::pow(u, static_cast<double>(k));
      CHECK(std::abs(acc - pgf(u)) <= 1e-8);
    }
  }
  SUBCASE("explicit coarse grids are rejected") {
    CHECK_THROWS_AS((void)delgame::pgf_to_pmf(
                        [](Complex u) { return u; }, 10, 16),
                    Error);
  }
}

TEST_CASE("ruin-time density stays accurate for ill-conditioned rates") {
  // nearly coincident poles and high thresholds: the merged residue route
  // cancels badly, so the complementary-form cdf and the ascending pdf
  // route must carry the evaluation
  delgame::RawParams raw;
  raw.lambda = 9.5;
  raw.mu = 0.7;
  raw.delta = DeltaLaw::exponential(9.9);
  raw.threshold_a = 6;
  raw.threshold_b = 6;
  const GameParams p = delgame::validate_params(raw);
  const delgame::TauDensity density(p);

  CHECK(std::abs(density.cdf(1e9) - 1.0) <= 1e-12);
  CHECK(std::abs(density.cdf(50.0) - 1.0) <= 1e-12);

  const auto lst = [&](Complex th) {
    return delgame::detail::phi_closed_eval(p, 1.0, 1.0, th);
  };
  for (double t : {0.01, 0.05, 0.2, 0.5, 1.0, 2.0})
    CHECK(std::abs(density.pdf(t) - delgame::laplace_invert_numeric(lst, t)) <=
          1e-6);

  for (double t : {0.2, 0.5}) {
    const double quad = delgame::integrate_adaptive(
        [&](double s) { return density.pdf(s); }, 0.0, t, 1e-10);
    CHECK(std::abs(density.cdf(t) - quad) <= 1e-9);
  }

  // monotone on a coarse grid despite the route switching
  double prev = 0.0;
  for (double t = 0.0; t <= 6.0; t += 0.05) {
    const double c = density.cdf(t);
    CHECK(c >= prev - 1e-9);
    prev = c;
  }
}

TEST_CASE("sampled pdf table applies the clip policy and matches the density") {
  const GameParams p = reference(3, 4);
  const auto table = delgame::tau_pdf_table(p, 0.0, 0.05, 201);
  const delgame::TauDensity density(p);
  CHECK(table.kind == delgame::DistributionTable::Kind::Pdf);
  CHECK_FALSE(table.empirical);
  CHECK(table.clipped_mass <= 1e-9);
  for (size_t i = 0; i < table.values.size(); ++i) {
    CHECK(table.values[i] >= 0.0);
    CHECK(std::abs(table.values[i] - std::max(density.pdf(table.support[i]), 0.0)) <=
          1e-12);
  }
  CHECK_THROWS_AS((void)delgame::tau_pdf_table(p, -1.0, 0.1, 5), Error);
}

TEST_CASE("casualty pmfs from the marginal pgfs are proper distributions") {
  for (auto [m, n] : {std::pair{2L, 2L}, std::pair{3L, 4L}}) {
    const GameParams p = reference(m, n);
    for (int side = 0; side < 2; ++side) {
      const auto pgf = [&](Complex z) {
        return side == 0 ? marginal_A_pgf(p, z) : marginal_B_pgf(p, z);
      };
      const auto table = delgame::pgf_to_pmf(pgf, m + n + 60);
      CHECK(table.clipped_mass <= 1e-9);
      CHECK(std::abs(table.total_mass() - 1.0) <= 1e-9);
      CHECK(table.max_imag_residue <= 1e-10);
    }
  }
}
