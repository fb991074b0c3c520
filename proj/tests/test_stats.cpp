#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "delgame/stats.hpp"

TEST_CASE("regularized lower gamma against elementary identities") {
  for (double x : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    CHECK(delgame::regularized_gamma_p(1.0, x) ==
          doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
    CHECK(delgame::regularized_gamma_p(0.5, x) ==
          doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
  }
  CHECK(delgame::regularized_gamma_p(3.0, 0.0) == 0.0);
}

TEST_CASE("chi-square quantile inverts the cdf") {
  for (int df : {1, 4, 9, 30})
    for (double p : {0.5, 0.9, 0.99}) {
      const double x = delgame::chi_square_quantile(p, df);
      CHECK(delgame::chi_square_cdf(x, df) == doctest::Approx(p).epsilon(1e-9));
    }
  // textbook value
  CHECK(delgame::chi_square_quantile(0.99, 10) == doctest::Approx(23.209).epsilon(1e-3));
}

TEST_CASE("kolmogorov critical point at the 1% level") {
  const double k = delgame::kolmogorov_critical(0.01);
  CHECK(k == doctest::Approx(1.6276).epsilon(1e-3));
  CHECK(delgame::kolmogorov_survival(k) == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("ks statistic of a uniform sample") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> xs(20000);
  for (auto& x : xs) x = unit(rng);
  std::sort(xs.begin(), xs.end());
  const double d = delgame::ks_statistic(xs, [](double x) { return x; });
  CHECK(d < delgame::kolmogorov_critical(0.01) / std::sqrt(20000.0));
}

TEST_CASE("two-sample chi-square accepts same-law counts, rejects different") {
  std::mt19937_64 rng(7);
  std::poisson_distribution<long> pois_a(4.0), pois_c(5.0);
  std::vector<long> a(40, 0), b(40, 0), c(40, 0);
  for (int i = 0; i < 50000; ++i) {
    ++a[static_cast<size_t>(std::min<long>(pois_a(rng), 39))];
    ++b[static_cast<size_t>(std::min<long>(pois_a(rng), 39))];
    ++c[static_cast<size_t>(std::min<long>(pois_c(rng), 39))];
  }
  CHECK(delgame::chi_square_two_sample(a, b).p_value >= 0.01);
  CHECK(delgame::chi_square_two_sample(a, c).p_value < 1e-6);
}

TEST_CASE("total variation over mismatched supports") {
  CHECK(delgame::total_variation({0.5, 0.5}, {0.5, 0.5}) == 0.0);
  CHECK(delgame::total_variation({1.0}, {0.0, 1.0}) == doctest::Approx(1.0));
  CHECK(delgame::total_variation({0.6, 0.4}, {0.4, 0.6}) == doctest::Approx(0.2));
}

TEST_CASE("adaptive quadrature on known integrals") {
  CHECK(delgame::integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                    M_PI, 1e-12) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(delgame::integrate_adaptive([](double x) { return std::exp(-x); }, 0.0,
                                    40.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("quadrature terminates on noisy integrands below the tolerance") {
  // tolerance below the noise floor must degrade, not recurse forever
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> jitter(-1e-12, 1e-12);
  const double value = delgame::integrate_adaptive(
      [&](double x) { return 1.0 + 0.0 * x + jitter(rng); }, 0.0, 1.0, 1e-18);
  CHECK(value == doctest::Approx(1.0).epsilon(1e-9));
}
