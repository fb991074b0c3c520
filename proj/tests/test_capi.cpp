#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <delgame/delgame.h>

#include <cmath>
#include <string>
#include <vector>

namespace {

const char* kReferenceConfig = R"({
  "lambda": 1.0, "mu": 2.0,
  "delta_law": {"type": "exponential", "rate": 5.0},
  "M": 3, "N": 4
})";

struct Model {
  dg_model* h = nullptr;
  ~Model() { dg_model_destroy(h); }
};

}  // namespace

TEST_CASE("model creation and typed error codes") {
  Model m;
  CHECK(dg_model_create(1.0, 2.0, DG_DELTA_EXPONENTIAL, 5.0, 0, 3, 4, &m.h) == DG_OK);
  CHECK(dg_model_closed_form_capable(m.h) == 1);

  dg_model* bad = nullptr;
  CHECK(dg_model_create(-1.0, 2.0, DG_DELTA_EXPONENTIAL, 5.0, 0, 3, 4, &bad) ==
        DG_ERR_NON_POSITIVE_RATE);
  CHECK(bad == nullptr);
  CHECK(std::string(dg_last_error_message()).size() > 0);

  CHECK(dg_model_create(1.0, 2.0, DG_DELTA_EXPONENTIAL, 5.0, 0, 2.5, 4, &bad) ==
        DG_ERR_NON_INTEGER_THRESHOLD);
  CHECK(dg_model_create(1.0, 2.0, DG_DELTA_EXPONENTIAL, 5.0, 0, 0, 4, &bad) ==
        DG_ERR_THRESHOLD_TOO_SMALL);

  Model det;
  CHECK(dg_model_create(1.0, 2.0, DG_DELTA_DETERMINISTIC, 0.25, 0, 3, 4, &det.h) ==
        DG_OK);
  CHECK(dg_model_closed_form_capable(det.h) == 0);
  dg_complex out{};
  CHECK(dg_phi_closed(det.h, {0.5, 0}, {0.5, 0}, {0.5, 0}, &out) ==
        DG_ERR_NOT_CLOSED_FORM_CAPABLE);
}

TEST_CASE("json round trip and config schema errors") {
  Model m;
  CHECK(dg_model_create_from_json(kReferenceConfig, &m.h) == DG_OK);
  char* js = nullptr;
  REQUIRE(dg_model_to_json(m.h, &js) == DG_OK);
  Model m2;
  CHECK(dg_model_create_from_json(js, &m2.h) == DG_OK);
  dg_string_free(js);

  dg_model* bad = nullptr;
  CHECK(dg_model_create_from_json("{not json", &bad) == DG_ERR_INVALID_CONFIG);
  CHECK(dg_model_create_from_json(
            R"({"lambda":1,"mu":2,"delta_law":{"type":"exponential","rate":5},"M":3,"N":4,"extra":1})",
            &bad) == DG_ERR_INVALID_CONFIG);
  CHECK(dg_model_create_from_json(
            R"({"lambda":1,"mu":2,"delta_law":{"type":"weibull","rate":5},"M":3,"N":4})",
            &bad) == DG_ERR_INVALID_CONFIG);
}

TEST_CASE("transform evaluation through the C surface") {
  Model m;
  REQUIRE(dg_model_create_from_json(kReferenceConfig, &m.h) == DG_OK);
  dg_complex gamma{}, closed{}, viaop{};
  const dg_complex one{1.0, 0.0}, zero{0.0, 0.0};
  CHECK(dg_gamma_joint(m.h, one, one, zero, &gamma) == DG_OK);
  CHECK(gamma.re == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dg_phi_closed(m.h, one, one, zero, &closed) == DG_OK);
  CHECK(closed.re == doctest::Approx(1.0).epsilon(1e-14));

  const dg_complex u{0.9, 0.0}, v{0.7, 0.0}, th{0.5, 0.0};
  CHECK(dg_phi_closed(m.h, u, v, th, &closed) == DG_OK);
  CHECK(dg_phi_operator(m.h, u, v, th, &viaop) == DG_OK);
  CHECK(std::hypot(closed.re - viaop.re, closed.im - viaop.im) <= 1e-9);

  dg_complex out{};
  CHECK(dg_phi_closed(m.h, {2.0, 0.0}, one, zero, &out) == DG_ERR_INVALID_QUERY);

  dg_complex lst{};
  CHECK(dg_marginal_tau_lst(m.h, {0.5, 0.0}, &lst) == DG_OK);
  dg_complex joint{};
  CHECK(dg_phi_closed(m.h, one, one, {0.5, 0.0}, &joint) == DG_OK);
  CHECK(lst.re == doctest::Approx(joint.re).epsilon(1e-14));
}

TEST_CASE("distribution surfaces") {
  Model m;
  REQUIRE(dg_model_create_from_json(kReferenceConfig, &m.h) == DG_OK);

  const long max_k = 60;
  std::vector<double> pmf(max_k + 1);
  CHECK(dg_pmf(m.h, DG_SIDE_A, max_k, pmf.data()) == DG_OK);
  double mass = 0.0;
  for (double v : pmf) {
    CHECK(v >= 0.0);
    mass += v;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

  double pdf1 = 0.0;
  CHECK(dg_tau_pdf(m.h, 1.0, &pdf1) == DG_OK);
  CHECK(pdf1 > 0.0);
  double grid[4] = {};
  CHECK(dg_tau_pdf_grid(m.h, 0.7, 0.1, 4, grid) == DG_OK);
  double pdf2 = 0.0;
  CHECK(dg_tau_pdf(m.h, 0.7, &pdf2) == DG_OK);
  CHECK(grid[0] == pdf2);
  double cdf = 0.0;
  CHECK(dg_tau_cdf(m.h, 1e9, &cdf) == DG_OK);
  CHECK(cdf == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("simulation json is deterministic through the C surface") {
  Model m;
  REQUIRE(dg_model_create_from_json(kReferenceConfig, &m.h) == DG_OK);
  const double queries[6] = {0.8, 0.8, 0.5, 1.0, 1.0, 0.0};
  char *a = nullptr, *b = nullptr;
  CHECK(dg_simulate_to_json(m.h, 20000, 42, DG_MODE_INTERVAL, queries, 2, &a) == DG_OK);
  CHECK(dg_simulate_to_json(m.h, 20000, 42, DG_MODE_INTERVAL, queries, 2, &b) == DG_OK);
  CHECK(std::string(a) == std::string(b));
  CHECK(std::string(a).find("\"win_counts\"") != std::string::npos);
  dg_string_free(a);
  dg_string_free(b);
}
