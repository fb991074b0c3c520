#include "delgame/delgame.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "delgame/config.hpp"
#include "delgame/inversion.hpp"
#include "delgame/simulate.hpp"
#include "delgame/transforms.hpp"
#include "delgame/validate.hpp"

struct dg_model {
  delgame::GameParams params;
};

namespace {

thread_local std::string g_last_error;

int code_of(delgame::ErrorCode c) {
  using EC = delgame::ErrorCode;
  switch (c) {
    case EC::NonPositiveRate: return DG_ERR_NON_POSITIVE_RATE;
    case EC::NonIntegerThreshold: return DG_ERR_NON_INTEGER_THRESHOLD;
    case EC::ThresholdTooSmall: return DG_ERR_THRESHOLD_TOO_SMALL;
    case EC::InvalidQuery: return DG_ERR_INVALID_QUERY;
    case EC::NotClosedFormCapable: return DG_ERR_NOT_CLOSED_FORM_CAPABLE;
    case EC::SingularConstantTerm: return DG_ERR_SINGULAR_CONSTANT_TERM;
    case EC::TruncationTooSmall: return DG_ERR_TRUNCATION_TOO_SMALL;
    case EC::GridTooCoarse: return DG_ERR_GRID_TOO_COARSE;
    case EC::PolesTooClose: return DG_ERR_POLES_TOO_CLOSE;
    case EC::NonConvergent: return DG_ERR_NON_CONVERGENT;
    case EC::NoCrossing: return DG_ERR_NO_CROSSING;
    case EC::MaxObservationsExceeded: return DG_ERR_MAX_OBSERVATIONS_EXCEEDED;
    case EC::InvalidConfig: return DG_ERR_INVALID_CONFIG;
    case EC::InvalidArgument: return DG_ERR_INVALID_ARGUMENT;
  }
  return DG_ERR_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return DG_OK;
  } catch (const delgame::Error& e) {
    g_last_error = e.what();
    return code_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DG_ERR_INTERNAL;
  }
}

delgame::Complex from_c(dg_complex z) { return {z.re, z.im}; }

dg_complex to_c(delgame::Complex z) { return {z.real(), z.imag()}; }

int require(bool ok, const char* msg) {
  if (!ok) {
    g_last_error = msg;
    return DG_ERR_INVALID_ARGUMENT;
  }
  return DG_OK;
}

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* dg_error_name(int code) {
  switch (code) {
    case DG_OK: return "OK";
    case DG_ERR_NON_POSITIVE_RATE: return "NonPositiveRate";
    case DG_ERR_NON_INTEGER_THRESHOLD: return "NonIntegerThreshold";
    case DG_ERR_THRESHOLD_TOO_SMALL: return "ThresholdTooSmall";
    case DG_ERR_INVALID_QUERY: return "InvalidQuery";
    case DG_ERR_NOT_CLOSED_FORM_CAPABLE: return "NotClosedFormCapable";
    case DG_ERR_SINGULAR_CONSTANT_TERM: return "SingularConstantTerm";
    case DG_ERR_TRUNCATION_TOO_SMALL: return "TruncationTooSmall";
    case DG_ERR_GRID_TOO_COARSE: return "GridTooCoarse";
    case DG_ERR_POLES_TOO_CLOSE: return "PolesTooClose";
    case DG_ERR_NON_CONVERGENT: return "NonConvergent";
    case DG_ERR_NO_CROSSING: return "NoCrossing";
    case DG_ERR_MAX_OBSERVATIONS_EXCEEDED: return "MaxObservationsExceeded";
    case DG_ERR_INVALID_CONFIG: return "InvalidConfig";
    case DG_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    default: return "Internal";
  }
}

const char* dg_last_error_message(void) { return g_last_error.c_str(); }

int dg_model_create(double lambda, double mu, int delta_kind,
                    double delta_param, int erlang_shape, double threshold_a,
                    double threshold_b, dg_model** out) {
  if (int rc = require(out != nullptr, "out must not be null")) return rc;
  *out = nullptr;
  return guarded([&] {
    delgame::RawParams raw;
    raw.lambda = lambda;
    raw.mu = mu;
    switch (delta_kind) {
      case DG_DELTA_EXPONENTIAL:
        raw.delta = delgame::DeltaLaw::exponential(delta_param);
        break;
      case DG_DELTA_DETERMINISTIC:
        raw.delta = delgame::DeltaLaw::deterministic(delta_param);
        break;
      case DG_DELTA_ERLANG:
        raw.delta = delgame::DeltaLaw::erlang(erlang_shape, delta_param);
        break;
      default:
        delgame::fail(delgame::ErrorCode::InvalidArgument,
                      "unknown delta law kind");
    }
    raw.threshold_a = threshold_a;
    raw.threshold_b = threshold_b;
    *out = new dg_model{delgame::validate_params(raw)};
  });
}

int dg_model_create_from_json(const char* json_text, dg_model** out) {
  if (int rc = require(out != nullptr && json_text != nullptr,
                       "json_text and out must not be null"))
    return rc;
  *out = nullptr;
  return guarded([&] {
    *out = new dg_model{delgame::params_from_json_text(json_text)};
  });
}

void dg_model_destroy(dg_model* model) { delete model; }

int dg_model_closed_form_capable(const dg_model* model) {
  if (model == nullptr) return 0;
  return model->params.closed_form_capable() ? 1 : 0;
}

int dg_model_to_json(const dg_model* model, char** out_json) {
  if (int rc = require(model != nullptr && out_json != nullptr,
                       "model and out_json must not be null"))
    return rc;
  return guarded([&] {
    *out_json = dup_string(delgame::params_to_json_text(model->params));
  });
}

void dg_string_free(char* s) { delete[] s; }

#define DG_EVAL3(fn, expr)                                                     \
  int fn(const dg_model* model, dg_complex u, dg_complex v, dg_complex theta,  \
         dg_complex* out) {                                                    \
    if (int rc = require(model != nullptr && out != nullptr,                   \
                         "model and out must not be null"))                    \
      return rc;                                                               \
    return guarded([&] {                                                       \
      const delgame::TransformQuery q(from_c(u), from_c(v), from_c(theta));    \
      *out = to_c(expr);                                                       \
    });                                                                        \
  }

DG_EVAL3(dg_gamma_joint, delgame::gamma_joint(model->params, q))
DG_EVAL3(dg_phi_closed, delgame::phi_closed(model->params, q))
DG_EVAL3(dg_phi_operator, delgame::phi_operator(model->params, q))

#undef DG_EVAL3

int dg_marginal_tau_lst(const dg_model* model, dg_complex theta,
                        dg_complex* out) {
  if (int rc = require(model != nullptr && out != nullptr,
                       "model and out must not be null"))
    return rc;
  return guarded([&] {
    *out = to_c(delgame::marginal_tau_lst(model->params, from_c(theta)));
  });
}

int dg_marginal_pgf(const dg_model* model, int side, dg_complex point,
                    dg_complex* out) {
  if (int rc = require(model != nullptr && out != nullptr,
                       "model and out must not be null"))
    return rc;
  if (int rc = require(side == DG_SIDE_A || side == DG_SIDE_B, "bad side"))
    return rc;
  return guarded([&] {
    *out = to_c(side == DG_SIDE_A
                    ? delgame::marginal_A_pgf(model->params, from_c(point))
                    : delgame::marginal_B_pgf(model->params, from_c(point)));
  });
}

int dg_tau_pdf(const dg_model* model, double t, double* out) {
  if (int rc = require(model != nullptr && out != nullptr,
                       "model and out must not be null"))
    return rc;
  return guarded([&] { *out = delgame::TauDensity(model->params).pdf(t); });
}

int dg_tau_cdf(const dg_model* model, double t, double* out) {
  if (int rc = require(model != nullptr && out != nullptr,
                       "model and out must not be null"))
    return rc;
  return guarded([&] { *out = delgame::TauDensity(model->params).cdf(t); });
}

int dg_tau_pdf_grid(const dg_model* model, double t0, double dt, size_t n,
                    double* out) {
  if (int rc = require(model != nullptr && (out != nullptr || n == 0),
                       "model and out must not be null"))
    return rc;
  if (n == 0) return DG_OK;
  return guarded([&] {
    const delgame::DistributionTable table =
        delgame::tau_pdf_table(model->params, t0, dt, static_cast<long>(n));
    for (size_t i = 0; i < n; ++i) out[i] = table.values[i];
  });
}

int dg_pmf(const dg_model* model, int side, long max_k, double* out) {
  if (int rc = require(model != nullptr && out != nullptr,
                       "model and out must not be null"))
    return rc;
  if (int rc = require(side == DG_SIDE_A || side == DG_SIDE_B, "bad side"))
    return rc;
  return guarded([&] {
    const auto pgf = [&](delgame::Complex z) {
      return side == DG_SIDE_A ? delgame::marginal_A_pgf(model->params, z)
                               : delgame::marginal_B_pgf(model->params, z);
    };
    const delgame::DistributionTable table = delgame::pgf_to_pmf(pgf, max_k);
    for (long k = 0; k <= max_k; ++k)
      out[k] = table.values[static_cast<size_t>(k)];
  });
}

int dg_simulate_to_json(const dg_model* model, uint64_t n_paths, uint64_t seed,
                        int mode, const double* query_uvt, size_t n_queries,
                        char** out_json) {
  if (int rc = require(model != nullptr && out_json != nullptr,
                       "model and out_json must not be null"))
    return rc;
  if (int rc = require(mode == DG_MODE_INTERVAL || mode == DG_MODE_EVENT,
                       "bad simulation mode"))
    return rc;
  if (int rc = require(n_queries == 0 || query_uvt != nullptr,
                       "query_uvt must not be null when n_queries > 0"))
    return rc;
  return guarded([&] {
    delgame::SimConfig cfg;
    cfg.n_paths = static_cast<long>(n_paths);
    cfg.seed = seed;
    cfg.mode = mode == DG_MODE_INTERVAL ? delgame::SimMode::Interval
                                        : delgame::SimMode::Event;
    for (size_t i = 0; i < n_queries; ++i)
      cfg.query_points.emplace_back(query_uvt[3 * i], query_uvt[3 * i + 1],
                                    query_uvt[3 * i + 2]);
    const delgame::SimSummary summary = delgame::simulate_batch(model->params, cfg);
    *out_json = dup_string(delgame::summary_to_json(summary, model->params));
  });
}

int dg_validate_to_json(const dg_model* model, uint64_t n_paths, uint64_t seed,
                        char** out_json, int* all_pass) {
  if (int rc = require(model != nullptr && out_json != nullptr,
                       "model and out_json must not be null"))
    return rc;
  return guarded([&] {
    delgame::ValidationOptions opt;
    opt.n_paths = static_cast<long>(n_paths);
    opt.seed = seed;
    const auto results = delgame::run_validation(model->params, opt);
    *out_json = dup_string(delgame::validation_to_json(results));
    if (all_pass != nullptr) *all_pass = delgame::all_passed(results) ? 1 : 0;
  });
}

}  // extern "C"
