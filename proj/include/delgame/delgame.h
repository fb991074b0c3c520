/*
 * C API of the delayed-game analytics library.
 *
 * All entry points return DG_OK (0) on success or a negative-free positive
 * error code; on failure dg_last_error_message() carries a human-readable
 * description for the calling thread. Models are opaque handles created and
 * destroyed through this interface. Strings returned through char** must be
 * released with dg_string_free().
 */
#ifndef DELGAME_H
#define DELGAME_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DELGAME_BUILD_SHARED)
#define DELGAME_API __declspec(dllexport)
#else
#define DELGAME_API __declspec(dllimport)
#endif
#else
#define DELGAME_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  DG_OK = 0,
  DG_ERR_NON_POSITIVE_RATE = 1,
  DG_ERR_NON_INTEGER_THRESHOLD = 2,
  DG_ERR_THRESHOLD_TOO_SMALL = 3,
  DG_ERR_INVALID_QUERY = 4,
  DG_ERR_NOT_CLOSED_FORM_CAPABLE = 5,
  DG_ERR_SINGULAR_CONSTANT_TERM = 6,
  DG_ERR_TRUNCATION_TOO_SMALL = 7,
  DG_ERR_GRID_TOO_COARSE = 8,
  DG_ERR_POLES_TOO_CLOSE = 9,
  DG_ERR_NON_CONVERGENT = 10,
  DG_ERR_NO_CROSSING = 11,
  DG_ERR_MAX_OBSERVATIONS_EXCEEDED = 12,
  DG_ERR_INVALID_CONFIG = 13,
  DG_ERR_INVALID_ARGUMENT = 14,
  DG_ERR_INTERNAL = 99
};

enum {
  DG_DELTA_EXPONENTIAL = 0,
  DG_DELTA_DETERMINISTIC = 1,
  DG_DELTA_ERLANG = 2
};

enum { DG_MODE_INTERVAL = 0, DG_MODE_EVENT = 1 };

enum { DG_SIDE_A = 0, DG_SIDE_B = 1 };

typedef struct dg_model dg_model;

typedef struct {
  double re;
  double im;
} dg_complex;

DELGAME_API const char* dg_error_name(int code);
DELGAME_API const char* dg_last_error_message(void);

/* delta_param is the rate for exponential/erlang laws and the spacing for
 * the deterministic law; erlang_shape is ignored unless kind is erlang. */
DELGAME_API int dg_model_create(double lambda, double mu, int delta_kind,
                                double delta_param, int erlang_shape,
                                double threshold_a, double threshold_b,
                                dg_model** out);
DELGAME_API int dg_model_create_from_json(const char* json_text,
                                          dg_model** out);
DELGAME_API void dg_model_destroy(dg_model* model);
DELGAME_API int dg_model_closed_form_capable(const dg_model* model);
DELGAME_API int dg_model_to_json(const dg_model* model, char** out_json);
DELGAME_API void dg_string_free(char* s);

DELGAME_API int dg_gamma_joint(const dg_model* model, dg_complex u,
                               dg_complex v, dg_complex theta,
                               dg_complex* out);
DELGAME_API int dg_phi_closed(const dg_model* model, dg_complex u,
                              dg_complex v, dg_complex theta, dg_complex* out);
DELGAME_API int dg_phi_operator(const dg_model* model, dg_complex u,
                                dg_complex v, dg_complex theta,
                                dg_complex* out);
DELGAME_API int dg_marginal_tau_lst(const dg_model* model, dg_complex theta,
                                    dg_complex* out);
/* side: DG_SIDE_A evaluates E[u^{A_rho}], DG_SIDE_B evaluates E[v^{B_rho}]. */
DELGAME_API int dg_marginal_pgf(const dg_model* model, int side,
                                dg_complex point, dg_complex* out);

DELGAME_API int dg_tau_pdf(const dg_model* model, double t, double* out);
DELGAME_API int dg_tau_cdf(const dg_model* model, double t, double* out);
/* Fills out[i] = pdf(t0 + i*dt) for i in [0, n). */
DELGAME_API int dg_tau_pdf_grid(const dg_model* model, double t0, double dt,
                                size_t n, double* out);

/* Fills out[k] = P(side count at rho == k) for k in [0, max_k]. */
DELGAME_API int dg_pmf(const dg_model* model, int side, long max_k,
                       double* out);

/* query_uvt: n_queries (u, v, theta) triples, or NULL for none. */
DELGAME_API int dg_simulate_to_json(const dg_model* model, uint64_t n_paths,
                                    uint64_t seed, int mode,
                                    const double* query_uvt, size_t n_queries,
                                    char** out_json);

DELGAME_API int dg_validate_to_json(const dg_model* model, uint64_t n_paths,
                                    uint64_t seed, char** out_json,
                                    int* all_pass);

#ifdef __cplusplus
}
#endif

#endif /* DELGAME_H */
