/* Copyright The airgap authors. */
/* SPDX-License-Identifier: Apache-2.0 */

/*
 * C interface of the airgap library. All objects are opaque handles owned by the caller and
 * released with the matching *_free function. Every fallible call returns an ag_status; on
 * failure ag_last_error() holds a message for the calling thread until its next failing call.
 */

#ifndef AIRGAP_H
#define AIRGAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(AIRGAP_BUILDING)
#define AG_API __declspec(dllexport)
#else
#define AG_API __declspec(dllimport)
#endif
#else
#define AG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ag_status
{
  AG_OK = 0,
  AG_ERR_INVALID_ARGUMENT = 1,
  AG_ERR_INVALID_GEOMETRY = 2,
  AG_ERR_INVALID_SPEC = 3,
  AG_ERR_PARSE = 4,
  AG_ERR_VALIDATION = 5,
  AG_ERR_CONFIGURATION = 6,
  AG_ERR_UNSUPPORTED_GRID = 7,
  AG_ERR_DOMAIN = 8,
  AG_ERR_SOLVER = 9,
  AG_ERR_IO = 10,
  AG_ERR_VERIFICATION = 11,
  AG_ERR_INTERNAL = 12
} ag_status;

typedef struct ag_config ag_config;
typedef struct ag_mesh ag_mesh;
typedef struct ag_operator ag_operator;

AG_API const char *ag_version(void);
AG_API const char *ag_status_string(ag_status status);
AG_API const char *ag_last_error(void);

/* Strings returned through char ** out-parameters. */
AG_API void ag_string_free(char *s);

/* Configuration */

AG_API ag_status ag_config_load(const char *path, ag_config **out);
/* base_dir resolves relative mesh paths; may be NULL. */
AG_API ag_status ag_config_parse(const char *text, const char *base_dir, ag_config **out);
/* Built-in eight-pole bearing scenario. */
AG_API ag_status ag_config_default(ag_config **out);
AG_API ag_status ag_config_default_text(char **out);
AG_API ag_status ag_config_hash(const ag_config *config, uint64_t *out);
AG_API void ag_config_free(ag_config *config);

/* Runs */

typedef struct ag_run_options
{
  const char *out_dir; /* NULL keeps the configured directory */
  int snapshot_every;  /* negative keeps the configured interval */
} ag_run_options;

/* options may be NULL. summary_json receives a JSON document (free with ag_string_free). */
AG_API ag_status ag_run_generate(const ag_config *config, const ag_run_options *options,
                                 char **summary_json);
AG_API ag_status ag_run_solve(const ag_config *config, const ag_run_options *options,
                              char **summary_json);
/* The report is returned even when a check fails; the status is then AG_ERR_VERIFICATION. */
AG_API ag_status ag_run_verify(const ag_config *config, char **report_json);

/* Meshes */

AG_API ag_status ag_mesh_generate_annulus(double r_inner, double r_outer, int n_boundary,
                                          int n_layers, int region_tag, ag_mesh **out);
AG_API ag_status ag_mesh_load(const char *path, ag_mesh **out);
AG_API ag_status ag_mesh_save(const ag_mesh *mesh, const char *path);
AG_API size_t ag_mesh_num_nodes(const ag_mesh *mesh);
AG_API size_t ag_mesh_num_triangles(const ag_mesh *mesh);
AG_API double ag_mesh_total_area(const ag_mesh *mesh);
AG_API uint64_t ag_mesh_checksum(const ag_mesh *mesh);
AG_API void ag_mesh_free(ag_mesh *mesh);

/* Air-gap operator on equidistant rings */

typedef struct ag_operator_spec
{
  double r_st, rho_rt, nu0, ell_z;
  size_t n_st, n_rt;
  double theta0_st, theta0_rt;
  const int *orders; /* NULL selects all common orders */
  size_t n_orders;
  int interface_correction; /* nonzero enables the hat-function correction */
} ag_operator_spec;

AG_API ag_status ag_operator_create(const ag_operator_spec *spec, ag_operator **out);
/* eps = (d_ecc / rho_rt) exp(j gamma_ecc) given as real and imaginary parts. */
AG_API ag_status ag_operator_set_motion(ag_operator *op, double alpha, double gamma_skew,
                                        double eps_re, double eps_im);
/* u and g hold n_st + n_rt ring values, stator first. */
AG_API ag_status ag_operator_apply(const ag_operator *op, const double *u, double *g);
AG_API size_t ag_operator_size(const ag_operator *op);
AG_API size_t ag_operator_num_harmonics(const ag_operator *op);
AG_API void ag_operator_free(ag_operator *op);

#ifdef __cplusplus
}
#endif

#endif /* AIRGAP_H */
