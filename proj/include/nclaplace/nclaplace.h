/* SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the nclaplace library.
 *
 * Every function returning nclap_status leaves a thread-local message
 * retrievable with nclap_last_error() when it fails. Handles are opaque and
 * released with the matching *_destroy function; destroying NULL is a no-op.
 * Complex matrices cross the boundary as row-major arrays of 2*N*N doubles
 * (re, im interleaved).
 */
#ifndef NCLAPLACE_H
#define NCLAPLACE_H

#include <stddef.h>

#if defined(_WIN32)
#define NCLAP_API __declspec(dllexport)
#elif defined(__GNUC__)
#define NCLAP_API __attribute__((visibility("default")))
#else
#define NCLAP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nclap_status {
  NCLAP_OK = 0,
  NCLAP_ERR_ARGUMENT = 1,
  NCLAP_ERR_DOMAIN = 2,
  NCLAP_ERR_CONSISTENCY = 3,
  NCLAP_ERR_SINGULAR_POINT = 4,
  NCLAP_ERR_NOT_REVOLUTION = 5,
  NCLAP_ERR_DEGENERATE_METRIC = 6,
  /* Also returned with a partial spectrum handle; see nclap_spectrum_compute. */
  NCLAP_ERR_CONVERGENCE = 7,
  NCLAP_ERR_RESOLUTION = 8,
  NCLAP_ERR_IO = 9,
  NCLAP_ERR_INTERNAL = 10
} nclap_status;

typedef enum nclap_strategy {
  NCLAP_STRATEGY_AUTO = 0,
  NCLAP_STRATEGY_DENSE = 1,
  NCLAP_STRATEGY_BLOCKS = 2,
  NCLAP_STRATEGY_ITERATIVE = 3
} nclap_strategy;

typedef enum nclap_grid_offset { NCLAP_GRID_PAPER = 0, NCLAP_GRID_SYMMETRIC = 1 } nclap_grid_offset;

typedef enum nclap_format { NCLAP_FORMAT_JSON = 1, NCLAP_FORMAT_CSV = 2, NCLAP_FORMAT_BOTH = 3 } nclap_format;

typedef enum nclap_matrix_format {
  NCLAP_MATRIX_JSON = 1,
  NCLAP_MATRIX_BINARY = 2,
  NCLAP_MATRIX_BOTH = 3
} nclap_matrix_format;

typedef struct nclap_surface nclap_surface;
typedef struct nclap_operator nclap_operator;
typedef struct nclap_spectrum nclap_spectrum;
typedef struct nclap_reference nclap_reference;
typedef struct nclap_convergence nclap_convergence;
typedef struct nclap_axioms nclap_axioms;

typedef struct nclap_grid_config {
  int N;
  /* beta <= 0 selects area / (2 pi (b - a)). */
  double beta;
  nclap_grid_offset offset;
  double epsilon;
} nclap_grid_config;

typedef struct nclap_spectrum_options {
  nclap_strategy strategy;
  int count;
  /* Largest offset block; negative picks one adaptively. */
  int max_offset;
  double tolerance;
  /* Cluster gap; <= 0 means 10 hbar. */
  double cluster_gap;
  int dense_cap;
  int max_iterations;
  /* 0 reads NCLAPLACE_THREADS. */
  int threads;
} nclap_spectrum_options;

typedef struct nclap_eigenpair {
  double value;
  double imag;
  double residual;
  int block;
  int cluster;
  int converged;
  int imaginary_flag;
} nclap_eigenpair;

typedef struct nclap_spectrum_info {
  int N;
  double beta;
  double hbar;
  nclap_strategy strategy;
  int max_offset;
  int converged;
  double imaginary_leakage;
  int truncated_modes;
} nclap_spectrum_info;

typedef struct nclap_reference_entry {
  double value;
  int multiplicity;
  int mode;
  int analytic;
  double error_estimate;
} nclap_reference_entry;

typedef struct nclap_convergence_row {
  int N;
  double hbar;
  int cluster;
  double lambda;
  double reference;
  double abs_error;
  /* NaN on the first N of a cluster. */
  double fitted_order;
} nclap_convergence_row;

typedef struct nclap_axiom_row {
  int N;
  int i;
  int j;
  double product_defect;
  double bracket_defect;
  double norm_bound;
} nclap_axiom_row;

typedef struct nclap_trace_result {
  int N;
  double beta;
  double hbar;
  double trace;
  double integral;
  double area_integral;
  double abs_error;
} nclap_trace_result;

NCLAP_API const char* nclap_version(void);
NCLAP_API const char* nclap_last_error(void);
NCLAP_API const char* nclap_status_string(nclap_status status);

/* Surfaces. kind: "sphere", "spheroid" or "ellipsoid". */
NCLAP_API nclap_status nclap_surface_create(const char* kind, const double* axes, size_t n_axes, nclap_surface** out);
NCLAP_API nclap_status nclap_surface_load(const char* json_path, nclap_surface** out);
NCLAP_API void nclap_surface_destroy(nclap_surface* s);
NCLAP_API const char* nclap_surface_name(const nclap_surface* s);
NCLAP_API nclap_status nclap_surface_axes(const nclap_surface* s, double axes[3]);
NCLAP_API int nclap_surface_is_revolution(const nclap_surface* s);
NCLAP_API nclap_status nclap_surface_interval(const nclap_surface* s, double* lo, double* hi);
NCLAP_API nclap_status nclap_surface_area(const nclap_surface* s, double* area);
NCLAP_API nclap_status nclap_default_beta(const nclap_surface* s, double* beta);
NCLAP_API nclap_status nclap_metric_sqrt_det(const nclap_surface* s, double z, double theta, double* value);

/* Quantized operators. */
NCLAP_API void nclap_grid_config_default(nclap_grid_config* cfg);
NCLAP_API nclap_status nclap_operator_create(const nclap_surface* s, const nclap_grid_config* cfg,
                                             nclap_operator** out);
NCLAP_API void nclap_operator_destroy(nclap_operator* op);
NCLAP_API int nclap_operator_size(const nclap_operator* op);
NCLAP_API double nclap_operator_hbar(const nclap_operator* op);
NCLAP_API double nclap_operator_beta(const nclap_operator* op);
NCLAP_API int nclap_operator_truncated_modes(const nclap_operator* op);
/* which: 0, 1, 2 for X, Y, Z; 3 for gamma; 4 for gamma^{-1}. buf holds 2*N*N doubles. */
NCLAP_API nclap_status nclap_operator_matrix(const nclap_operator* op, int which, double* buf);
NCLAP_API nclap_status nclap_operator_apply(const nclap_operator* op, const double* in, double* out);
/* Writes X, Y, Z, gamma as <dir>/X.bin (32-byte "NCLQ" header, row-major
 * little-endian complex doubles) and/or <dir>/X.json. */
NCLAP_API nclap_status nclap_operator_dump(const nclap_operator* op, const char* dir, nclap_matrix_format format);

/* Spectra. On NCLAP_ERR_CONVERGENCE *out still receives the partial report
 * with unconverged pairs flagged; the caller owns it. */
NCLAP_API void nclap_spectrum_options_default(nclap_spectrum_options* opt);
NCLAP_API nclap_status nclap_spectrum_compute(const nclap_operator* op, const nclap_spectrum_options* opt,
                                              nclap_spectrum** out);
NCLAP_API void nclap_spectrum_destroy(nclap_spectrum* sp);
NCLAP_API size_t nclap_spectrum_size(const nclap_spectrum* sp);
NCLAP_API nclap_status nclap_spectrum_get(const nclap_spectrum* sp, size_t i, nclap_eigenpair* out);
NCLAP_API size_t nclap_spectrum_cluster_count(const nclap_spectrum* sp);
NCLAP_API nclap_status nclap_spectrum_cluster(const nclap_spectrum* sp, size_t i, double* mean, int* multiplicity);
NCLAP_API nclap_status nclap_spectrum_info_get(const nclap_spectrum* sp, nclap_spectrum_info* out);
/* path_stem gets .json and/or .csv appended. */
NCLAP_API nclap_status nclap_spectrum_write(const nclap_spectrum* sp, const char* path_stem, nclap_format format);

/* Classical references. */
NCLAP_API nclap_status nclap_reference_sphere(int k_max, double radius, nclap_reference** out);
NCLAP_API nclap_status nclap_reference_revolution(const nclap_surface* s, int m_max, int grid_points, int count,
                                                  nclap_reference** out);
NCLAP_API nclap_status nclap_reference_richardson(const nclap_surface* s, int m_max, int count, nclap_reference** out);
/* Analytic for spheres, Richardson Sturm-Liouville for other revolution surfaces. */
NCLAP_API nclap_status nclap_reference_auto(const nclap_surface* s, int count, nclap_reference** out);
NCLAP_API void nclap_reference_destroy(nclap_reference* ref);
NCLAP_API size_t nclap_reference_size(const nclap_reference* ref);
NCLAP_API nclap_status nclap_reference_get(const nclap_reference* ref, size_t i, nclap_reference_entry* out);
/* Entries closer than tol merged into clusters. */
NCLAP_API size_t nclap_reference_cluster_count(const nclap_reference* ref, double tol);
NCLAP_API nclap_status nclap_reference_cluster(const nclap_reference* ref, double tol, size_t i, double* value,
                                               int* multiplicity);
NCLAP_API nclap_status nclap_reference_write(const nclap_reference* ref, const char* path_stem, nclap_format format);

/* Greedy clustering; means and multiplicities need room for n entries. */
NCLAP_API nclap_status nclap_cluster_values(const double* values, size_t n, double gap, double* means,
                                            int* multiplicities, size_t* n_clusters);

/* Convergence studies. cfg->N is ignored; ref may be NULL to pick nclap_reference_auto. */
NCLAP_API nclap_status nclap_convergence_run(const nclap_surface* s, const int* Ns, size_t n_N,
                                             const nclap_grid_config* cfg, const nclap_spectrum_options* opt,
                                             const nclap_reference* ref, nclap_convergence** out);
NCLAP_API void nclap_convergence_destroy(nclap_convergence* c);
NCLAP_API size_t nclap_convergence_size(const nclap_convergence* c);
NCLAP_API nclap_status nclap_convergence_get(const nclap_convergence* c, size_t i, nclap_convergence_row* out);
NCLAP_API int nclap_convergence_converged(const nclap_convergence* c);
/* Writes <dir>/convergence.csv and <dir>/cluster_<k>.dat. */
NCLAP_API nclap_status nclap_convergence_write(const nclap_convergence* c, const char* dir);

/* Axiom defects over coordinate pairs (x,y), (y,z), (z,x), (z,z). cfg->N is ignored. */
NCLAP_API nclap_status nclap_axioms_run(const nclap_surface* s, const int* Ns, size_t n_N, const nclap_grid_config* cfg,
                                        nclap_axioms** out);
NCLAP_API void nclap_axioms_destroy(nclap_axioms* a);
NCLAP_API size_t nclap_axioms_size(const nclap_axioms* a);
NCLAP_API nclap_status nclap_axioms_get(const nclap_axioms* a, size_t i, nclap_axiom_row* out);
NCLAP_API size_t nclap_axioms_trace_size(const nclap_axioms* a);
NCLAP_API nclap_status nclap_axioms_trace_get(const nclap_axioms* a, size_t i, nclap_trace_result* out);
NCLAP_API nclap_status nclap_axioms_write(const nclap_axioms* a, const char* csv_path);

/* Trace check for a built-in function: "1", "z", "z2", "x2", "xy". */
NCLAP_API nclap_status nclap_trace(const nclap_surface* s, const nclap_grid_config* cfg, const char* function,
                                   nclap_trace_result* out);

#ifdef __cplusplus
}
#endif

#endif /* NCLAPLACE_H */
