// Copyright 2026 The hgf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HGF_HGF_H
#define HGF_HGF_H

/* C interface to the Hermite generalized-function library. Objects are opaque
 * handles; every call returns an hgf_status and leaves a message for
 * hgf_last_error() (per thread) when it fails. */

#include <stddef.h>
#include <stdint.h>

#if defined(HGF_BUILDING_LIBRARY)
#define HGF_API __attribute__((visibility("default")))
#else
#define HGF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hgf_status {
  HGF_OK = 0,
  HGF_ERR_INVALID_INPUT = 1,
  HGF_ERR_QUADRATURE = 2,
  HGF_ERR_DIVERGED = 3,
  HGF_ERR_IO = 4,
  HGF_ERR_CONFIG = 5,
  HGF_ERR_INTERNAL = 6
} hgf_status;

typedef struct hgf_basis hgf_basis;
typedef struct hgf_coeffs hgf_coeffs;

/* f(x, dim, user) for analysis; x has dim entries. */
typedef double (*hgf_function)(const double* x, int dim, void* user);

HGF_API const char* hgf_version(void);
HGF_API const char* hgf_last_error(void);

/* Basis with default quadrature for (dim, level). */
HGF_API hgf_status hgf_basis_create(int dim, int level, hgf_basis** out);
/* Explicit node count and window; the orthonormality check still applies. */
HGF_API hgf_status hgf_basis_create_custom(int dim, int level, int nodes, double halfwidth, hgf_basis** out);
HGF_API void hgf_basis_destroy(hgf_basis* b);
HGF_API hgf_status hgf_basis_info(const hgf_basis* b, int* dim, int* level, int* nodes, double* halfwidth);
HGF_API hgf_status hgf_basis_gram_defect(const hgf_basis* b, double* out);

HGF_API hgf_status hgf_coeffs_analyze(const hgf_basis* b, hgf_function f, void* user, hgf_coeffs** out);
HGF_API hgf_status hgf_coeffs_dirac(const hgf_basis* b, const double* point, hgf_coeffs** out);
HGF_API hgf_status hgf_coeffs_read_csv(const char* path, hgf_coeffs** out);
HGF_API hgf_status hgf_coeffs_write_csv(const hgf_coeffs* c, const char* path);
HGF_API void hgf_coeffs_destroy(hgf_coeffs* c);

HGF_API hgf_status hgf_coeffs_size(const hgf_coeffs* c, size_t* out);
/* Copies min(n, size) values in lexicographic index order. */
HGF_API hgf_status hgf_coeffs_values(const hgf_coeffs* c, double* out, size_t n);
HGF_API hgf_status hgf_coeffs_get(const hgf_coeffs* c, const int* beta, double* out);
HGF_API hgf_status hgf_coeffs_seminorm(const hgf_coeffs* c, int n, double* out);
HGF_API hgf_status hgf_coeffs_pairing(const hgf_coeffs* b, const hgf_coeffs* a, double* out);
HGF_API hgf_status hgf_coeffs_synthesize(const hgf_coeffs* c, const double* x, double* out);
HGF_API hgf_status hgf_coeffs_translate(const hgf_coeffs* c, const double* shift, hgf_coeffs** out);
HGF_API hgf_status hgf_coeffs_derivative(const hgf_coeffs* c, int axis, hgf_coeffs** out);

/* Batch commands. command may be NULL to use the config's "command" field.
 * Unset overrides: seed < 0, out_dir NULL, tol NaN. Returns the exit status
 * (0 pass, 1 config error, 2 criterion breach); the summary line is left in
 * hgf_last_message(). */
typedef struct hgf_run_options {
  const char* command;
  const char* config_json;
  const char* out_dir;
  int64_t seed;
  double tol;
} hgf_run_options;

HGF_API void hgf_run_options_init(hgf_run_options* opt);
HGF_API int hgf_run(const hgf_run_options* opt);
HGF_API const char* hgf_last_message(void);
/* Newline-separated list of command names. */
HGF_API const char* hgf_command_names(void);

#ifdef __cplusplus
}
#endif

#endif
