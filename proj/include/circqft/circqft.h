/* SPDX-License-Identifier: Apache-2.0 */
#ifndef CIRCQFT_H
#define CIRCQFT_H

/*
 * C interface to the circulant QFT simulator.
 *
 * Every call returns a cqft_status. On failure, cqft_last_error() holds a
 * message for the calling thread until its next failing call.
 * Matrices are 8x8, row-major, 64 cqft_complex entries. Units: time in ms,
 * frequencies in rad/ms.
 *
 * Text getters follow one pattern: pass buf/cap, receive the required size
 * (including the terminating NUL) in *needed. A short buffer yields
 * CQFT_ERR_INVALID_ARGUMENT and leaves buf untouched.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(CQFT_BUILDING_LIBRARY)
#define CQFT_API __declspec(dllexport)
#else
#define CQFT_API __declspec(dllimport)
#endif
#else
#define CQFT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cqft_status {
  CQFT_OK = 0,
  CQFT_ERR_CONFIG = 2,
  CQFT_ERR_PRECONDITION = 3,
  CQFT_ERR_NUMERICAL = 4,
  CQFT_ERR_INVALID_ARGUMENT = 5,
  CQFT_ERR_INTERNAL = 6
} cqft_status;

typedef struct cqft_complex {
  double re;
  double im;
} cqft_complex;

typedef struct cqft_scenario cqft_scenario;
typedef struct cqft_result cqft_result;

CQFT_API const char* cqft_version(void);
CQFT_API const char* cqft_last_error(void);
CQFT_API const char* cqft_status_name(cqft_status status);

/* Presets */
CQFT_API size_t cqft_preset_count(void);
/* NULL when index is out of range. */
CQFT_API const char* cqft_preset_name(size_t index);
CQFT_API cqft_status cqft_preset_describe(const char* name, char* buf, size_t cap, size_t* needed);

/* Scenarios */
CQFT_API cqft_status cqft_scenario_from_preset(const char* name, cqft_scenario** out);
CQFT_API cqft_status cqft_scenario_from_config_text(const char* text, cqft_scenario** out);
CQFT_API cqft_status cqft_scenario_from_config_file(const char* path, cqft_scenario** out);
CQFT_API void cqft_scenario_free(cqft_scenario* s);

CQFT_API cqft_status cqft_scenario_set_kind(cqft_scenario* s, const char* kind);
CQFT_API cqft_status cqft_scenario_set_samples(cqft_scenario* s, size_t samples);
CQFT_API cqft_status cqft_scenario_set_with_cd(cqft_scenario* s, int enabled);
CQFT_API cqft_status cqft_scenario_set_seed(cqft_scenario* s, uint64_t seed);
CQFT_API cqft_status cqft_scenario_kind(const cqft_scenario* s, const char** kind);
CQFT_API cqft_status cqft_scenario_seed(const cqft_scenario* s, uint64_t* seed);

/* as_json = 0 gives the key = value config text, otherwise JSON. */
CQFT_API cqft_status cqft_scenario_serialize(const cqft_scenario* s, int as_json, char* buf, size_t cap,
                                             size_t* needed);

/* Running */
CQFT_API cqft_status cqft_run(const cqft_scenario* s, cqft_result** out);
CQFT_API void cqft_result_free(cqft_result* r);

CQFT_API size_t cqft_result_rows(const cqft_result* r);
CQFT_API size_t cqft_result_columns(const cqft_result* r);
/* NULL when index is out of range. */
CQFT_API const char* cqft_result_column_name(const cqft_result* r, size_t col);
CQFT_API cqft_status cqft_result_value(const cqft_result* r, size_t row, size_t col, double* out);
CQFT_API cqft_status cqft_result_csv(const cqft_result* r, char* buf, size_t cap, size_t* needed);
CQFT_API cqft_status cqft_result_diagnostics(const cqft_result* r, char* buf, size_t cap, size_t* needed);
CQFT_API size_t cqft_result_warning_count(const cqft_result* r);
CQFT_API const char* cqft_result_warning(const cqft_result* r, size_t index);

/* Writes the CSV atomically plus a <path>.meta.json sidecar. */
CQFT_API cqft_status cqft_result_write(const cqft_scenario* s, const cqft_result* r, const char* path);

/* Primitives */
CQFT_API cqft_status cqft_build_circulant(int variant, double J, double J1, double Omega1, double phi,
                                          cqft_complex out[64]);
CQFT_API cqft_status cqft_build_offset(double Delta1, double Delta2, double Delta3, cqft_complex out[64]);
CQFT_API cqft_status cqft_build_rotating(double J, double J1, double Omega2, double Omega3, double phi,
                                         cqft_complex out[64]);
CQFT_API cqft_status cqft_build_counter_driving(double kappa_rate, cqft_complex out[64]);

/* Eigenvalues ascending; eigenvector k is column k of `vectors`. */
CQFT_API cqft_status cqft_eigensystem(const cqft_complex h[64], double values[8], cqft_complex vectors[64]);

CQFT_API cqft_status cqft_qft_gate(cqft_complex out[64]);
CQFT_API cqft_status cqft_gate_fidelity(const cqft_complex u[64], double* out);
CQFT_API cqft_status cqft_uhlmann_fidelity(const cqft_complex rho0[64], const cqft_complex rho[64],
                                           double* out);
CQFT_API cqft_status cqft_mixing_angle(double Omega2, double Omega3, double J1, double J, double* out);

/* SI inputs: k in 1/m, M in kg, Omega_n in rad/s. */
CQFT_API cqft_status cqft_lamb_dicke(double b, double k, double M, double Omega_n, double* out);
CQFT_API cqft_status cqft_pairwise_coupling(const double* Jj, const double* Jp, const double* Omega, size_t modes,
                                            double nu, double* out);
CQFT_API cqft_status cqft_trilinear_coupling(const double* Jj, const double* Jp, const double* h,
                                             const double* Omega, size_t modes, double nu, double* out);

#ifdef __cplusplus
}
#endif

#endif /* CIRCQFT_H */
