/* C API of the Gibbs-state-preparation library.
 *
 * The library trains, simulates and validates a variational Gibbs-state
 * preparation routine for the periodic transverse-field Ising model. All
 * functionality is exposed through opaque handles and status codes; error
 * detail is available from gsp_last_error() (thread-local).
 *
 * Conventions: qubit 0 is the most significant bit of a basis index, angles
 * are radians, entropies are in nats (k_B = 1), beta is dimensionless.
 */

#ifndef GSP_H
#define GSP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GSP_API __declspec(dllexport)
#else
#define GSP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t gsp_status;

enum {
    GSP_OK = 0,
    GSP_ERR_INVALID_ARGUMENT = 1, /* bad value, dimension mismatch, unknown name */
    GSP_ERR_RUNTIME = 2,          /* numerical or internal failure */
    GSP_ERR_IO = 3                /* file could not be read or written */
};

typedef struct gsp_target gsp_target;             /* (n, h, beta) + spectrum */
typedef struct gsp_params gsp_params;             /* variational angles */
typedef struct gsp_train_result gsp_train_result; /* SPSA outcome */
typedef struct gsp_circuit gsp_circuit;           /* abstract gate list */
typedef struct gsp_state gsp_state;               /* density matrix */

GSP_API const char* gsp_version(void);
GSP_API const char* gsp_last_error(void);

/* ---- noise profiles -------------------------------------------------- */

GSP_API int gsp_profile_count(void);
GSP_API gsp_status gsp_profile_name(int index, char* buf, size_t bufsize);
GSP_API gsp_status gsp_profile_params(const char* name, double* p1, double* p2, double* p_spam);

/* ---- exact Gibbs oracle ---------------------------------------------- */

GSP_API gsp_status gsp_target_create(int n, double h, double beta, gsp_target** out);
GSP_API void gsp_target_destroy(gsp_target* t);
GSP_API int64_t gsp_target_dim(const gsp_target* t);
/* `out` must hold gsp_target_dim(t) doubles; eigenvalues ascend. */
GSP_API gsp_status gsp_target_eigenvalues(const gsp_target* t, double* out);
GSP_API gsp_status gsp_target_partition_function(const gsp_target* t, double* out);
GSP_API gsp_status gsp_target_gibbs_diagonal(const gsp_target* t, double* out);

/* ---- variational parameters ------------------------------------------ */

GSP_API gsp_status gsp_params_random(int n, int ancilla_layers, int system_layers, uint64_t seed,
                                     gsp_params** out);
GSP_API void gsp_params_destroy(gsp_params* p);
GSP_API gsp_status gsp_params_shape(const gsp_params* p, int* n, int* ancilla_layers,
                                    int* system_layers);
/* Training provenance (h, beta, profile); profile is empty when untrained. */
GSP_API gsp_status gsp_params_meta(const gsp_params* p, double* h, double* beta, char* profile_buf,
                                   size_t bufsize);
GSP_API gsp_status gsp_params_save(const gsp_params* p, const char* path);
GSP_API gsp_status gsp_params_load(const char* path, gsp_params** out);

/* ---- training --------------------------------------------------------- */

/* Runs `restarts` independent SPSA minimizations of the variational free
 * energy under the named noise profile; the winner is chosen by fidelity
 * against the exact Gibbs state when select_by_fidelity is nonzero, by cost
 * otherwise. Shot counts of the training loop are the defaults (8192 X +
 * 8192 Z on the system register, 16384 Z on the ancilla register). */
GSP_API gsp_status gsp_train(int n, double h, double beta, const char* profile_name,
                             int ancilla_layers, int system_layers, int restarts,
                             int max_iterations, int select_by_fidelity, uint64_t seed,
                             gsp_train_result** out);
GSP_API void gsp_train_result_destroy(gsp_train_result* r);
GSP_API gsp_status gsp_train_result_best_cost(const gsp_train_result* r, double* out);
GSP_API int gsp_train_result_iterations(const gsp_train_result* r);
GSP_API int64_t gsp_train_result_trace_length(const gsp_train_result* r);
GSP_API gsp_status gsp_train_result_cost_trace(const gsp_train_result* r, double* out);
/* Returns a new handle owned by the caller. */
GSP_API gsp_status gsp_train_result_params(const gsp_train_result* r, gsp_params** out);

/* ---- circuits ---------------------------------------------------------- */

/* feedforward != 0 builds the measure-and-feedforward variant of the
 * register-coupling layer instead of transversal CNOTs. */
GSP_API gsp_status gsp_circuit_build(const gsp_params* p, int feedforward, gsp_circuit** out);
GSP_API void gsp_circuit_destroy(gsp_circuit* c);
GSP_API int gsp_circuit_num_qubits(const gsp_circuit* c);
GSP_API int64_t gsp_circuit_num_ops(const gsp_circuit* c);
GSP_API gsp_status gsp_circuit_save(const gsp_circuit* c, const char* path);
GSP_API gsp_status gsp_circuit_load(const char* path, gsp_circuit** out);

/* ---- transpilation ----------------------------------------------------- */

/* gateset is "ms" or "zz". */
GSP_API gsp_status gsp_circuit_gate_counts(const gsp_circuit* c, const char* gateset,
                                           int64_t* one_qubit, int64_t* two_qubit,
                                           int64_t* virtual_z);
GSP_API gsp_status gsp_circuit_lower_to_file(const gsp_circuit* c, const char* gateset,
                                             const char* path);
/* Global-phase-invariant distance between the circuit and its lowering. */
GSP_API gsp_status gsp_circuit_lowering_distance(const gsp_circuit* c, const char* gateset,
                                                 double* out);

/* ---- state preparation and scoring ------------------------------------ */

/* Reduced system-register density matrix of the executed GSP circuit. */
GSP_API gsp_status gsp_prepare(const gsp_params* p, const char* profile_name, gsp_state** out);
GSP_API void gsp_state_destroy(gsp_state* s);
GSP_API int gsp_state_num_qubits(const gsp_state* s);
/* Row-major real/imaginary parts; each buffer holds 4^n doubles. */
GSP_API gsp_status gsp_state_get(const gsp_state* s, double* re, double* im);
GSP_API gsp_status gsp_state_save(const gsp_state* s, const char* path);
GSP_API gsp_status gsp_state_load(const char* path, gsp_state** out);
GSP_API gsp_status gsp_state_fidelity(const gsp_state* s, const gsp_target* t, double* out);

/* Full state tomography of the prepared system register: 3^n settings at
 * shots_per_setting each. When counts_dir is non-NULL the per-setting counts
 * are written there as tomo_<setting>.txt. Outputs may be NULL when not
 * wanted: reconstructed receives the linear-inversion + PSD-projection
 * estimate, even_parity the even-parity fraction of the all-Z setting. */
GSP_API gsp_status gsp_tomography(const gsp_params* p, const char* profile_name,
                                  int64_t shots_per_setting, uint64_t seed,
                                  const char* counts_dir, gsp_state** reconstructed,
                                  double* even_parity);

/* ---- beta sweep -------------------------------------------------------- */

GSP_API int gsp_default_sweep_grid_length(void);
GSP_API gsp_status gsp_default_sweep_grid(double* out);
/* grid may be NULL (with grid_len 0) to use the default grid. fidelities,
 * when non-NULL, must hold grid_len (or default length) doubles. */
GSP_API gsp_status gsp_beta_sweep(const gsp_state* s, double h, double beta_true,
                                  const double* grid, int64_t grid_len, double* fidelities,
                                  double* beta_star, double* delta_beta);

/* ---- experiment grid --------------------------------------------------- */

/* Runs the full grid described by the config file. out_dir_override and
 * seed_override (enabled by has_seed_override) replace the config values;
 * completed records found in the output directory are not recomputed. */
GSP_API gsp_status gsp_run_grid(const char* config_path, const char* out_dir_override,
                                int workers, int has_seed_override, uint64_t seed_override,
                                int64_t* num_records);
/* Writes results.csv, sweep_*.csv and delta_beta.csv from stored records. */
GSP_API gsp_status gsp_report(const char* records_dir, const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GSP_H */
