/* C interface to the Celtic stone dynamics library.
 *
 * All entry points return a celtic_status; CELTIC_OK is zero. A failing call
 * leaves a human-readable message retrievable with celtic_last_error() (the
 * message is thread-local and overwritten by the next failing call).
 *
 * A celtic_lab handle bundles the stone parameters, the Poincare-map
 * configuration (energy level, section, integrator tolerances) and the
 * analysis knobs. It is created from the same JSON document the CLI consumes;
 * pass NULL for all defaults. Handles are not thread-safe; create one handle
 * per thread for concurrent work.
 *
 * Conventions: phase states are double[6] = (M1,M2,M3,gamma1,gamma2,gamma3);
 * section points are double[3] = (l, eta, xi); matrices are row-major.
 */
#ifndef CELTIC_H
#define CELTIC_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum celtic_status {
    CELTIC_OK = 0,
    CELTIC_ERR_CONFIG = 1,
    CELTIC_ERR_DEGENERATE_CONTACT = 2,
    CELTIC_ERR_SINGULAR_CHART = 3,
    CELTIC_ERR_ZERO_MOMENTUM = 4,
    CELTIC_ERR_ENERGY_BELOW_POTENTIAL = 5,
    CELTIC_ERR_NO_CROSSING = 6,
    CELTIC_ERR_STEP_COUNT_EXCEEDED = 7,
    CELTIC_ERR_ORBIT_ESCAPED = 8,
    CELTIC_ERR_NO_CONVERGENCE = 9,
    CELTIC_ERR_SINGULAR_NEWTON = 10,
    CELTIC_ERR_NOT_A_SADDLE = 11,
    CELTIC_ERR_NO_RETURN = 12,
    CELTIC_ERR_IO = 13,
    CELTIC_ERR_INTERNAL = 14
} celtic_status;

typedef struct celtic_lab celtic_lab;

/* Stable name of a status code ("ok", "config_invalid", ...). */
const char* celtic_status_name(celtic_status status);

/* Message of the most recent failure on this thread ("" if none). */
const char* celtic_last_error(void);

/* config_json: UTF-8 JSON document or NULL for defaults. */
celtic_status celtic_lab_create(const char* config_json, celtic_lab** out_lab);
void celtic_lab_destroy(celtic_lab* lab);

/* Change the energy level of the map without re-parsing the configuration. */
celtic_status celtic_lab_set_energy(celtic_lab* lab, double energy);

/* Equations of motion and the two first integrals. */
celtic_status celtic_lab_flow_rhs(const celtic_lab* lab, const double state[6],
                                  double deriv[6]);
celtic_status celtic_lab_integrals(const celtic_lab* lab, const double state[6],
                                   double* energy, double* gamma_norm_sq);

/* Section lift/projection at the configured energy. */
celtic_status celtic_lab_lift(const celtic_lab* lab, const double x[3], double state[6]);
celtic_status celtic_lab_project(const celtic_lab* lab, const double state[6], double x[3]);

/* One application of the return map (inverse != 0 for the inverse map).
 * return_time may be NULL. */
celtic_status celtic_lab_map_step(const celtic_lab* lab, const double x[3], int inverse,
                                  double out[3], double* return_time);

/* Central finite-difference Jacobian of the return map, row-major. */
celtic_status celtic_lab_map_jacobian(const celtic_lab* lab, const double x[3],
                                      double jacobian[9]);

/* which: "S1", "I1" or "I2". */
celtic_status celtic_symmetry(const double x[3], const char* which, double out[3]);

/* Benettin spectrum along the orbit of x0. lambda_map receives the exponents
 * per map iteration (descending); mean_return_time (may be NULL) converts
 * them to per-unit-time rates. */
celtic_status celtic_lab_lyapunov(const celtic_lab* lab, const double x0[3],
                                  long n_transient, long n_iter, double lambda_map[3],
                                  double* mean_return_time);

/* Newton solve for a period-p point from a guess. Multipliers are sorted by
 * decreasing modulus. */
celtic_status celtic_lab_periodic_point(const celtic_lab* lab, const double guess[3],
                                        int period, double point[3], double mult_re[3],
                                        double mult_im[3], double* residual);

/* Run one named scenario command with a full JSON configuration; artifacts
 * are written to the configured output directory. On success *summary_json
 * receives a malloc'd JSON document; free it with celtic_string_free. */
celtic_status celtic_run_scenario(const char* config_json, const char* command,
                                  char** summary_json);
void celtic_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* CELTIC_H */
