#ifndef IMPURITY_CHAIN_H
#define IMPURITY_CHAIN_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum IcStatus {
  IC_STATUS_OK = 0,
  IC_STATUS_NULL_POINTER = 1,
  IC_STATUS_INVALID_PARAMS = 2,
  IC_STATUS_INVALID_N = 3,
  IC_STATUS_UNKNOWN_KEY = 4,
  IC_STATUS_NUMERICAL = 5,
  IC_STATUS_NOT_FOUND = 6,
  IC_STATUS_PANIC = 7,
} IcStatus;

/**
 * Opaque model handle.
 */
typedef struct IcModel IcModel;

/**
 * Two-site X-shaped density matrix: diagonal `r11..r44`, coherence `r23 = r32`.
 */
typedef struct IcXState {
  double r11;
  double r22;
  double r33;
  double r44;
  double r23;
} IcXState;

/**
 * Quantum resources of one dimer state.
 */
typedef struct IcMeasures {
  double concurrence;
  double coherence_l1;
  double sxsx;
  double szsz;
  double qfi;
  double average_fidelity;
} IcMeasures;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ic_version(void);

/**
 * Message of the last failed call on this thread. Valid until the next failing call.
 */
const char *ic_last_error_message(void);

/**
 * New model with the Fe-Mn-Cu couplings and g-factors, no impurity, B = 0, T = 1.
 */
struct IcModel *ic_model_new(void);

/**
 * Releases a handle from [`ic_model_new`]. Null is ignored.
 *
 * # Safety
 * `m` must be null or a live handle not used afterwards.
 */
void ic_model_free(struct IcModel *m);

/**
 * Sets a parameter by name: `J`, `Delta`, `J0`, `g1`, `g2`, `g3`, `gamma`, `B`, `T`.
 *
 * # Safety
 * `m` must be a live handle and `name` a NUL-terminated string.
 */
enum IcStatus ic_model_set(struct IcModel *m, const char *name, double value);

/**
 * Reads a parameter by name.
 *
 * # Safety
 * `m` must be a live handle, `name` a NUL-terminated string, `value` writable.
 */
enum IcStatus ic_model_get(const struct IcModel *m, const char *name, double *value);

/**
 * Reduced density matrix of the impurity dimer (or of a host dimer of the uniform
 * chain when `impurity` is false) in the thermodynamic limit.
 *
 * # Safety
 * `m` must be a live handle and `state` writable.
 */
enum IcStatus ic_density_matrix(const struct IcModel *m, bool impurity, struct IcXState *state);

/**
 * Impurity-dimer density matrix of a closed ring of `n >= 2` cells.
 *
 * # Safety
 * `m` must be a live handle and `state` writable.
 */
enum IcStatus ic_finite_density_matrix(const struct IcModel *m, size_t n, struct IcXState *state);

/**
 * Concurrence, l1 coherence, correlators, QFI and average teleportation fidelity.
 *
 * # Safety
 * `m` must be a live handle and `measures` writable.
 */
enum IcStatus ic_measures(const struct IcModel *m, bool impurity, struct IcMeasures *measures);

/**
 * Central-difference `dF/dB` of the QFI with field step `step`.
 *
 * # Safety
 * `m` must be a live handle and `value` writable.
 */
enum IcStatus ic_qfi_field_derivative(const struct IcModel *m,
                                      bool impurity,
                                      double step,
                                      double *value);

/**
 * Field at which the impurity dimer's mixing resonance makes it maximally entangled.
 *
 * # Safety
 * `m` must be a live handle and `value` writable.
 */
enum IcStatus ic_maximal_entanglement_field(const struct IcModel *m, double *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IMPURITY_CHAIN_H */
