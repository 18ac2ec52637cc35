#ifndef VICFLUOR_H
#define VICFLUOR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum VicfluorStatus {
  VICFLUOR_STATUS_OK = 0,
  VICFLUOR_STATUS_NULL_POINTER = 1,
  VICFLUOR_STATUS_INVALID_PARAMETER = 2,
  VICFLUOR_STATUS_INVALID_GRID = 3,
  VICFLUOR_STATUS_SINGULAR_SYSTEM = 4,
  VICFLUOR_STATUS_SINGULAR_RESOLVENT = 5,
  VICFLUOR_STATUS_REQUIRES_RESONANCE = 6,
  VICFLUOR_STATUS_BUFFER_TOO_SMALL = 7,
  VICFLUOR_STATUS_INVALID_ARGUMENT = 8,
  VICFLUOR_STATUS_PANIC = 9,
} VicfluorStatus;

typedef enum VicfluorChannel {
  VICFLUOR_CHANNEL_PI = 0,
  VICFLUOR_CHANNEL_SIGMA = 1,
} VicfluorChannel;

// Opaque handle: parameters, evolution matrix and stationary state.
typedef struct VicfluorAtom VicfluorAtom;

// Model parameters, all in units of the total decay rate when `gamma = 1`.
typedef struct VicfluorParams {
  double gamma;
  double gamma12;
  double delta;
  double omega_a;
  double omega_b;
  double phi;
} VicfluorParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default parameters: gamma = 1, full cross damping, resonance, Ωa = 1, Ωb = 0.
struct VicfluorParams vicfluor_params_default(void);

// Validates `params`, solves for the steady state and writes a new handle
// to `*out`. `*out` is set to NULL on failure.
//
// # Safety
// `params` must point to a valid struct and `out` to writable storage.
enum VicfluorStatus vicfluor_atom_new(const struct VicfluorParams *params,
                                      struct VicfluorAtom **out);

// Releases a handle. NULL is ignored.
//
// # Safety
// `atom` must come from [`vicfluor_atom_new`] and not be used afterwards.
void vicfluor_atom_free(struct VicfluorAtom *atom);

// Stationary populations ρ11, ρ22, ρ33, ρ44 into `out[0..4]`.
//
// # Safety
// `atom` must be a live handle and `out` must hold 4 doubles.
enum VicfluorStatus vicfluor_atom_populations(const struct VicfluorAtom *atom, double *out);

// Stationary density-matrix element ρ_xy, with x, y in 1..=4.
//
// # Safety
// `atom` must be a live handle; `re` and `im` must be writable.
enum VicfluorStatus vicfluor_atom_rho(const struct VicfluorAtom *atom,
                                      uint8_t x,
                                      uint8_t y,
                                      double *re,
                                      double *im);

// Spectrum of `channel` on `points` equally spaced frequencies from
// `omega_min` to `omega_max`. `values` receives S(ω); `omega` may be NULL,
// otherwise it receives the frequencies. `capacity` is the length of each
// buffer.
//
// # Safety
// `atom` must be a live handle; non-null buffers must hold `capacity` doubles.
enum VicfluorStatus vicfluor_atom_spectrum(const struct VicfluorAtom *atom,
                                           enum VicfluorChannel channel,
                                           bool detector_cross,
                                           double omega_min,
                                           double omega_max,
                                           size_t points,
                                           double *omega,
                                           double *values,
                                           size_t capacity);

// Frequency-integrated intensity of `channel`.
//
// # Safety
// `atom` must be a live handle and `out` writable.
enum VicfluorStatus vicfluor_atom_total_intensity(const struct VicfluorAtom *atom,
                                                  enum VicfluorChannel channel,
                                                  bool detector_cross,
                                                  double *out);

// Dressed-state line weights A1..A5 into `a[0..5]` and W1, W2 into
// `w[0..2]`. Requires zero detuning.
//
// # Safety
// `params` must be valid; `a` must hold 5 doubles and `w` 2.
enum VicfluorStatus vicfluor_dressed_weights(const struct VicfluorParams *params,
                                             enum VicfluorChannel channel,
                                             double *a,
                                             double *w);

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length without the NUL,
// or 0 if the last call succeeded. `buf` may be NULL to query the length.
//
// # Safety
// A non-null `buf` must hold `len` bytes.
size_t vicfluor_last_error_message(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *vicfluor_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VICFLUOR_H */
