#ifndef CCDSIM_H
#define CCDSIM_H

/* Generated by cbindgen from ccdsim-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * What the attacker transmits during a capture.
 */
typedef enum {
  CCDSIM_ATTACK_SINE = 0,
  CCDSIM_ATTACK_GAUSSIAN_NOISE = 1,
} ccdsim_attack_kind;

/**
 * Result code of a ccdsim call.
 */
typedef enum {
  CCDSIM_OK = 0,
  CCDSIM_NULL_POINTER = 1,
  CCDSIM_INVALID_ARGUMENT = 2,
  CCDSIM_DIMENSION_MISMATCH = 3,
  CCDSIM_RATE_MISMATCH = 4,
  CCDSIM_IO_ERROR = 5,
  CCDSIM_PARSE_ERROR = 6,
  CCDSIM_BUFFER_TOO_SMALL = 7,
} ccdsim_status;

/**
 * Opaque capture result (a sequence of demosaiced frames).
 */
typedef struct ccdsim_capture ccdsim_capture;

/**
 * Opaque radiance scene at the sensor's effective resolution.
 */
typedef struct ccdsim_scene ccdsim_scene;

/**
 * Opaque camera description.
 */
typedef struct ccdsim_sensor ccdsim_sensor;

/**
 * Attack description: signal kind plus the RF channel it travels over.
 */
typedef struct {
  ccdsim_attack_kind kind;
  /**
   * Tone frequency for sine attacks, ignored for noise.
   */
  double tone_hz;
  double tx_power_dbm;
  double tx_gain_dbi;
  double rx_gain_dbi;
  double distance_m;
  double carrier_hz;
} ccdsim_attack_params;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the calling thread's last error message into `buf` (NUL terminated,
 * truncated to `cap`). Returns the full message length, not counting NUL.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes, or be null (length query).
 */
uintptr_t ccdsim_last_error(char *buf, uintptr_t cap);

/**
 * Create a sensor from a built-in profile name: "dfm-desk", "cctv-analog",
 * or "cmos-desk".
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be a valid pointer.
 */
ccdsim_status ccdsim_sensor_builtin(const char *name, ccdsim_sensor **out);

/**
 * Create a sensor from a JSON document (same schema as configs/*.json).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be a valid pointer.
 */
ccdsim_status ccdsim_sensor_from_json(const char *json, ccdsim_sensor **out);

/**
 * # Safety
 * `sensor` must be a pointer from a ccdsim_sensor constructor, not yet freed.
 */
void ccdsim_sensor_free(ccdsim_sensor *sensor);

/**
 * # Safety
 * `sensor` must be a valid, live sensor handle.
 */
uint32_t ccdsim_sensor_cols_effective(const ccdsim_sensor *sensor);

/**
 * # Safety
 * `sensor` must be a valid, live sensor handle.
 */
uint32_t ccdsim_sensor_rows_effective(const ccdsim_sensor *sensor);

/**
 * Digitization rate in samples per second (stored or derived).
 *
 * # Safety
 * `sensor` must be a valid, live sensor handle.
 */
double ccdsim_sensor_readout_rate(const ccdsim_sensor *sensor);

/**
 * Uniform scene at `level` radiance (0..=1).
 *
 * # Safety
 * `sensor` must be a valid sensor handle; `out` must be a valid pointer.
 */
ccdsim_status ccdsim_scene_uniform(const ccdsim_sensor *sensor, double level, ccdsim_scene **out);

/**
 * Scene from an interleaved 8-bit RGB buffer at the sensor's effective
 * resolution; sample value 255 maps to radiance 1.0.
 *
 * # Safety
 * `rgb` must point to `len` readable bytes; `sensor`/`out` must be valid.
 */
ccdsim_status ccdsim_scene_from_rgb8(const ccdsim_sensor *sensor,
                                     const uint8_t *rgb,
                                     uintptr_t len,
                                     ccdsim_scene **out);

/**
 * # Safety
 * `scene` must be a pointer from a ccdsim_scene constructor, not yet freed.
 */
void ccdsim_scene_free(ccdsim_scene *scene);

/**
 * Capture `n_frames` consecutive frames, optionally under attack. The
 * attack runs rate-matched on its own clock with a seeded random offset.
 *
 * # Safety
 * `sensor` and `scene` must be valid handles; `attack` may be null; `out`
 * must be a valid pointer.
 */
ccdsim_status ccdsim_capture_run(const ccdsim_sensor *sensor,
                                 const ccdsim_scene *scene,
                                 const ccdsim_attack_params *attack,
                                 uint32_t n_frames,
                                 uint64_t seed,
                                 ccdsim_capture **out);

/**
 * # Safety
 * `capture` must be a pointer from ccdsim_capture_run, not yet freed.
 */
void ccdsim_capture_free(ccdsim_capture *capture);

/**
 * # Safety
 * `capture` must be a valid, live capture handle.
 */
uintptr_t ccdsim_capture_frame_count(const ccdsim_capture *capture);

/**
 * # Safety
 * `capture` must be a valid, live capture handle.
 */
uint32_t ccdsim_capture_width(const ccdsim_capture *capture);

/**
 * # Safety
 * `capture` must be a valid, live capture handle.
 */
uint32_t ccdsim_capture_height(const ccdsim_capture *capture);

/**
 * Copy frame `index` into `buf` as interleaved 8-bit RGB (values are
 * right-shifted for ADCs deeper than 8 bits).
 *
 * # Safety
 * `capture` must be valid; `buf` must point to `buf_len` writable bytes.
 */
ccdsim_status ccdsim_capture_frame_rgb8(const ccdsim_capture *capture,
                                        uintptr_t index,
                                        uint8_t *buf,
                                        uintptr_t buf_len);

/**
 * SSIM between two frames of (possibly different) captures.
 *
 * # Safety
 * Both captures must be valid, live handles; `out` must be valid.
 */
ccdsim_status ccdsim_capture_ssim(const ccdsim_capture *capture_a,
                                  uintptr_t index_a,
                                  const ccdsim_capture *capture_b,
                                  uintptr_t index_b,
                                  double *out);

/**
 * Friis received power in dBm.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
ccdsim_status ccdsim_friis_received_power(double tx_power_dbm,
                                          double tx_gain_dbi,
                                          double rx_gain_dbi,
                                          double distance_m,
                                          double carrier_hz,
                                          double *out);

/**
 * Readout samples per second needed to address every photodiode once per
 * frame. Returns 0 on invalid input.
 */
double ccdsim_required_sample_rate(uint32_t cols_total, uint32_t rows_total, double frame_rate);

/**
 * EAN-13 check digit for 12 payload digits, or -1 on invalid input.
 *
 * # Safety
 * `digits` must point to 12 readable bytes.
 */
int32_t ccdsim_ean13_checksum(const uint8_t *digits);

/**
 * Decode EAN-13 barcodes from an interleaved 8-bit RGB buffer. Results are
 * written newline-separated (NUL terminated) into `out`; the number of
 * decoded codes is stored in `n_decoded`.
 *
 * # Safety
 * `rgb` must point to `width * height * 3` readable bytes; `out` must point
 * to `out_cap` writable bytes; `n_decoded` must be valid.
 */
ccdsim_status ccdsim_barcode_decode_rgb8(const uint8_t *rgb,
                                         uint32_t width,
                                         uint32_t height,
                                         char *out,
                                         uintptr_t out_cap,
                                         uintptr_t *n_decoded);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CCDSIM_H */
