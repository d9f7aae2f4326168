/* motionlink: phone-as-motion-controller protocol library.
 *
 * C interface over the C++ core: plain structs, opaque handles, integer
 * status codes. Every function returns ML_OK (0) on success unless noted.
 * Strings and handles returned through out-parameters are owned by the
 * caller and released with the matching ml_*_destroy / ml_string_free.
 */
#ifndef MOTIONLINK_H
#define MOTIONLINK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ML_API __declspec(dllexport)
#else
#define ML_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* ---- status codes ---- */

typedef enum ml_status {
  ML_OK = 0,
  ML_INVALID_ARG = 1,
  ML_TOO_SHORT = 2,
  ML_BAD_MAGIC = 3,
  ML_UNSUPPORTED_VERSION = 4,
  ML_UNSUPPORTED_CIPHER = 5,
  ML_BAD_LENGTH = 6,
  ML_WRONG_MSG_TYPE = 7,
  ML_AUTH_FAILURE = 8,
  ML_CHECKSUM_MISMATCH = 9,
  ML_NON_FINITE_SENSOR_VALUE = 10,
  ML_RANGE_ERROR = 11,
  ML_OUT_OF_ORDER_TIMESTAMP = 12,
  ML_EMPTY_LOG = 13,
  ML_NO_HAPTIC_EVENTS = 14,
  ML_SESSION_MISMATCH = 15,
  ML_PARSE_ERROR = 16,
  ML_IO_ERROR = 17,
  ML_TRANSPORT_CLOSED = 18,
  ML_SOURCE_EXHAUSTED = 19,
  ML_BUFFER_TOO_SMALL = 20,
  ML_SOCKET_ERROR = 21,
  ML_DEGENERATE_SERIES = 22
} ml_status;

ML_API const char* ml_status_str(ml_status status);

ML_API void ml_string_free(char* s);

/* ---- wire codec ---- */

#define ML_HEADER_SIZE 18
#define ML_ENVELOPE_SIZE 34
#define ML_MOTION_PAYLOAD_SIZE 36
#define ML_HAPTIC_PAYLOAD_SIZE 18
#define ML_MOTION_FRAME_SIZE 88
#define ML_HAPTIC_FRAME_SIZE 70
#define ML_KEY_SIZE 16
#define ML_SALT_SIZE 8

#define ML_MSG_MOTION 1
#define ML_MSG_HAPTIC 2

typedef struct ml_motion_frame {
  uint64_t timestamp_ms; /* UNIX epoch milliseconds */
  float accel[3];        /* m/s^2 */
  float gyro[3];         /* rad/s */
} ml_motion_frame;

typedef struct ml_haptic_trigger {
  uint64_t ref_timestamp_ms; /* timestamp of the motion frame answered */
  float intensity;           /* [0,1] */
  float sharpness;           /* [0,1] */
  uint16_t duration_ms;
} ml_haptic_trigger;

/* out must hold ML_MOTION_FRAME_SIZE bytes. */
ML_API ml_status ml_encode_motion(const ml_motion_frame* frame, const uint8_t key[ML_KEY_SIZE],
                                  uint32_t session_id, uint32_t sequence,
                                  const uint8_t salt[ML_SALT_SIZE], uint8_t* out,
                                  size_t out_len);

/* seq_out (optional) reports the frame's sequence number even when the
 * decode fails past the header stage. */
ML_API ml_status ml_decode_motion(const uint8_t* bytes, size_t len,
                                  const uint8_t key[ML_KEY_SIZE], ml_motion_frame* out,
                                  uint32_t* seq_out);

ML_API ml_status ml_encode_haptic(const ml_haptic_trigger* trigger,
                                  const uint8_t key[ML_KEY_SIZE], uint32_t session_id,
                                  uint32_t sequence, const uint8_t salt[ML_SALT_SIZE],
                                  uint8_t* out, size_t out_len);

ML_API ml_status ml_decode_haptic(const uint8_t* bytes, size_t len,
                                  const uint8_t key[ML_KEY_SIZE], ml_haptic_trigger* out,
                                  uint32_t* seq_out);

/* Structural header fields without integrity checks; any output pointer may
 * be NULL. */
ML_API ml_status ml_peek_header(const uint8_t* bytes, size_t len, uint8_t* version,
                                uint8_t* msg_type, uint32_t* session_id, uint32_t* sequence,
                                uint16_t* payload_len, uint16_t* flags);

ML_API ml_status ml_crc32(const uint8_t* data, size_t len, uint32_t* out);

ML_API ml_status ml_throughput(double rate_hz, uint64_t on_air_bytes, double* bits_per_s,
                               double* kbit_per_s, double* kibit_per_s);

/* ---- gesture detection ---- */

#define ML_AXIS_X 0
#define ML_AXIS_Y 1
#define ML_AXIS_Z 2

typedef struct ml_detector_config {
  float tau;              /* m/s^2, strict threshold; default 0.5 */
  uint32_t refractory_ms; /* default 500 */
  int axis;               /* ML_AXIS_*, default ML_AXIS_Y */
} ml_detector_config;

typedef struct ml_detector ml_detector;

ML_API ml_detector* ml_detector_create(const ml_detector_config* cfg);
ML_API void ml_detector_destroy(ml_detector* det);
ML_API void ml_detector_reset(ml_detector* det);

/* fired = 1 and peak_value set when this frame emits an event. */
ML_API ml_status ml_detector_feed(ml_detector* det, const ml_motion_frame* frame,
                                  uint32_t sequence, int* fired, float* peak_value);

/* ---- trace generation and CSV replay ---- */

typedef struct ml_pulse {
  double onset_s;
  double amplitude; /* m/s^2 */
  double width_ms;
  int axis; /* ML_AXIS_* */
} ml_pulse;

typedef struct ml_trace_spec {
  double duration_s;
  double rate_hz;       /* default 10 */
  const ml_pulse* pulses;
  size_t n_pulses;
  double noise_sigma;   /* m/s^2, accel axes only */
  uint64_t seed;
} ml_trace_spec;

typedef struct ml_trace ml_trace;

ML_API ml_status ml_trace_generate(const ml_trace_spec* spec, ml_trace** out);
ML_API ml_status ml_trace_read_csv(const char* path, ml_trace** out);
ML_API ml_status ml_trace_write_csv(const ml_trace* trace, const char* path);
ML_API void ml_trace_destroy(ml_trace* trace);
ML_API size_t ml_trace_size(const ml_trace* trace);
ML_API ml_status ml_trace_frame(const ml_trace* trace, size_t index, ml_motion_frame* out);

/* Runs the detector over a whole trace; events_out (optional) receives the
 * emitted event count. */
ML_API ml_status ml_trace_detect(const ml_trace* trace, const ml_detector_config* cfg,
                                 uint64_t* events_out);

/* ---- session logs ---- */

typedef struct ml_log ml_log;

typedef struct ml_counters {
  uint64_t sent;
  uint64_t received;
  uint64_t lost;
  uint64_t auth_failures;
  uint64_t checksum_failures;
} ml_counters;

ML_API ml_status ml_log_read(const char* path, ml_log** out);
ML_API ml_status ml_log_write(const ml_log* log, const char* path);
ML_API void ml_log_destroy(ml_log* log);
ML_API ml_status ml_log_merge(const ml_log* controller, const ml_log* host, ml_log** out);
ML_API ml_status ml_log_counters(const ml_log* log, ml_counters* out);
ML_API size_t ml_log_num_records(const ml_log* log);

#define ML_FORMAT_TEXT 0
#define ML_FORMAT_JSON 1
#define ML_FORMAT_CSV 2

/* Full analysis pipeline (latency, 3-sigma filter, normalized spread,
 * haptic round trip, throughput) rendered in the chosen format. */
ML_API ml_status ml_log_report(const ml_log* log, int format, char** out);

/* ---- simulated end-to-end session ---- */

#define ML_JITTER_GAUSS 0
#define ML_JITTER_SKEW 1

typedef struct ml_link_model {
  double base_delay_ms;
  double jitter_sigma_ms;
  int has_min;
  double min_delay_ms;
  int has_max;
  double max_delay_ms;
  double loss_prob;
  int ordered;
  uint64_t seed;
  int shape; /* ML_JITTER_* */
} ml_link_model;

typedef struct ml_clock_model {
  double offset_ms;
  double drift_ppm;
} ml_clock_model;

typedef struct ml_sim_config {
  uint32_t frames;
  double rate_hz;
  uint32_t session_id;
  uint8_t key[ML_KEY_SIZE];
  ml_link_model link;
  ml_clock_model controller_clock;
  ml_clock_model host_clock;
  double host_proc_delay_ms;
  ml_detector_config detector;
  float haptic_intensity;
  float haptic_sharpness;
  uint16_t haptic_duration_ms;
  const ml_pulse* pulses; /* scripted IMU input */
  size_t n_pulses;
  double noise_sigma;
  uint64_t trace_seed;
  const ml_motion_frame* replay; /* optional replay input, cycled; overrides pulses */
  size_t n_replay;
} ml_sim_config;

/* The operating-point defaults: 1000 frames at 10 Hz, link (70.4, 3.7,
 * [52.2, 82.2], loss 0, ordered, seed 42, skew shape), tau 0.5 on Y with
 * 500 ms refractory, haptic (1.0, 1.0, 20 ms), noise 0.1, trace seed 7.
 * pulses and replay are left empty; callers own those arrays. */
ML_API void ml_sim_config_defaults(ml_sim_config* cfg);

typedef struct ml_sim_result ml_sim_result;

ML_API ml_status ml_sim_run(const ml_sim_config* cfg, ml_sim_result** out);
ML_API void ml_sim_result_destroy(ml_sim_result* result);

#define ML_LOG_CONTROLLER 0
#define ML_LOG_HOST 1
#define ML_LOG_MERGED 2

/* Returns a fresh copy of the chosen side's log. */
ML_API ml_status ml_sim_result_log(const ml_sim_result* result, int which, ml_log** out);
ML_API uint64_t ml_sim_result_actions(const ml_sim_result* result);

/* Ground-truth delay of motion frame `sequence`; present = 0 when the link
 * dropped it. */
ML_API ml_status ml_sim_result_true_delay_us(const ml_sim_result* result, uint32_t sequence,
                                             int64_t* delay_us, int* present);

/* ---- UDP sessions ---- */

typedef struct ml_udp_controller_params {
  const char* bind_addr;  /* "host:port", port 0 for ephemeral */
  const char* peer_addr;  /* "host:port" */
  uint32_t frames;
  double rate_hz;
  uint32_t session_id;
  uint8_t key[ML_KEY_SIZE];
  const ml_motion_frame* samples; /* cycled; must be non-empty */
  size_t n_samples;
  int64_t drain_ms;
} ml_udp_controller_params;

typedef struct ml_udp_host_params {
  const char* bind_addr;
  uint32_t session_id;
  uint8_t key[ML_KEY_SIZE];
  ml_detector_config detector;
  float haptic_intensity;
  float haptic_sharpness;
  uint16_t haptic_duration_ms;
  double rate_hz;            /* stamped into the log for reporting */
  uint32_t expect_frames;    /* stop once received; 0 = idle rule only */
  int64_t idle_timeout_ms;
  int64_t startup_timeout_ms;
} ml_udp_host_params;

/* error_out (optional) receives a malloc'd diagnostic on failure. */
ML_API ml_status ml_udp_control(const ml_udp_controller_params* params, ml_log** out_log,
                                char** error_out);
ML_API ml_status ml_udp_serve(const ml_udp_host_params* params, ml_log** out_log,
                              uint64_t* actions_out, char** error_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MOTIONLINK_H */
