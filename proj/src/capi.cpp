#include "motionlink/motionlink.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "core/crc32.hpp"
#include "core/error.hpp"
#include "core/gesture.hpp"
#include "core/latlab.hpp"
#include "core/report.hpp"
#include "core/session.hpp"
#include "core/sessionlog.hpp"
#include "core/trace.hpp"
#include "core/udp.hpp"
#include "core/wire.hpp"

using mlink::Status;

// The public enum mirrors the internal one value for value; both sides are
// frozen ABI.
static_assert(ML_OK == static_cast<int>(Status::Ok));
static_assert(ML_INVALID_ARG == static_cast<int>(Status::InvalidArg));
static_assert(ML_TOO_SHORT == static_cast<int>(Status::TooShort));
static_assert(ML_BAD_MAGIC == static_cast<int>(Status::BadMagic));
static_assert(ML_UNSUPPORTED_VERSION == static_cast<int>(Status::UnsupportedVersion));
static_assert(ML_UNSUPPORTED_CIPHER == static_cast<int>(Status::UnsupportedCipher));
static_assert(ML_BAD_LENGTH == static_cast<int>(Status::BadLength));
static_assert(ML_WRONG_MSG_TYPE == static_cast<int>(Status::WrongMsgType));
static_assert(ML_AUTH_FAILURE == static_cast<int>(Status::AuthFailure));
static_assert(ML_CHECKSUM_MISMATCH == static_cast<int>(Status::ChecksumMismatch));
static_assert(ML_NON_FINITE_SENSOR_VALUE == static_cast<int>(Status::NonFiniteSensorValue));
static_assert(ML_RANGE_ERROR == static_cast<int>(Status::RangeError));
static_assert(ML_OUT_OF_ORDER_TIMESTAMP == static_cast<int>(Status::OutOfOrderTimestamp));
static_assert(ML_EMPTY_LOG == static_cast<int>(Status::EmptyLog));
static_assert(ML_NO_HAPTIC_EVENTS == static_cast<int>(Status::NoHapticEvents));
static_assert(ML_SESSION_MISMATCH == static_cast<int>(Status::SessionMismatch));
static_assert(ML_PARSE_ERROR == static_cast<int>(Status::ParseError));
static_assert(ML_IO_ERROR == static_cast<int>(Status::IoError));
static_assert(ML_TRANSPORT_CLOSED == static_cast<int>(Status::TransportClosed));
static_assert(ML_SOURCE_EXHAUSTED == static_cast<int>(Status::SourceExhausted));
static_assert(ML_BUFFER_TOO_SMALL == static_cast<int>(Status::BufferTooSmall));
static_assert(ML_SOCKET_ERROR == static_cast<int>(Status::SocketError));
static_assert(ML_DEGENERATE_SERIES == static_cast<int>(Status::DegenerateSeries));

static_assert(ML_HEADER_SIZE == mlink::wire::HEADER_SIZE);
static_assert(ML_ENVELOPE_SIZE == mlink::wire::ENVELOPE_SIZE);
static_assert(ML_MOTION_PAYLOAD_SIZE == mlink::wire::MOTION_PAYLOAD_SIZE);
static_assert(ML_HAPTIC_PAYLOAD_SIZE == mlink::wire::HAPTIC_PAYLOAD_SIZE);
static_assert(ML_MOTION_FRAME_SIZE == mlink::wire::MOTION_FRAME_SIZE);
static_assert(ML_HAPTIC_FRAME_SIZE == mlink::wire::HAPTIC_FRAME_SIZE);

struct ml_detector {
  mlink::gesture::Detector impl;
};

struct ml_trace {
  std::vector<mlink::wire::MotionFrame> frames;
};

struct ml_log {
  mlink::session::SessionLog impl;
};

struct ml_sim_result {
  mlink::session::SimResult impl;
};

namespace {

ml_status to_c(Status st) { return static_cast<ml_status>(st); }

mlink::wire::MotionFrame from_c(const ml_motion_frame& f) {
  mlink::wire::MotionFrame out;
  out.timestamp_ms = f.timestamp_ms;
  for (int i = 0; i < 3; ++i) {
    out.accel[i] = f.accel[i];
    out.gyro[i] = f.gyro[i];
  }
  return out;
}

ml_motion_frame to_c(const mlink::wire::MotionFrame& f) {
  ml_motion_frame out{};
  out.timestamp_ms = f.timestamp_ms;
  for (int i = 0; i < 3; ++i) {
    out.accel[i] = f.accel[i];
    out.gyro[i] = f.gyro[i];
  }
  return out;
}

Status detector_config_from_c(const ml_detector_config& c, mlink::gesture::DetectorConfig& out) {
  if (c.axis < ML_AXIS_X || c.axis > ML_AXIS_Z) return Status::InvalidArg;
  out.tau = c.tau;
  out.refractory_ms = c.refractory_ms;
  out.axis = static_cast<mlink::gesture::Axis>(c.axis);
  return Status::Ok;
}

mlink::wire::SessionKey key_from_c(const uint8_t key[ML_KEY_SIZE]) {
  mlink::wire::SessionKey k{};
  std::memcpy(k.data(), key, k.size());
  return k;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Status trace_spec_from_c(const ml_trace_spec& c, mlink::trace::TraceSpec& out) {
  out.duration_s = c.duration_s;
  out.rate_hz = c.rate_hz;
  out.noise_sigma = c.noise_sigma;
  out.seed = c.seed;
  out.pulses.clear();
  if (c.n_pulses > 0 && c.pulses == nullptr) return Status::InvalidArg;
  for (size_t i = 0; i < c.n_pulses; ++i) {
    const ml_pulse& p = c.pulses[i];
    if (p.axis < ML_AXIS_X || p.axis > ML_AXIS_Z) return Status::InvalidArg;
    out.pulses.push_back(mlink::trace::GesturePulse{
        p.onset_s, p.amplitude, p.width_ms, static_cast<mlink::gesture::Axis>(p.axis)});
  }
  return Status::Ok;
}

}  // namespace

extern "C" {

const char* ml_status_str(ml_status status) {
  return mlink::status_str(static_cast<Status>(status));
}

void ml_string_free(char* s) { std::free(s); }

ml_status ml_encode_motion(const ml_motion_frame* frame, const uint8_t key[ML_KEY_SIZE],
                           uint32_t session_id, uint32_t sequence,
                           const uint8_t salt[ML_SALT_SIZE], uint8_t* out, size_t out_len) {
  if (frame == nullptr || key == nullptr || salt == nullptr || out == nullptr)
    return ML_INVALID_ARG;
  if (out_len < ML_MOTION_FRAME_SIZE) return ML_BUFFER_TOO_SMALL;
  mlink::wire::FrameHeader h;
  h.session_id = session_id;
  h.sequence = sequence;
  mlink::wire::NonceSalt s{};
  std::memcpy(s.data(), salt, s.size());
  return to_c(mlink::wire::encode_motion(
      from_c(*frame), key_from_c(key), h, s,
      std::span<uint8_t, mlink::wire::MOTION_FRAME_SIZE>(out, mlink::wire::MOTION_FRAME_SIZE)));
}

ml_status ml_decode_motion(const uint8_t* bytes, size_t len, const uint8_t key[ML_KEY_SIZE],
                           ml_motion_frame* out, uint32_t* seq_out) {
  if (bytes == nullptr || key == nullptr || out == nullptr) return ML_INVALID_ARG;
  mlink::wire::MotionFrame f;
  mlink::wire::DecodeInfo info;
  const Status st =
      mlink::wire::decode_motion(std::span<const uint8_t>(bytes, len), key_from_c(key), f, &info);
  if (seq_out != nullptr) *seq_out = info.sequence;
  if (st != Status::Ok) return to_c(st);
  *out = to_c(f);
  return ML_OK;
}

ml_status ml_encode_haptic(const ml_haptic_trigger* trigger, const uint8_t key[ML_KEY_SIZE],
                           uint32_t session_id, uint32_t sequence,
                           const uint8_t salt[ML_SALT_SIZE], uint8_t* out, size_t out_len) {
  if (trigger == nullptr || key == nullptr || salt == nullptr || out == nullptr)
    return ML_INVALID_ARG;
  if (out_len < ML_HAPTIC_FRAME_SIZE) return ML_BUFFER_TOO_SMALL;
  mlink::wire::HapticTrigger t;
  t.ref_timestamp_ms = trigger->ref_timestamp_ms;
  t.intensity = trigger->intensity;
  t.sharpness = trigger->sharpness;
  t.duration_ms = trigger->duration_ms;
  mlink::wire::FrameHeader h;
  h.session_id = session_id;
  h.sequence = sequence;
  mlink::wire::NonceSalt s{};
  std::memcpy(s.data(), salt, s.size());
  return to_c(mlink::wire::encode_haptic(
      t, key_from_c(key), h, s,
      std::span<uint8_t, mlink::wire::HAPTIC_FRAME_SIZE>(out, mlink::wire::HAPTIC_FRAME_SIZE)));
}

ml_status ml_decode_haptic(const uint8_t* bytes, size_t len, const uint8_t key[ML_KEY_SIZE],
                           ml_haptic_trigger* out, uint32_t* seq_out) {
  if (bytes == nullptr || key == nullptr || out == nullptr) return ML_INVALID_ARG;
  mlink::wire::HapticTrigger t;
  mlink::wire::DecodeInfo info;
  const Status st =
      mlink::wire::decode_haptic(std::span<const uint8_t>(bytes, len), key_from_c(key), t, &info);
  if (seq_out != nullptr) *seq_out = info.sequence;
  if (st != Status::Ok) return to_c(st);
  out->ref_timestamp_ms = t.ref_timestamp_ms;
  out->intensity = t.intensity;
  out->sharpness = t.sharpness;
  out->duration_ms = t.duration_ms;
  return ML_OK;
}

ml_status ml_peek_header(const uint8_t* bytes, size_t len, uint8_t* version, uint8_t* msg_type,
                         uint32_t* session_id, uint32_t* sequence, uint16_t* payload_len,
                         uint16_t* flags) {
  if (bytes == nullptr) return ML_INVALID_ARG;
  mlink::wire::FrameHeader h;
  const Status st = mlink::wire::peek_header(std::span<const uint8_t>(bytes, len), h);
  if (st != Status::Ok) return to_c(st);
  if (version != nullptr) *version = h.version;
  if (msg_type != nullptr) *msg_type = h.msg_type;
  if (session_id != nullptr) *session_id = h.session_id;
  if (sequence != nullptr) *sequence = h.sequence;
  if (payload_len != nullptr) *payload_len = h.payload_len;
  if (flags != nullptr) *flags = h.flags;
  return ML_OK;
}

ml_status ml_crc32(const uint8_t* data, size_t len, uint32_t* out) {
  if ((data == nullptr && len > 0) || out == nullptr) return ML_INVALID_ARG;
  *out = mlink::crc32_ieee(data, len);
  return ML_OK;
}

ml_status ml_throughput(double rate_hz, uint64_t on_air_bytes, double* bits_per_s,
                        double* kbit_per_s, double* kibit_per_s) {
  mlink::wire::ThroughputReport t;
  const Status st = mlink::wire::throughput_report(rate_hz, on_air_bytes, t);
  if (st != Status::Ok) return to_c(st);
  if (bits_per_s != nullptr) *bits_per_s = t.bits_per_s;
  if (kbit_per_s != nullptr) *kbit_per_s = t.kbit_per_s;
  if (kibit_per_s != nullptr) *kibit_per_s = t.kibit_per_s;
  return ML_OK;
}

ml_detector* ml_detector_create(const ml_detector_config* cfg) {
  if (cfg == nullptr) return nullptr;
  mlink::gesture::DetectorConfig c;
  if (detector_config_from_c(*cfg, c) != Status::Ok) return nullptr;
  return new (std::nothrow) ml_detector{mlink::gesture::Detector(c)};
}

void ml_detector_destroy(ml_detector* det) { delete det; }

void ml_detector_reset(ml_detector* det) {
  if (det != nullptr) det->impl.reset();
}

ml_status ml_detector_feed(ml_detector* det, const ml_motion_frame* frame, uint32_t sequence,
                           int* fired, float* peak_value) {
  if (det == nullptr || frame == nullptr) return ML_INVALID_ARG;
  std::optional<mlink::gesture::GestureEvent> ev;
  const Status st = det->impl.detect(from_c(*frame), sequence, ev);
  if (st != Status::Ok) return to_c(st);
  if (fired != nullptr) *fired = ev.has_value() ? 1 : 0;
  if (peak_value != nullptr) *peak_value = ev.has_value() ? ev->peak_value : 0.0f;
  return ML_OK;
}

ml_status ml_trace_generate(const ml_trace_spec* spec, ml_trace** out) {
  if (spec == nullptr || out == nullptr) return ML_INVALID_ARG;
  mlink::trace::TraceSpec s;
  Status st = trace_spec_from_c(*spec, s);
  if (st != Status::Ok) return to_c(st);
  auto trace = std::make_unique<ml_trace>();
  st = mlink::trace::generate(s, trace->frames);
  if (st != Status::Ok) return to_c(st);
  *out = trace.release();
  return ML_OK;
}

ml_status ml_trace_read_csv(const char* path, ml_trace** out) {
  if (path == nullptr || out == nullptr) return ML_INVALID_ARG;
  auto trace = std::make_unique<ml_trace>();
  const Status st = mlink::trace::read_csv(path, trace->frames);
  if (st != Status::Ok) return to_c(st);
  *out = trace.release();
  return ML_OK;
}

ml_status ml_trace_write_csv(const ml_trace* trace, const char* path) {
  if (trace == nullptr || path == nullptr) return ML_INVALID_ARG;
  return to_c(mlink::trace::write_csv(path, trace->frames));
}

void ml_trace_destroy(ml_trace* trace) { delete trace; }

size_t ml_trace_size(const ml_trace* trace) { return trace == nullptr ? 0 : trace->frames.size(); }

ml_status ml_trace_frame(const ml_trace* trace, size_t index, ml_motion_frame* out) {
  if (trace == nullptr || out == nullptr) return ML_INVALID_ARG;
  if (index >= trace->frames.size()) return ML_RANGE_ERROR;
  *out = to_c(trace->frames[index]);
  return ML_OK;
}

ml_status ml_trace_detect(const ml_trace* trace, const ml_detector_config* cfg,
                          uint64_t* events_out) {
  if (trace == nullptr || cfg == nullptr) return ML_INVALID_ARG;
  mlink::gesture::DetectorConfig c;
  Status st = detector_config_from_c(*cfg, c);
  if (st != Status::Ok) return to_c(st);
  std::vector<mlink::gesture::GestureEvent> events;
  st = mlink::gesture::detect_stream(trace->frames, c, events);
  if (st != Status::Ok) return to_c(st);
  if (events_out != nullptr) *events_out = events.size();
  return ML_OK;
}

ml_status ml_log_read(const char* path, ml_log** out) {
  if (path == nullptr || out == nullptr) return ML_INVALID_ARG;
  auto log = std::make_unique<ml_log>();
  const Status st = mlink::session::read_jsonl(path, log->impl);
  if (st != Status::Ok) return to_c(st);
  *out = log.release();
  return ML_OK;
}

ml_status ml_log_write(const ml_log* log, const char* path) {
  if (log == nullptr || path == nullptr) return ML_INVALID_ARG;
  return to_c(mlink::session::write_jsonl(path, log->impl));
}

void ml_log_destroy(ml_log* log) { delete log; }

ml_status ml_log_merge(const ml_log* controller, const ml_log* host, ml_log** out) {
  if (controller == nullptr || host == nullptr || out == nullptr) return ML_INVALID_ARG;
  auto merged = std::make_unique<ml_log>();
  const Status st = mlink::session::merge_logs(controller->impl, host->impl, merged->impl);
  if (st != Status::Ok) return to_c(st);
  *out = merged.release();
  return ML_OK;
}

ml_status ml_log_counters(const ml_log* log, ml_counters* out) {
  if (log == nullptr || out == nullptr) return ML_INVALID_ARG;
  out->sent = log->impl.counters.sent;
  out->received = log->impl.counters.received;
  out->lost = log->impl.counters.lost;
  out->auth_failures = log->impl.counters.auth_failures;
  out->checksum_failures = log->impl.counters.checksum_failures;
  return ML_OK;
}

size_t ml_log_num_records(const ml_log* log) {
  return log == nullptr ? 0 : log->impl.records.size();
}

ml_status ml_log_report(const ml_log* log, int format, char** out) {
  if (log == nullptr || out == nullptr) return ML_INVALID_ARG;
  if (format < ML_FORMAT_TEXT || format > ML_FORMAT_CSV) return ML_INVALID_ARG;
  mlink::latlab::Analysis analysis;
  const Status st = mlink::latlab::analyze(log->impl, analysis);
  if (st != Status::Ok) return to_c(st);
  const std::string text =
      mlink::report::render(analysis, static_cast<mlink::report::Format>(format));
  *out = dup_string(text);
  return *out != nullptr ? ML_OK : ML_INVALID_ARG;
}

void ml_sim_config_defaults(ml_sim_config* cfg) {
  if (cfg == nullptr) return;
  *cfg = ml_sim_config{};
  cfg->frames = 1000;
  cfg->rate_hz = 10;
  cfg->session_id = 1;
  cfg->link.base_delay_ms = 70.4;
  cfg->link.jitter_sigma_ms = 3.7;
  cfg->link.has_min = 1;
  cfg->link.min_delay_ms = 52.2;
  cfg->link.has_max = 1;
  cfg->link.max_delay_ms = 82.2;
  cfg->link.loss_prob = 0;
  cfg->link.ordered = 1;
  cfg->link.seed = 42;
  cfg->link.shape = ML_JITTER_SKEW;
  cfg->detector.tau = 0.5f;
  cfg->detector.refractory_ms = 500;
  cfg->detector.axis = ML_AXIS_Y;
  cfg->haptic_intensity = 1.0f;
  cfg->haptic_sharpness = 1.0f;
  cfg->haptic_duration_ms = 20;
  cfg->noise_sigma = 0.1;
  cfg->trace_seed = 7;
}

ml_status ml_sim_run(const ml_sim_config* cfg, ml_sim_result** out) {
  if (cfg == nullptr || out == nullptr) return ML_INVALID_ARG;
  if (cfg->link.shape != ML_JITTER_GAUSS && cfg->link.shape != ML_JITTER_SKEW)
    return ML_INVALID_ARG;

  mlink::session::SimConfig c;
  c.frames = cfg->frames;
  c.rate_hz = cfg->rate_hz;
  c.session_id = cfg->session_id;
  c.key = key_from_c(cfg->key);
  c.link.base_delay_ms = cfg->link.base_delay_ms;
  c.link.jitter_sigma_ms = cfg->link.jitter_sigma_ms;
  if (cfg->link.has_min != 0) c.link.min_delay_ms = cfg->link.min_delay_ms;
  else c.link.min_delay_ms.reset();
  if (cfg->link.has_max != 0) c.link.max_delay_ms = cfg->link.max_delay_ms;
  else c.link.max_delay_ms.reset();
  c.link.loss_prob = cfg->link.loss_prob;
  c.link.ordered = cfg->link.ordered != 0;
  c.link.seed = cfg->link.seed;
  c.link.shape = static_cast<mlink::netsim::JitterShape>(cfg->link.shape);
  c.controller_clock.offset_us =
      static_cast<int64_t>(std::llround(cfg->controller_clock.offset_ms * 1000.0));
  c.controller_clock.drift_ppm = cfg->controller_clock.drift_ppm;
  c.host_clock.offset_us = static_cast<int64_t>(std::llround(cfg->host_clock.offset_ms * 1000.0));
  c.host_clock.drift_ppm = cfg->host_clock.drift_ppm;
  c.host_proc_delay_us = static_cast<int64_t>(std::llround(cfg->host_proc_delay_ms * 1000.0));
  Status st = detector_config_from_c(cfg->detector, c.detector);
  if (st != Status::Ok) return to_c(st);
  c.haptic_intensity = cfg->haptic_intensity;
  c.haptic_sharpness = cfg->haptic_sharpness;
  c.haptic_duration_ms = cfg->haptic_duration_ms;
  if (cfg->n_pulses > 0 && cfg->pulses == nullptr) return ML_INVALID_ARG;
  for (size_t i = 0; i < cfg->n_pulses; ++i) {
    const ml_pulse& p = cfg->pulses[i];
    if (p.axis < ML_AXIS_X || p.axis > ML_AXIS_Z) return ML_INVALID_ARG;
    c.pulses.push_back(mlink::trace::GesturePulse{
        p.onset_s, p.amplitude, p.width_ms, static_cast<mlink::gesture::Axis>(p.axis)});
  }
  c.noise_sigma = cfg->noise_sigma;
  c.trace_seed = cfg->trace_seed;
  if (cfg->n_replay > 0 && cfg->replay == nullptr) return ML_INVALID_ARG;
  for (size_t i = 0; i < cfg->n_replay; ++i) c.replay.push_back(from_c(cfg->replay[i]));

  auto result = std::make_unique<ml_sim_result>();
  st = mlink::session::run_simulation(c, result->impl);
  if (st != Status::Ok) return to_c(st);
  *out = result.release();
  return ML_OK;
}

void ml_sim_result_destroy(ml_sim_result* result) { delete result; }

ml_status ml_sim_result_log(const ml_sim_result* result, int which, ml_log** out) {
  if (result == nullptr || out == nullptr) return ML_INVALID_ARG;
  auto log = std::make_unique<ml_log>();
  switch (which) {
    case ML_LOG_CONTROLLER:
      log->impl = result->impl.controller_log;
      break;
    case ML_LOG_HOST:
      log->impl = result->impl.host_log;
      break;
    case ML_LOG_MERGED:
      log->impl = result->impl.merged;
      break;
    default:
      return ML_INVALID_ARG;
  }
  *out = log.release();
  return ML_OK;
}

uint64_t ml_sim_result_actions(const ml_sim_result* result) {
  return result == nullptr ? 0 : result->impl.actions;
}

ml_status ml_sim_result_true_delay_us(const ml_sim_result* result, uint32_t sequence,
                                      int64_t* delay_us, int* present) {
  if (result == nullptr) return ML_INVALID_ARG;
  if (sequence >= result->impl.true_delay_us.size()) return ML_RANGE_ERROR;
  const auto& v = result->impl.true_delay_us[sequence];
  if (present != nullptr) *present = v.has_value() ? 1 : 0;
  if (delay_us != nullptr) *delay_us = v.value_or(0);
  return ML_OK;
}

ml_status ml_udp_control(const ml_udp_controller_params* params, ml_log** out_log,
                         char** error_out) {
  if (params == nullptr || out_log == nullptr) return ML_INVALID_ARG;
  if (error_out != nullptr) *error_out = nullptr;
  if (params->bind_addr == nullptr || params->peer_addr == nullptr ||
      params->samples == nullptr || params->n_samples == 0)
    return ML_INVALID_ARG;

  mlink::udp::Endpoint bind_ep, peer_ep;
  Status st = mlink::udp::parse_endpoint(params->bind_addr, bind_ep);
  if (st != Status::Ok) return to_c(st);
  st = mlink::udp::parse_endpoint(params->peer_addr, peer_ep);
  if (st != Status::Ok) return to_c(st);

  mlink::udp::ControllerParams p;
  p.frames = params->frames;
  p.rate_hz = params->rate_hz;
  p.session_id = params->session_id;
  p.key = key_from_c(params->key);
  p.samples.reserve(params->n_samples);
  for (size_t i = 0; i < params->n_samples; ++i) p.samples.push_back(from_c(params->samples[i]));
  p.drain_ms = params->drain_ms;

  auto log = std::make_unique<ml_log>();
  std::string error;
  st = mlink::udp::run_controller(bind_ep, peer_ep, p, log->impl, nullptr, &error);
  if (st != Status::Ok) {
    if (error_out != nullptr && !error.empty()) *error_out = dup_string(error);
    return to_c(st);
  }
  *out_log = log.release();
  return ML_OK;
}

ml_status ml_udp_serve(const ml_udp_host_params* params, ml_log** out_log, uint64_t* actions_out,
                       char** error_out) {
  if (params == nullptr || out_log == nullptr) return ML_INVALID_ARG;
  if (error_out != nullptr) *error_out = nullptr;
  if (params->bind_addr == nullptr) return ML_INVALID_ARG;

  mlink::udp::Endpoint bind_ep;
  Status st = mlink::udp::parse_endpoint(params->bind_addr, bind_ep);
  if (st != Status::Ok) return to_c(st);

  mlink::udp::HostParams p;
  p.session_id = params->session_id;
  p.key = key_from_c(params->key);
  st = detector_config_from_c(params->detector, p.detector);
  if (st != Status::Ok) return to_c(st);
  p.haptic_intensity = params->haptic_intensity;
  p.haptic_sharpness = params->haptic_sharpness;
  p.haptic_duration_ms = params->haptic_duration_ms;
  p.rate_hz = params->rate_hz;
  p.expect_frames = params->expect_frames;
  p.idle_timeout_ms = params->idle_timeout_ms;
  p.startup_timeout_ms = params->startup_timeout_ms;

  auto log = std::make_unique<ml_log>();
  std::string error;
  uint64_t actions = 0;
  st = mlink::udp::run_host(bind_ep, p, log->impl, nullptr, &actions, &error);
  if (st != Status::Ok) {
    if (error_out != nullptr && !error.empty()) *error_out = dup_string(error);
    return to_c(st);
  }
  if (actions_out != nullptr) *actions_out = actions;
  *out_log = log.release();
  return ML_OK;
}

}  // extern "C"
