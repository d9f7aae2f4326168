// mlink: trace generation, frame inspection, simulated and UDP sessions,
// and log analysis over the motionlink C API.
//
// Exit codes: 0 success, 1 usage, 2 file or socket I/O, 3 protocol or
// analysis failure. Every failure prints a one-line diagnostic to stderr.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "motionlink/motionlink.h"

namespace {

constexpr int EXIT_USAGE = 1;
constexpr int EXIT_IO = 2;
constexpr int EXIT_PROTOCOL = 3;

int exit_code_for(ml_status st) {
  switch (st) {
    case ML_OK:
      return 0;
    case ML_INVALID_ARG:
      return EXIT_USAGE;
    case ML_IO_ERROR:
    case ML_SOCKET_ERROR:
      return EXIT_IO;
    default:
      return EXIT_PROTOCOL;
  }
}

int fail(const std::string& context, ml_status st) {
  std::cerr << "mlink: " << context << ": " << ml_status_str(st) << "\n";
  return exit_code_for(st);
}

bool parse_hex(const std::string& text, std::vector<uint8_t>& out) {
  std::string compact;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  if (compact.size() % 2 != 0) return false;
  out.clear();
  out.reserve(compact.size() / 2);
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  for (size_t i = 0; i < compact.size(); i += 2) {
    const int hi = nib(compact[i]);
    const int lo = nib(compact[i + 1]);
    if (hi < 0 || lo < 0) return false;
    out.push_back(static_cast<uint8_t>(hi * 16 + lo));
  }
  return true;
}

std::string to_hex(const uint8_t* data, size_t len) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (size_t i = 0; i < len; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xF]);
  }
  return out;
}

bool parse_key(const std::string& text, uint8_t key[ML_KEY_SIZE]) {
  std::vector<uint8_t> bytes;
  if (!parse_hex(text, bytes) || bytes.size() != ML_KEY_SIZE) return false;
  std::memcpy(key, bytes.data(), ML_KEY_SIZE);
  return true;
}

bool parse_axis(const std::string& name, int& out) {
  if (name == "x" || name == "X") out = ML_AXIS_X;
  else if (name == "y" || name == "Y") out = ML_AXIS_Y;
  else if (name == "z" || name == "Z") out = ML_AXIS_Z;
  else return false;
  return true;
}

// Evenly spaced gesture pulse schedule used by gen-trace, sim, and control.
struct GestureSchedule {
  bool enabled = true;
  double first_s = 2.5;
  double every_s = 5.0;
  double amplitude = 1.0;
  double width_ms = 200;
  int axis = ML_AXIS_Y;

  std::vector<ml_pulse> build(double duration_s) const {
    std::vector<ml_pulse> pulses;
    if (!enabled) return pulses;
    for (double onset = first_s; onset <= duration_s; onset += every_s)
      pulses.push_back(ml_pulse{onset, amplitude, width_ms, axis});
    return pulses;
  }
};

void add_gesture_flags(CLI::App* cmd, GestureSchedule& g, bool& no_gestures,
                       std::string& axis_name) {
  cmd->add_option("--gesture-first", g.first_s, "First pulse onset, seconds")
      ->capture_default_str();
  cmd->add_option("--gesture-every", g.every_s, "Pulse spacing, seconds")
      ->capture_default_str();
  cmd->add_option("--gesture-amplitude", g.amplitude, "Pulse amplitude, m/s^2")
      ->capture_default_str();
  cmd->add_option("--gesture-width", g.width_ms, "Pulse width, milliseconds")
      ->capture_default_str();
  cmd->add_option("--gesture-axis", axis_name, "Pulse axis: x, y, or z")
      ->capture_default_str();
  cmd->add_flag("--no-gestures", no_gestures, "Generate no pulses");
}

int load_trace_samples(const std::string& path, std::vector<ml_motion_frame>& out) {
  ml_trace* trace = nullptr;
  const ml_status st = ml_trace_read_csv(path.c_str(), &trace);
  if (st != ML_OK) return fail("read " + path, st);
  out.resize(ml_trace_size(trace));
  for (size_t i = 0; i < out.size(); ++i) ml_trace_frame(trace, i, &out[i]);
  ml_trace_destroy(trace);
  if (out.empty()) {
    std::cerr << "mlink: " << path << ": trace is empty\n";
    return EXIT_PROTOCOL;
  }
  return 0;
}

int write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    std::cerr << "mlink: cannot open " << path << " for writing\n";
    return EXIT_IO;
  }
  os << text;
  os.flush();
  if (!os) {
    std::cerr << "mlink: write failed: " << path << "\n";
    return EXIT_IO;
  }
  return 0;
}

int emit_report(ml_log* log, const std::string& format, const std::string& out_path) {
  int fmt = ML_FORMAT_TEXT;
  if (format == "json") fmt = ML_FORMAT_JSON;
  else if (format == "csv") fmt = ML_FORMAT_CSV;
  else if (format != "text") {
    std::cerr << "mlink: unknown format: " << format << "\n";
    return EXIT_USAGE;
  }
  char* text = nullptr;
  const ml_status st = ml_log_report(log, fmt, &text);
  if (st != ML_OK) return fail("analyze", st);
  int rc = 0;
  if (out_path.empty()) {
    std::cout << text;
  } else {
    rc = write_text_file(out_path, text);
  }
  ml_string_free(text);
  return rc;
}

float read_f32_le(const uint8_t* p) {
  uint32_t bits = static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
                  static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

uint64_t read_u64_le(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = v << 8 | p[i];
  return v;
}

uint32_t read_u32_le(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint16_t read_u16_le(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | p[1] << 8);
}

// ---- gen-trace ----

int cmd_gen_trace(double duration_s, double rate_hz, double noise, uint64_t seed,
                  const GestureSchedule& schedule, const std::string& out_path) {
  const std::vector<ml_pulse> pulses = schedule.build(duration_s);
  ml_trace_spec spec{};
  spec.duration_s = duration_s;
  spec.rate_hz = rate_hz;
  spec.pulses = pulses.empty() ? nullptr : pulses.data();
  spec.n_pulses = pulses.size();
  spec.noise_sigma = noise;
  spec.seed = seed;

  ml_trace* trace = nullptr;
  ml_status st = ml_trace_generate(&spec, &trace);
  if (st != ML_OK) return fail("generate trace", st);
  st = ml_trace_write_csv(trace, out_path.c_str());
  const size_t n = ml_trace_size(trace);
  ml_trace_destroy(trace);
  if (st != ML_OK) return fail("write " + out_path, st);
  std::cerr << "wrote " << n << " frames, " << pulses.size() << " pulses to " << out_path
            << "\n";
  return 0;
}

// ---- inspect ----

int cmd_inspect(const std::string& hex, const std::string& file,
                const uint8_t key[ML_KEY_SIZE]) {
  std::vector<uint8_t> bytes;
  if (!hex.empty()) {
    if (!parse_hex(hex, bytes)) {
      std::cerr << "mlink: --hex is not valid hex\n";
      return EXIT_USAGE;
    }
  } else {
    std::ifstream is(file, std::ios::binary);
    if (!is) {
      std::cerr << "mlink: cannot open " << file << "\n";
      return EXIT_IO;
    }
    bytes.assign(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
    // Accept both raw frames and hex dumps saved as text.
    if (bytes.size() != ML_MOTION_FRAME_SIZE && bytes.size() != ML_HAPTIC_FRAME_SIZE) {
      std::vector<uint8_t> from_hex;
      if (parse_hex(std::string(bytes.begin(), bytes.end()), from_hex)) bytes = from_hex;
    }
  }

  uint8_t version = 0, msg_type = 0;
  uint32_t session_id = 0, sequence = 0;
  uint16_t payload_len = 0, flags = 0;
  ml_status st = ml_peek_header(bytes.data(), bytes.size(), &version, &msg_type, &session_id,
                                &sequence, &payload_len, &flags);
  if (st != ML_OK) return fail("inspect", st);

  const bool motion = msg_type == ML_MSG_MOTION;
  std::printf("%s frame (%zu bytes)\n", motion ? "motion" : "haptic", bytes.size());
  std::printf("header\n");
  std::printf("  [00] magic        : %.4s\n", reinterpret_cast<const char*>(bytes.data()));
  std::printf("  [04] version      : %u\n", version);
  std::printf("  [05] msg_type     : %u (%s)\n", msg_type, motion ? "motion" : "haptic");
  std::printf("  [06] session_id   : %u\n", session_id);
  std::printf("  [10] sequence     : %u\n", sequence);
  std::printf("  [14] payload_len  : %u\n", payload_len);
  std::printf("  [16] flags        : 0x%04X\n", flags);

  const size_t expect =
      motion ? ML_MOTION_FRAME_SIZE : ML_HAPTIC_FRAME_SIZE;
  if (bytes.size() < expect) {
    std::cerr << "mlink: inspect: truncated frame (" << bytes.size() << " of " << expect
              << " bytes)\n";
    return EXIT_PROTOCOL;
  }
  std::printf("envelope\n");
  std::printf("  [18] env_version  : %u\n", bytes[18]);
  std::printf("  [19] cipher_id    : %u (%s)\n", bytes[19], bytes[19] == 0 ? "null" : "other");
  std::printf("  [20] nonce        : %s\n", to_hex(bytes.data() + 20, 16).c_str());
  std::printf("  [36] auth_tag     : %s\n", to_hex(bytes.data() + 36, 16).c_str());

  const uint8_t* pl = bytes.data() + ML_HEADER_SIZE + ML_ENVELOPE_SIZE;
  std::printf("payload\n");
  if (motion) {
    std::printf("  [52] timestamp_ms : %llu\n",
                static_cast<unsigned long long>(read_u64_le(pl)));
    std::printf("  [60] accel        : %.9g, %.9g, %.9g\n", read_f32_le(pl + 8),
                read_f32_le(pl + 12), read_f32_le(pl + 16));
    std::printf("  [72] gyro         : %.9g, %.9g, %.9g\n", read_f32_le(pl + 20),
                read_f32_le(pl + 24), read_f32_le(pl + 28));
    uint32_t computed = 0;
    ml_crc32(pl, 32, &computed);
    const uint32_t stored = read_u32_le(pl + 32);
    std::printf("  [84] checksum     : 0x%08X (%s)\n", stored,
                stored == computed ? "ok" : "mismatch");
  } else {
    std::printf("  [52] ref_timestamp_ms : %llu\n",
                static_cast<unsigned long long>(read_u64_le(pl)));
    std::printf("  [60] intensity        : %.9g\n", read_f32_le(pl + 8));
    std::printf("  [64] sharpness        : %.9g\n", read_f32_le(pl + 12));
    std::printf("  [68] duration_ms      : %u\n", read_u16_le(pl + 16));
  }

  if (motion) {
    ml_motion_frame frame{};
    st = ml_decode_motion(bytes.data(), bytes.size(), key, &frame, nullptr);
  } else {
    ml_haptic_trigger trig{};
    st = ml_decode_haptic(bytes.data(), bytes.size(), key, &trig, nullptr);
  }
  std::printf("verify : %s\n", ml_status_str(st));
  return st == ML_OK ? 0 : EXIT_PROTOCOL;
}

// ---- sim ----

struct SimFlags {
  uint32_t frames = 1000;
  double rate = 10;
  double delay = 70.4;
  double jitter = 3.7;
  double min_delay = 52.2;
  double max_delay = 82.2;
  bool no_min = false;
  bool no_max = false;
  double loss = 0;
  bool unordered = false;
  uint64_t seed = 42;
  std::string shape = "skew";
  double host_offset_ms = 0;
  double host_drift_ppm = 0;
  double ctrl_offset_ms = 0;
  double ctrl_drift_ppm = 0;
  double proc_delay_ms = 0;
  float tau = 0.5f;
  uint32_t refractory_ms = 500;
  std::string axis = "y";
  float intensity = 1.0f;
  float sharpness = 1.0f;
  uint16_t haptic_duration = 20;
  double noise = 0.1;
  uint64_t trace_seed = 7;
  uint32_t session_id = 1;
  std::string key_hex;
  std::string replay_csv;
  std::string format = "text";
  std::string out_report;
  std::string out_controller;
  std::string out_host;
  std::string out_merged;
};

int cmd_sim(const SimFlags& f, const GestureSchedule& schedule, bool no_gestures) {
  ml_sim_config cfg;
  ml_sim_config_defaults(&cfg);
  cfg.frames = f.frames;
  cfg.rate_hz = f.rate;
  cfg.session_id = f.session_id;
  if (!f.key_hex.empty() && !parse_key(f.key_hex, cfg.key)) {
    std::cerr << "mlink: --key must be 32 hex digits\n";
    return EXIT_USAGE;
  }
  cfg.link.base_delay_ms = f.delay;
  cfg.link.jitter_sigma_ms = f.jitter;
  cfg.link.has_min = f.no_min ? 0 : 1;
  cfg.link.min_delay_ms = f.min_delay;
  cfg.link.has_max = f.no_max ? 0 : 1;
  cfg.link.max_delay_ms = f.max_delay;
  cfg.link.loss_prob = f.loss;
  cfg.link.ordered = f.unordered ? 0 : 1;
  cfg.link.seed = f.seed;
  if (f.shape == "gauss") cfg.link.shape = ML_JITTER_GAUSS;
  else if (f.shape == "skew") cfg.link.shape = ML_JITTER_SKEW;
  else {
    std::cerr << "mlink: --shape must be gauss or skew\n";
    return EXIT_USAGE;
  }
  cfg.controller_clock = ml_clock_model{f.ctrl_offset_ms, f.ctrl_drift_ppm};
  cfg.host_clock = ml_clock_model{f.host_offset_ms, f.host_drift_ppm};
  cfg.host_proc_delay_ms = f.proc_delay_ms;
  cfg.detector.tau = f.tau;
  cfg.detector.refractory_ms = f.refractory_ms;
  if (!parse_axis(f.axis, cfg.detector.axis)) {
    std::cerr << "mlink: --axis must be x, y, or z\n";
    return EXIT_USAGE;
  }
  cfg.haptic_intensity = f.intensity;
  cfg.haptic_sharpness = f.sharpness;
  cfg.haptic_duration_ms = f.haptic_duration;
  cfg.noise_sigma = f.noise;
  cfg.trace_seed = f.trace_seed;

  GestureSchedule sched = schedule;
  sched.enabled = !no_gestures;
  const double duration_s = f.rate > 0 ? f.frames / f.rate : 0;
  const std::vector<ml_pulse> pulses = sched.build(duration_s);
  cfg.pulses = pulses.empty() ? nullptr : pulses.data();
  cfg.n_pulses = pulses.size();

  std::vector<ml_motion_frame> replay;
  if (!f.replay_csv.empty()) {
    const int rc = load_trace_samples(f.replay_csv, replay);
    if (rc != 0) return rc;
    cfg.replay = replay.data();
    cfg.n_replay = replay.size();
  }

  ml_sim_result* result = nullptr;
  ml_status st = ml_sim_run(&cfg, &result);
  if (st != ML_OK) return fail("sim", st);

  struct LogOut {
    int which;
    const std::string* path;
  };
  const LogOut outs[] = {{ML_LOG_CONTROLLER, &f.out_controller},
                         {ML_LOG_HOST, &f.out_host},
                         {ML_LOG_MERGED, &f.out_merged}};
  for (const auto& o : outs) {
    if (o.path->empty()) continue;
    ml_log* log = nullptr;
    st = ml_sim_result_log(result, o.which, &log);
    if (st == ML_OK) st = ml_log_write(log, o.path->c_str());
    ml_log_destroy(log);
    if (st != ML_OK) {
      ml_sim_result_destroy(result);
      return fail("write " + *o.path, st);
    }
  }

  ml_log* merged = nullptr;
  st = ml_sim_result_log(result, ML_LOG_MERGED, &merged);
  ml_sim_result_destroy(result);
  if (st != ML_OK) return fail("sim", st);
  const int rc = emit_report(merged, f.format, f.out_report);
  ml_log_destroy(merged);
  return rc;
}

// ---- serve / control ----

int cmd_serve(const std::string& bind_addr, uint32_t session_id, const std::string& key_hex,
              float tau, uint32_t refractory_ms, const std::string& axis, float intensity,
              float sharpness, uint16_t duration, double rate, uint32_t expect_frames,
              int64_t idle_ms, int64_t startup_ms, const std::string& out_path) {
  ml_udp_host_params p{};
  p.bind_addr = bind_addr.c_str();
  p.session_id = session_id;
  if (!key_hex.empty() && !parse_key(key_hex, p.key)) {
    std::cerr << "mlink: --key must be 32 hex digits\n";
    return EXIT_USAGE;
  }
  p.detector.tau = tau;
  p.detector.refractory_ms = refractory_ms;
  if (!parse_axis(axis, p.detector.axis)) {
    std::cerr << "mlink: --axis must be x, y, or z\n";
    return EXIT_USAGE;
  }
  p.haptic_intensity = intensity;
  p.haptic_sharpness = sharpness;
  p.haptic_duration_ms = duration;
  p.rate_hz = rate;
  p.expect_frames = expect_frames;
  p.idle_timeout_ms = idle_ms;
  p.startup_timeout_ms = startup_ms;

  ml_log* log = nullptr;
  uint64_t actions = 0;
  char* error = nullptr;
  const ml_status st = ml_udp_serve(&p, &log, &actions, &error);
  if (st != ML_OK) {
    std::cerr << "mlink: serve: " << (error != nullptr ? error : ml_status_str(st)) << "\n";
    ml_string_free(error);
    return exit_code_for(st);
  }
  ml_counters c{};
  ml_log_counters(log, &c);
  std::cerr << "received " << c.received << " frames, " << actions << " gestures, "
            << c.auth_failures << " auth failures, " << c.checksum_failures
            << " checksum failures\n";
  int rc = 0;
  if (!out_path.empty()) {
    const ml_status w = ml_log_write(log, out_path.c_str());
    if (w != ML_OK) rc = fail("write " + out_path, w);
  }
  ml_log_destroy(log);
  return rc;
}

int cmd_control(const std::string& bind_addr, const std::string& peer_addr, uint32_t frames,
                double rate, uint32_t session_id, const std::string& key_hex,
                const std::string& replay_csv, const GestureSchedule& schedule,
                bool no_gestures, double noise, uint64_t trace_seed, int64_t drain_ms,
                const std::string& out_path) {
  ml_udp_controller_params p{};
  p.bind_addr = bind_addr.c_str();
  p.peer_addr = peer_addr.c_str();
  p.frames = frames;
  p.rate_hz = rate;
  p.session_id = session_id;
  if (!key_hex.empty() && !parse_key(key_hex, p.key)) {
    std::cerr << "mlink: --key must be 32 hex digits\n";
    return EXIT_USAGE;
  }
  p.drain_ms = drain_ms;

  std::vector<ml_motion_frame> samples;
  if (!replay_csv.empty()) {
    const int rc = load_trace_samples(replay_csv, samples);
    if (rc != 0) return rc;
  } else {
    GestureSchedule sched = schedule;
    sched.enabled = !no_gestures;
    const double duration_s = rate > 0 ? frames / rate : 0;
    const std::vector<ml_pulse> pulses = sched.build(duration_s);
    ml_trace_spec spec{};
    spec.duration_s = duration_s;
    spec.rate_hz = rate;
    spec.pulses = pulses.empty() ? nullptr : pulses.data();
    spec.n_pulses = pulses.size();
    spec.noise_sigma = noise;
    spec.seed = trace_seed;
    ml_trace* trace = nullptr;
    const ml_status st = ml_trace_generate(&spec, &trace);
    if (st != ML_OK) return fail("generate trace", st);
    samples.resize(ml_trace_size(trace));
    for (size_t i = 0; i < samples.size(); ++i) ml_trace_frame(trace, i, &samples[i]);
    ml_trace_destroy(trace);
  }
  p.samples = samples.data();
  p.n_samples = samples.size();

  ml_log* log = nullptr;
  char* error = nullptr;
  const ml_status st = ml_udp_control(&p, &log, &error);
  if (st != ML_OK) {
    std::cerr << "mlink: control: " << (error != nullptr ? error : ml_status_str(st)) << "\n";
    ml_string_free(error);
    return exit_code_for(st);
  }
  ml_counters c{};
  ml_log_counters(log, &c);
  std::cerr << "sent " << c.sent << " frames\n";
  int rc = 0;
  if (!out_path.empty()) {
    const ml_status w = ml_log_write(log, out_path.c_str());
    if (w != ML_OK) rc = fail("write " + out_path, w);
  }
  ml_log_destroy(log);
  return rc;
}

// ---- analyze ----

int cmd_analyze(const std::string& log_path, const std::string& controller_path,
                const std::string& host_path, const std::string& format,
                const std::string& out_path) {
  ml_log* merged = nullptr;
  if (!log_path.empty()) {
    const ml_status st = ml_log_read(log_path.c_str(), &merged);
    if (st != ML_OK) return fail("read " + log_path, st);
  } else {
    ml_log* ctrl = nullptr;
    ml_log* host = nullptr;
    ml_status st = ml_log_read(controller_path.c_str(), &ctrl);
    if (st != ML_OK) return fail("read " + controller_path, st);
    st = ml_log_read(host_path.c_str(), &host);
    if (st != ML_OK) {
      ml_log_destroy(ctrl);
      return fail("read " + host_path, st);
    }
    st = ml_log_merge(ctrl, host, &merged);
    ml_log_destroy(ctrl);
    ml_log_destroy(host);
    if (st != ML_OK) return fail("merge", st);
  }
  const int rc = emit_report(merged, format, out_path);
  ml_log_destroy(merged);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"motion controller protocol toolkit"};
  app.require_subcommand(1);

  // gen-trace
  auto* gen = app.add_subcommand("gen-trace", "Generate a synthetic IMU trace CSV");
  double gt_duration = 100, gt_rate = 10, gt_noise = 0.1;
  uint64_t gt_seed = 7;
  GestureSchedule gt_sched;
  bool gt_no_gestures = false;
  std::string gt_axis = "y", gt_out;
  gen->add_option("--duration", gt_duration, "Trace length, seconds")->capture_default_str();
  gen->add_option("--rate", gt_rate, "Sample rate, Hz")->capture_default_str();
  gen->add_option("--noise", gt_noise, "Gaussian noise sigma, m/s^2")->capture_default_str();
  gen->add_option("--seed", gt_seed, "Noise RNG seed")->capture_default_str();
  add_gesture_flags(gen, gt_sched, gt_no_gestures, gt_axis);
  gen->add_option("--out", gt_out, "Output CSV path")->required();

  // inspect
  auto* ins = app.add_subcommand("inspect", "Decode one frame and dump its fields");
  std::string in_hex, in_file, in_key;
  ins->add_option("--hex", in_hex, "Frame as hex digits");
  ins->add_option("--file", in_file, "Frame file (raw bytes or hex text)");
  ins->add_option("--key", in_key, "Session key, 32 hex digits (default zero)");

  // sim
  auto* sim = app.add_subcommand("sim", "Deterministic end-to-end session in virtual time");
  SimFlags sf;
  GestureSchedule sim_sched;
  bool sim_no_gestures = false;
  std::string sim_gaxis = "y";
  sim->add_option("--frames", sf.frames, "Motion frames to send")->capture_default_str();
  sim->add_option("--rate", sf.rate, "Send rate, Hz")->capture_default_str();
  sim->add_option("--delay", sf.delay, "Link base delay, ms")->capture_default_str();
  sim->add_option("--jitter", sf.jitter, "Link jitter sigma, ms")->capture_default_str();
  sim->add_option("--min", sf.min_delay, "Delay lower bound, ms")->capture_default_str();
  sim->add_option("--max", sf.max_delay, "Delay upper bound, ms")->capture_default_str();
  sim->add_flag("--no-min", sf.no_min, "Disable the lower bound");
  sim->add_flag("--no-max", sf.no_max, "Disable the upper bound");
  sim->add_option("--loss", sf.loss, "Loss probability [0,1]")->capture_default_str();
  sim->add_flag("--unordered", sf.unordered, "Allow reordering at delivery");
  sim->add_option("--seed", sf.seed, "Link RNG seed")->capture_default_str();
  sim->add_option("--shape", sf.shape, "Jitter shape: skew or gauss")->capture_default_str();
  sim->add_option("--offset-ms", sf.host_offset_ms, "Host clock offset, ms")
      ->capture_default_str();
  sim->add_option("--drift-ppm", sf.host_drift_ppm, "Host clock drift, ppm")
      ->capture_default_str();
  sim->add_option("--ctrl-offset-ms", sf.ctrl_offset_ms, "Controller clock offset, ms")
      ->capture_default_str();
  sim->add_option("--ctrl-drift-ppm", sf.ctrl_drift_ppm, "Controller clock drift, ppm")
      ->capture_default_str();
  sim->add_option("--proc-delay", sf.proc_delay_ms, "Host processing delay, ms")
      ->capture_default_str();
  sim->add_option("--tau", sf.tau, "Gesture threshold, m/s^2")->capture_default_str();
  sim->add_option("--refractory", sf.refractory_ms, "Gesture refractory, ms")
      ->capture_default_str();
  sim->add_option("--axis", sf.axis, "Detector axis: x, y, or z")->capture_default_str();
  sim->add_option("--intensity", sf.intensity, "Haptic intensity [0,1]")->capture_default_str();
  sim->add_option("--sharpness", sf.sharpness, "Haptic sharpness [0,1]")->capture_default_str();
  sim->add_option("--haptic-duration", sf.haptic_duration, "Haptic duration, ms")
      ->capture_default_str();
  sim->add_option("--noise", sf.noise, "Trace noise sigma, m/s^2")->capture_default_str();
  sim->add_option("--trace-seed", sf.trace_seed, "Trace RNG seed")->capture_default_str();
  sim->add_option("--session-id", sf.session_id, "Session identifier")->capture_default_str();
  sim->add_option("--key", sf.key_hex, "Session key, 32 hex digits (default zero)");
  sim->add_option("--replay", sf.replay_csv, "Replay IMU input from a trace CSV");
  sim->add_option("--format", sf.format, "Report format: text, json, or csv")
      ->capture_default_str();
  sim->add_option("--out", sf.out_report, "Report path (default stdout)");
  sim->add_option("--out-controller", sf.out_controller, "Controller log JSONL path");
  sim->add_option("--out-host", sf.out_host, "Host log JSONL path");
  sim->add_option("--out-merged", sf.out_merged, "Merged log JSONL path");
  add_gesture_flags(sim, sim_sched, sim_no_gestures, sim_gaxis);

  // serve
  auto* srv = app.add_subcommand("serve", "Host a live UDP session");
  std::string sv_bind = "0.0.0.0:47001", sv_key, sv_axis = "y", sv_out;
  uint32_t sv_session = 1, sv_refractory = 500, sv_frames = 0;
  float sv_tau = 0.5f, sv_intensity = 1.0f, sv_sharpness = 1.0f;
  uint16_t sv_duration = 20;
  double sv_rate = 10;
  int64_t sv_idle = 2000, sv_startup = 30000;
  srv->add_option("--bind", sv_bind, "Bind address host:port")->capture_default_str();
  srv->add_option("--session-id", sv_session, "Session identifier")->capture_default_str();
  srv->add_option("--key", sv_key, "Session key, 32 hex digits (default zero)");
  srv->add_option("--tau", sv_tau, "Gesture threshold, m/s^2")->capture_default_str();
  srv->add_option("--refractory", sv_refractory, "Gesture refractory, ms")
      ->capture_default_str();
  srv->add_option("--axis", sv_axis, "Detector axis: x, y, or z")->capture_default_str();
  srv->add_option("--intensity", sv_intensity, "Haptic intensity [0,1]")->capture_default_str();
  srv->add_option("--sharpness", sv_sharpness, "Haptic sharpness [0,1]")->capture_default_str();
  srv->add_option("--haptic-duration", sv_duration, "Haptic duration, ms")
      ->capture_default_str();
  srv->add_option("--rate", sv_rate, "Expected send rate, Hz (for reporting)")
      ->capture_default_str();
  srv->add_option("--frames", sv_frames, "Stop after this many frames (0 = idle rule)")
      ->capture_default_str();
  srv->add_option("--idle-timeout", sv_idle, "Stop after this many ms of silence")
      ->capture_default_str();
  srv->add_option("--startup-timeout", sv_startup, "Give up if nothing arrives, ms")
      ->capture_default_str();
  srv->add_option("--out", sv_out, "Host log JSONL path");

  // control
  auto* ctl = app.add_subcommand("control", "Drive a live UDP session as the controller");
  std::string ct_bind = "0.0.0.0:0", ct_peer, ct_key, ct_replay, ct_gaxis = "y", ct_out;
  uint32_t ct_frames = 1000, ct_session = 1;
  double ct_rate = 10, ct_noise = 0.1;
  uint64_t ct_trace_seed = 7;
  int64_t ct_drain = 500;
  GestureSchedule ct_sched;
  bool ct_no_gestures = false;
  ctl->add_option("--bind", ct_bind, "Bind address host:port")->capture_default_str();
  ctl->add_option("--peer", ct_peer, "Host address host:port")->required();
  ctl->add_option("--frames", ct_frames, "Motion frames to send")->capture_default_str();
  ctl->add_option("--rate", ct_rate, "Send rate, Hz")->capture_default_str();
  ctl->add_option("--session-id", ct_session, "Session identifier")->capture_default_str();
  ctl->add_option("--key", ct_key, "Session key, 32 hex digits (default zero)");
  ctl->add_option("--replay", ct_replay, "Replay IMU input from a trace CSV");
  ctl->add_option("--noise", ct_noise, "Trace noise sigma, m/s^2")->capture_default_str();
  ctl->add_option("--trace-seed", ct_trace_seed, "Trace RNG seed")->capture_default_str();
  ctl->add_option("--drain", ct_drain, "Post-send listen window, ms")->capture_default_str();
  ctl->add_option("--out", ct_out, "Controller log JSONL path");
  add_gesture_flags(ctl, ct_sched, ct_no_gestures, ct_gaxis);

  // analyze
  auto* ana = app.add_subcommand("analyze", "Analyze stored JSONL logs and print a report");
  std::string an_log, an_ctrl, an_host, an_format = "text", an_out;
  ana->add_option("--log", an_log, "Merged log JSONL path");
  ana->add_option("--controller", an_ctrl, "Controller log JSONL path");
  ana->add_option("--host", an_host, "Host log JSONL path");
  ana->add_option("--format", an_format, "Report format: text, json, or csv")
      ->capture_default_str();
  ana->add_option("--out", an_out, "Report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "mlink: " << e.what() << "\n";
    return EXIT_USAGE;
  }

  if (gen->parsed()) {
    GestureSchedule sched = gt_sched;
    sched.enabled = !gt_no_gestures;
    if (!parse_axis(gt_axis, sched.axis)) {
      std::cerr << "mlink: --gesture-axis must be x, y, or z\n";
      return EXIT_USAGE;
    }
    return cmd_gen_trace(gt_duration, gt_rate, gt_noise, gt_seed, sched, gt_out);
  }
  if (ins->parsed()) {
    if (in_hex.empty() == in_file.empty()) {
      std::cerr << "mlink: inspect needs exactly one of --hex or --file\n";
      return EXIT_USAGE;
    }
    uint8_t key[ML_KEY_SIZE] = {0};
    if (!in_key.empty() && !parse_key(in_key, key)) {
      std::cerr << "mlink: --key must be 32 hex digits\n";
      return EXIT_USAGE;
    }
    return cmd_inspect(in_hex, in_file, key);
  }
  if (sim->parsed()) {
    GestureSchedule sched = sim_sched;
    if (!parse_axis(sim_gaxis, sched.axis)) {
      std::cerr << "mlink: --gesture-axis must be x, y, or z\n";
      return EXIT_USAGE;
    }
    return cmd_sim(sf, sched, sim_no_gestures);
  }
  if (srv->parsed()) {
    return cmd_serve(sv_bind, sv_session, sv_key, sv_tau, sv_refractory, sv_axis, sv_intensity,
                     sv_sharpness, sv_duration, sv_rate, sv_frames, sv_idle, sv_startup,
                     sv_out);
  }
  if (ctl->parsed()) {
    GestureSchedule sched = ct_sched;
    if (!parse_axis(ct_gaxis, sched.axis)) {
      std::cerr << "mlink: --gesture-axis must be x, y, or z\n";
      return EXIT_USAGE;
    }
    return cmd_control(ct_bind, ct_peer, ct_frames, ct_rate, ct_session, ct_key, ct_replay,
                       sched, ct_no_gestures, ct_noise, ct_trace_seed, ct_drain, ct_out);
  }
  if (ana->parsed()) {
    const bool have_pair = !an_ctrl.empty() && !an_host.empty();
    if (an_log.empty() && !have_pair) {
      std::cerr << "mlink: analyze needs --log or both --controller and --host\n";
      return EXIT_USAGE;
    }
    if (!an_log.empty() && have_pair) {
      std::cerr << "mlink: analyze takes --log or the --controller/--host pair, not both\n";
      return EXIT_USAGE;
    }
    return cmd_analyze(an_log, an_ctrl, an_host, an_format, an_out);
  }
  return EXIT_USAGE;
}
