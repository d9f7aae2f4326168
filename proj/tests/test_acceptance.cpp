// Shipping gate: one check per release criterion, one pass/fail line each.
// Exit 0 only when every criterion holds. `--slow` runs the full-duration
// network exchange instead (skipped with exit 77 unless MLINK_RUN_SLOW=1).
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "core/latlab.hpp"
#include "core/linksim.hpp"
#include "core/report.hpp"
#include "core/rng.hpp"
#include "core/session.hpp"
#include "core/sessionlog.hpp"
#include "core/trace.hpp"
#include "core/udp.hpp"
#include "core/wire.hpp"

using namespace mlink;

namespace {

int g_failures = 0;

void criterion(int n, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  if (!ok) ++g_failures;
}

int64_t elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - since)
      .count();
}

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return false;
  std::ostringstream ss;
  ss << is.rdbuf();
  out = ss.str();
  return true;
}

// The reference frame all corruption checks flip: the all-zero motion frame
// sealed with the all-zero key.
bool load_fixture_frame(std::vector<uint8_t>& out, std::string& err) {
  std::string hex;
  if (!read_file(std::string(FIXTURE_DIR) + "/motion_zero.hex", hex)) {
    err = "cannot read fixtures/motion_zero.hex";
    return false;
  }
  out.clear();
  int hi = -1;
  for (char c : hex) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else if (c == '\n' || c == ' ') continue;
    else {
      err = "bad hex digit in fixture";
      return false;
    }
    if (hi < 0) {
      hi = v;
    } else {
      out.push_back(static_cast<uint8_t>(hi << 4 | v));
      hi = -1;
    }
  }
  if (hi >= 0 || out.size() != wire::MOTION_FRAME_SIZE) {
    err = "fixture is not an 88-byte frame";
    return false;
  }
  return true;
}

// Shipping defaults: the 1000-frame virtual run with the reference link
// shape and a gesture pulse every 5 s starting at 2.5 s.
session::SimConfig default_sim_config() {
  session::SimConfig cfg;
  cfg.noise_sigma = 0.1;
  const double duration_s = cfg.frames / cfg.rate_hz;
  for (double onset = 2.5; onset <= duration_s; onset += 5.0)
    cfg.pulses.push_back(trace::GesturePulse{onset, 1.0, 200.0, gesture::Axis::Y});
  return cfg;
}

// ---- criterion 1: wire conformance ----

void criterion1() {
  static_assert(wire::MOTION_FRAME_SIZE == 88);
  static_assert(wire::HAPTIC_FRAME_SIZE == 70);

  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  auto rand_f32 = [&](double scale) {
    return static_cast<float>((rng.uniform() * 2.0 - 1.0) * scale);
  };

  size_t motion_ok = 0;
  size_t haptic_ok = 0;
  for (uint32_t i = 0; i < 10'000; ++i) {
    wire::SessionKey key;
    for (auto& b : key) b = static_cast<uint8_t>(rng.next_u64());
    wire::NonceSalt salt;
    for (auto& b : salt) b = static_cast<uint8_t>(rng.next_u64());
    wire::FrameHeader hdr;
    hdr.session_id = static_cast<uint32_t>(rng.next_u64());
    hdr.sequence = static_cast<uint32_t>(rng.next_u64());

    if (i % 2 == 0) {
      wire::MotionFrame f;
      f.timestamp_ms = rng.next_u64() >> 16;
      for (auto& v : f.accel) v = rand_f32(100.0);
      for (auto& v : f.gyro) v = rand_f32(50.0);
      uint8_t buf[wire::MOTION_FRAME_SIZE];
      if (wire::encode_motion(f, key, hdr, salt, buf) != Status::Ok) continue;
      wire::MotionFrame back;
      wire::DecodeInfo info;
      if (wire::decode_motion(buf, key, back, &info) != Status::Ok) continue;
      if (back == f && info.sequence == hdr.sequence &&
          info.session_id == hdr.session_id)
        ++motion_ok;
    } else {
      wire::HapticTrigger t;
      t.ref_timestamp_ms = rng.next_u64() >> 16;
      t.intensity = static_cast<float>(rng.uniform());
      t.sharpness = static_cast<float>(rng.uniform());
      t.duration_ms = static_cast<uint16_t>(rng.next_u64());
      hdr.msg_type = wire::MSG_HAPTIC;
      uint8_t buf[wire::HAPTIC_FRAME_SIZE];
      if (wire::encode_haptic(t, key, hdr, salt, buf) != Status::Ok) continue;
      wire::HapticTrigger back;
      if (wire::decode_haptic(buf, key, back, nullptr) != Status::Ok) continue;
      if (back == t) ++haptic_ok;
    }
  }
  const int64_t ms = elapsed_ms(t0);

  std::ostringstream d;
  d << motion_ok + haptic_ok
    << "/10000 randomized frames roundtrip bit-exact (88/70 B), " << ms << " ms";
  criterion(1, motion_ok == 5000 && haptic_ok == 5000 && ms < 5000, d.str());
}

// ---- criterion 2: corruption detection ----

// Single-bit wire flips with no reseal: structural bytes fail their own
// parse step; every byte under the auth tag fails authentication.
Status expected_raw_flip(size_t byte) {
  if (byte <= 3) return Status::BadMagic;
  if (byte == 4) return Status::UnsupportedVersion;
  if (byte == 5) return Status::WrongMsgType;
  if (byte == 14 || byte == 15) return Status::BadLength;
  if (byte == 18) return Status::UnsupportedVersion;
  if (byte == 19) return Status::UnsupportedCipher;
  return Status::AuthFailure;
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<uint8_t> frame;
  std::string err;
  if (!load_fixture_frame(frame, err)) {
    criterion(2, false, err);
    return;
  }
  const wire::SessionKey key{};

  // 32 checksummed payload bytes; flips resealed so they pass auth and must
  // be caught by the checksum.
  size_t checksum_hits = 0;
  for (size_t bit = 0; bit < 256; ++bit) {
    std::vector<uint8_t> c = frame;
    c[52 + bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    if (wire::reseal(std::span<uint8_t>(c), key) != Status::Ok) continue;
    wire::MotionFrame out;
    if (wire::decode_motion(c, key, out, nullptr) == Status::ChecksumMismatch)
      ++checksum_hits;
  }

  // Every bit of the 88-byte frame, unsealed.
  size_t raw_hits = 0;
  size_t auth_hits = 0;
  for (size_t bit = 0; bit < frame.size() * 8; ++bit) {
    std::vector<uint8_t> c = frame;
    c[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    wire::MotionFrame out;
    const Status st = wire::decode_motion(c, key, out, nullptr);
    if (st == expected_raw_flip(bit / 8)) ++raw_hits;
    if (st == Status::AuthFailure) ++auth_hits;
  }
  const int64_t ms = elapsed_ms(t0);

  std::ostringstream d;
  d << checksum_hits << "/256 resealed payload flips ChecksumMismatch; " << raw_hits
    << "/704 raw flips rejected as expected (" << auth_hits << " AuthFailure), " << ms
    << " ms";
  criterion(2, checksum_hits == 256 && raw_hits == 704 && auth_hits == 624 && ms < 5000,
            d.str());
}

// ---- criterion 3: throughput arithmetic ----

void criterion3(const std::string& report_text) {
  wire::ThroughputReport t;
  const bool ok_call = wire::throughput_report(10, 88, t) == Status::Ok;
  const bool exact = t.bits_per_s == 7040.0 && t.kbit_per_s == 7.04 && t.kibit_per_s == 6.875;
  const bool footnote =
      report_text.find("rounding to one decimal") != std::string::npos &&
      report_text.find("7.040 kbit/s and 6.875 kibit/s") != std::string::npos;

  std::ostringstream d;
  d << "throughput_report(10, 88) = " << t.bits_per_s << " bit/s, " << t.kibit_per_s
    << " kibit/s; unit footnote " << (footnote ? "present" : "missing");
  criterion(3, ok_call && exact && footnote, d.str());
}

// ---- criteria 4, 7, 9: the default virtual run ----

void criterion4(const latlab::Analysis& a, uint64_t lost, int64_t run_ms) {
  const auto& f = a.filtered;
  const bool ok = std::fabs(f.mean_ms - 70.4) <= 0.5 && std::fabs(f.p95_ms - 73.2) <= 1.5 &&
                  f.min_ms >= 52.2 && f.max_ms <= 82.2 && std::fabs(f.std_ms - 3.7) <= 0.5 &&
                  lost == 0 && run_ms < 5000;
  std::ostringstream d;
  d.setf(std::ios::fixed);
  d.precision(3);
  d << "filtered mean " << f.mean_ms << " p95 " << f.p95_ms << " std " << f.std_ms
    << " min " << f.min_ms << " max " << f.max_ms << ", lost " << lost << ", " << run_ms
    << " ms";
  criterion(4, ok, d.str());
}

void criterion7(const session::SimResult& def) {
  session::SimConfig control = default_sim_config();
  control.pulses.clear();
  session::SimResult quiet;
  const bool ran = session::run_simulation(control, quiet) == Status::Ok;

  uint64_t merged_gestures = 0;
  for (const auto& r : def.merged.records)
    if (r.gesture) ++merged_gestures;

  const bool ok = ran && def.actions == 20 && def.haptics_sent == 20 &&
                  merged_gestures == 20 && quiet.actions == 0 && quiet.haptics_sent == 0;
  std::ostringstream d;
  d << def.actions << " gesture events, " << def.haptics_sent
    << " haptic triggers on 20 scripted pulses; " << quiet.actions
    << " on the noise-only control";
  criterion(7, ok, d.str());
}

void criterion9(const session::SimResult& r1, const session::SimResult& r2,
                const std::string& report_text) {
  const std::string ctrl = session::to_jsonl(r1.controller_log);
  const std::string host = session::to_jsonl(r1.host_log);
  const std::string merged = session::to_jsonl(r1.merged);
  const bool rerun_identical = ctrl == session::to_jsonl(r2.controller_log) &&
                               host == session::to_jsonl(r2.host_log) &&
                               merged == session::to_jsonl(r2.merged);

  // Digests and the golden report were frozen from an independent build;
  // matching them here is the cross-machine witness.
  const bool hashes_match = fnv1a64(ctrl) == 0x30b446c45500fd40ULL &&
                            fnv1a64(host) == 0x462ba3ae682cafa6ULL &&
                            fnv1a64(merged) == 0x6ed7a2109ebd5ce7ULL;
  std::string golden;
  const bool report_matches =
      read_file(std::string(FIXTURE_DIR) + "/report_default.txt", golden) &&
      report_text == golden;

  std::ostringstream d;
  d << "rerun logs " << (rerun_identical ? "identical" : "DIFFER") << "; digests "
    << (hashes_match ? "match" : "DIFFER") << " (ctrl " << std::hex << fnv1a64(ctrl)
    << ")" << std::dec << "; report vs golden "
    << (report_matches ? "identical" : "DIFFERS");
  criterion(9, rerun_identical && hashes_match && report_matches, d.str());
}

// ---- criterion 5: offset cancellation ----

Status filtered_normalized(const session::SessionLog& merged, latlab::LatencySeries& out) {
  latlab::LatencySeries raw, kept;
  std::vector<latlab::RemovedEntry> removed;
  Status st = latlab::raw_latencies(merged, raw);
  if (st != Status::Ok) return st;
  st = latlab::filter_3sigma(raw, kept, removed);
  if (st != Status::Ok) return st;
  return latlab::normalize_offset(kept, out);
}

void criterion5(const session::SimResult& zero_run) {
  session::SimConfig cfg = default_sim_config();
  cfg.host_clock.offset_us = 12'345'000;
  session::SimResult shifted;
  if (session::run_simulation(cfg, shifted) != Status::Ok) {
    criterion(5, false, "offset run failed");
    return;
  }

  latlab::LatencySeries base_norm, shift_norm;
  if (filtered_normalized(zero_run.merged, base_norm) != Status::Ok ||
      filtered_normalized(shifted.merged, shift_norm) != Status::Ok) {
    criterion(5, false, "normalization pipeline failed");
    return;
  }

  // Element-wise: integer microseconds, so the 1e-9 ms tolerance collapses
  // to exact equality.
  bool elementwise = base_norm.size() == shift_norm.size();
  int64_t worst_us = 0;
  if (elementwise) {
    for (size_t i = 0; i < base_norm.size(); ++i) {
      const int64_t diff = shift_norm.values_us[i] - base_norm.values_us[i];
      worst_us = std::max<int64_t>(worst_us, std::abs(diff));
      if (diff != 0 || base_norm.sequences[i] != shift_norm.sequences[i])
        elementwise = false;
    }
  }

  // Ground truth: the simulator's realized delays through the same filter.
  latlab::LatencySeries truth;
  for (uint32_t seq = 0; seq < shifted.true_delay_us.size(); ++seq) {
    if (!shifted.true_delay_us[seq]) continue;
    truth.sequences.push_back(seq);
    truth.values_us.push_back(*shifted.true_delay_us[seq]);
  }
  latlab::LatencySeries truth_kept;
  std::vector<latlab::RemovedEntry> removed;
  latlab::SpreadSummary truth_spread{}, est_spread{};
  const bool spread_ok =
      latlab::filter_3sigma(truth, truth_kept, removed) == Status::Ok &&
      latlab::spread(truth_kept, truth_spread) == Status::Ok &&
      latlab::spread(shift_norm, est_spread) == Status::Ok &&
      est_spread.std_ms == truth_spread.std_ms &&
      est_spread.p95_minus_median_ms == truth_spread.p95_minus_median_ms &&
      est_spread.span_ms == truth_spread.span_ms;

  std::ostringstream d;
  d.setf(std::ios::fixed);
  d.precision(3);
  d << "offset 12345 ms: normalized series " << (elementwise ? "identical" : "DIFFERS")
    << " (worst " << worst_us << " us); spread vs ground truth "
    << (spread_ok ? "identical" : "DIFFERS") << " (std " << est_spread.std_ms << " p95-med "
    << est_spread.p95_minus_median_ms << " span " << est_spread.span_ms << ")";
  criterion(5, elementwise && spread_ok, d.str());
}

// ---- criterion 6: outlier filter ----

void criterion6() {
  Rng rng(2026);
  latlab::LatencySeries clean;
  for (uint32_t i = 0; i < 1000; ++i) {
    clean.sequences.push_back(i);
    clean.values_us.push_back(std::llround((70.0 + 3.7 * rng.gaussian()) * 1000.0));
  }
  latlab::LatencySummary clean_sum{};
  latlab::summarize(clean, clean_sum);

  latlab::LatencySeries corrupt = clean;
  const uint32_t spikes[] = {100, 300, 500, 700, 900};
  for (uint32_t s : spikes) corrupt.values_us[s] = 570'000;

  latlab::LatencySeries kept;
  std::vector<latlab::RemovedEntry> removed;
  const bool ran = latlab::filter_3sigma(corrupt, kept, removed) == Status::Ok;

  bool removed_exact = removed.size() == 5;
  if (removed_exact)
    for (size_t i = 0; i < 5; ++i)
      if (removed[i].sequence != spikes[i] || removed[i].value_us != 570'000)
        removed_exact = false;

  latlab::LatencySummary kept_sum{};
  latlab::summarize(kept, kept_sum);
  const double drift = std::fabs(kept_sum.mean_ms - clean_sum.mean_ms);

  std::ostringstream d;
  d.setf(std::ios::fixed);
  d.precision(4);
  d << removed.size() << "/5 injected 570 ms spikes removed; kept mean differs from clean by "
    << drift << " ms";
  criterion(6, ran && removed_exact && drift <= 0.1, d.str());
}

// ---- criterion 8: haptic round trip ----

void criterion8() {
  session::SimConfig cfg = default_sim_config();
  cfg.link.base_delay_ms = 2.4;
  cfg.link.jitter_sigma_ms = 0;
  cfg.host_proc_delay_us = 0;
  session::SimResult r;
  if (session::run_simulation(cfg, r) != Status::Ok) {
    criterion(8, false, "simulation failed");
    return;
  }
  latlab::Analysis a;
  if (latlab::analyze(r.merged, a) != Status::Ok || !a.have_haptic) {
    criterion(8, false, "no haptic round trips measured");
    return;
  }
  std::ostringstream d;
  d.setf(std::ios::fixed);
  d.precision(3);
  d << "mean haptic RTT " << a.haptic.mean_ms << " ms over " << a.haptic.n_raw
    << " events (2.4 ms symmetric link)";
  criterion(8, std::fabs(a.haptic.mean_ms - 4.8) <= 0.05, d.str());
}

// ---- criterion 10: loopback exchange ----

bool loopback_exchange(uint32_t frames, double rate_hz, std::string& detail) {
  trace::TraceSpec tspec;
  tspec.duration_s = frames / rate_hz;
  tspec.rate_hz = rate_hz;
  tspec.noise_sigma = 0.1;
  tspec.seed = 7;
  tspec.pulses.push_back(trace::GesturePulse{0.4 * tspec.duration_s, 1.0,
                                             std::min(200.0, 1000.0 / rate_hz * 4),
                                             gesture::Axis::Y});
  std::vector<wire::MotionFrame> samples;
  if (trace::generate(tspec, samples) != Status::Ok) {
    detail = "trace generation failed";
    return false;
  }

  std::promise<uint16_t> port_promise;
  auto port_future = port_promise.get_future();

  udp::HostParams hp;
  hp.session_id = 9;
  hp.expect_frames = frames;
  hp.rate_hz = rate_hz;
  hp.idle_timeout_ms = 2000;
  hp.startup_timeout_ms = 15000;
  hp.on_bound = [&](uint16_t port) { port_promise.set_value(port); };

  session::SessionLog host_log;
  std::string host_err;
  Status host_status = Status::Ok;
  std::jthread host([&] {
    host_status = udp::run_host(udp::Endpoint{"127.0.0.1", 0}, hp, host_log, nullptr,
                                nullptr, &host_err);
    if (host_status != Status::Ok) port_promise.set_value(0);
  });
  if (port_future.wait_for(std::chrono::seconds(10)) != std::future_status::ready) {
    detail = "host never bound";
    return false;
  }
  const uint16_t port = port_future.get();
  if (port == 0) {
    host.join();
    detail = "host failed: " + host_err;
    return false;
  }

  udp::ControllerParams cp;
  cp.frames = frames;
  cp.rate_hz = rate_hz;
  cp.session_id = 9;
  cp.samples = samples;
  cp.drain_ms = 500;
  session::SessionLog ctrl_log;
  std::string ctrl_err;
  const Status ctrl_status = udp::run_controller(
      udp::Endpoint{"127.0.0.1", 0}, udp::Endpoint{"127.0.0.1", port}, cp, ctrl_log,
      nullptr, &ctrl_err);
  host.join();

  if (ctrl_status != Status::Ok) {
    detail = "controller failed: " + ctrl_err;
    return false;
  }
  if (host_status != Status::Ok) {
    detail = "host failed: " + host_err;
    return false;
  }

  session::SessionLog merged;
  if (session::merge_logs(ctrl_log, host_log, merged) != Status::Ok) {
    detail = "merge failed";
    return false;
  }
  latlab::Analysis a;
  if (latlab::analyze(merged, a) != Status::Ok) {
    detail = "analyze failed";
    return false;
  }
  const std::string text = report::render(a, report::Format::Text);

  std::ostringstream d;
  d << frames << " frames at " << rate_hz << " Hz over loopback: sent "
    << ctrl_log.counters.sent << ", received " << host_log.counters.received << ", lost "
    << merged.counters.lost << ", report " << (text.empty() ? "empty" : "rendered");
  detail = d.str();
  return ctrl_log.counters.sent == frames && host_log.counters.received == frames &&
         merged.counters.lost == 0 && !text.empty();
}

void criterion10() {
  std::string detail;
  const bool ok = loopback_exchange(1000, 250, detail);
  criterion(10, ok, detail + " (rate-accelerated; --slow runs 10 Hz)");
}

int run_slow() {
  if (std::getenv("MLINK_RUN_SLOW") == nullptr) {
    std::printf("criterion 10 (slow): SKIP  set MLINK_RUN_SLOW=1 to run the ~100 s exchange\n");
    return 77;
  }
  std::string detail;
  const bool ok = loopback_exchange(1000, 10, detail);
  std::printf("criterion 10 (slow): %s  %s\n", ok ? "PASS" : "FAIL", detail.c_str());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && std::strcmp(argv[1], "--slow") == 0) return run_slow();

  criterion1();
  criterion2();

  const session::SimConfig def = default_sim_config();
  session::SimResult run1, run2;
  const auto t0 = std::chrono::steady_clock::now();
  const Status st1 = session::run_simulation(def, run1);
  const int64_t run_ms = elapsed_ms(t0);
  const Status st2 = session::run_simulation(def, run2);
  latlab::Analysis a;
  const bool sim_ok = st1 == Status::Ok && st2 == Status::Ok &&
                      latlab::analyze(run1.merged, a) == Status::Ok;
  const std::string report_text = sim_ok ? report::render(a, report::Format::Text) : "";
  const auto skipped = [](int n) {
    criterion(n, false, "skipped: default simulation failed");
  };

  if (sim_ok) criterion3(report_text); else skipped(3);
  if (sim_ok) criterion4(a, run1.merged.counters.lost, run_ms); else skipped(4);
  if (sim_ok) criterion5(run1); else skipped(5);
  criterion6();
  if (sim_ok) criterion7(run1); else skipped(7);
  criterion8();
  if (sim_ok) criterion9(run1, run2, report_text); else skipped(9);
  criterion10();

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
