#include "core/session.hpp"

#include <cmath>
#include <utility>

namespace mlink::session {

namespace {

// Decode-failure bucketing: checksum mismatches have their own counter;
// every other rejection (auth, structure) lands in auth_failures.
void count_failure(Counters& c, Status st) {
  if (st == Status::ChecksumMismatch) {
    ++c.checksum_failures;
  } else {
    ++c.auth_failures;
  }
}

}  // namespace

ControllerCore::ControllerCore(uint32_t session_id, double rate_hz, const wire::SessionKey& key,
                               const wire::NonceSalt& salt)
    : session_id_(session_id), key_(key), salt_(salt) {
  log_.session_id = session_id;
  log_.rate_hz = rate_hz;
  log_.role = "controller";
}

Status ControllerCore::next_frame(const wire::MotionFrame& sample, int64_t clock_us,
                                  std::vector<uint8_t>& out) {
  wire::MotionFrame frame = sample;
  frame.timestamp_ms = static_cast<uint64_t>(clock_us / 1000);

  wire::FrameHeader h;
  h.session_id = session_id_;
  h.sequence = next_seq_;

  out.resize(wire::MOTION_FRAME_SIZE);
  const Status st = wire::encode_motion(frame, key_, h, salt_,
                                        std::span<uint8_t, wire::MOTION_FRAME_SIZE>(out));
  if (st != Status::Ok) return st;

  LogRecord rec;
  rec.sequence = next_seq_;
  rec.t_send_us = clock_us;
  log_.records.push_back(rec);
  ++log_.counters.sent;
  seq_by_stamp_[frame.timestamp_ms] = next_seq_;
  ++next_seq_;
  return Status::Ok;
}

Status ControllerCore::on_datagram(std::span<const uint8_t> bytes, int64_t clock_us) {
  wire::FrameHeader h;
  if (wire::peek_header(bytes, h) != Status::Ok || h.session_id != session_id_ ||
      h.msg_type != wire::MSG_HAPTIC) {
    ++foreign_;
    return Status::Ok;
  }
  wire::HapticTrigger trig;
  const Status st = wire::decode_haptic(bytes, key_, trig);
  if (st != Status::Ok) {
    count_failure(log_.counters, st);
    return Status::Ok;
  }
  const auto it = seq_by_stamp_.find(trig.ref_timestamp_ms);
  if (it == seq_by_stamp_.end()) {
    ++foreign_;
    return Status::Ok;
  }
  const uint32_t seq = it->second;
  if (seq < log_.records.size() && log_.records[seq].sequence == seq)
    log_.records[seq].haptic_recv_us = clock_us;
  actuations_.push_back(Actuation{clock_us, trig});
  return Status::Ok;
}

HostCore::HostCore(const Config& cfg) : cfg_(cfg), detector_(cfg.detector) {
  log_.session_id = cfg.session_id;
  log_.role = "host";
}

void HostCore::set_action_sink(std::function<void(const gesture::GestureEvent&)> sink) {
  sink_ = std::move(sink);
}

Status HostCore::on_motion(std::span<const uint8_t> bytes, int64_t clock_us,
                           std::optional<Pending>& pending) {
  pending.reset();
  wire::FrameHeader h;
  if (wire::peek_header(bytes, h) != Status::Ok || h.session_id != cfg_.session_id ||
      h.msg_type != wire::MSG_MOTION) {
    ++foreign_;
    return Status::Ok;
  }
  wire::MotionFrame frame;
  wire::DecodeInfo info;
  const Status st = wire::decode_motion(bytes, cfg_.key, frame, &info);
  if (st != Status::Ok) {
    count_failure(log_.counters, st);
    return Status::Ok;
  }
  if (record_by_seq_.contains(info.sequence)) {  // duplicate delivery
    ++foreign_;
    return Status::Ok;
  }

  LogRecord rec;
  rec.sequence = info.sequence;
  rec.t_recv_us = clock_us;
  record_by_seq_[info.sequence] = log_.records.size();
  log_.records.push_back(rec);
  ++log_.counters.received;

  std::optional<gesture::GestureEvent> event;
  const Status det = detector_.detect(frame, info.sequence, event);
  // Reordered delivery can regress timestamps; the frame is still received,
  // it just cannot fire.
  if (det == Status::Ok && event) {
    log_.records.back().gesture = true;
    ++actions_;
    if (sink_) sink_(*event);
    pending = Pending{info.sequence, frame.timestamp_ms};
  }
  return Status::Ok;
}

Status HostCore::seal_haptic(const Pending& pending, int64_t clock_us,
                             std::vector<uint8_t>& out) {
  wire::HapticTrigger trig;
  trig.ref_timestamp_ms = pending.ref_timestamp_ms;
  trig.intensity = cfg_.haptic_intensity;
  trig.sharpness = cfg_.haptic_sharpness;
  trig.duration_ms = cfg_.haptic_duration_ms;

  wire::FrameHeader h;
  h.session_id = cfg_.session_id;
  h.sequence = next_haptic_seq_;

  out.resize(wire::HAPTIC_FRAME_SIZE);
  const Status st = wire::encode_haptic(trig, cfg_.key, h, cfg_.salt,
                                        std::span<uint8_t, wire::HAPTIC_FRAME_SIZE>(out));
  if (st != Status::Ok) return st;
  ++next_haptic_seq_;

  if (const auto it = record_by_seq_.find(pending.frame_sequence); it != record_by_seq_.end())
    log_.records[it->second].haptic_sent_us = clock_us;
  return Status::Ok;
}

Status run_simulation(const SimConfig& cfg, SimResult& out) {
  out = SimResult{};
  if (!(cfg.rate_hz > 0) || cfg.frames == 0) return Status::InvalidArg;
  Status st = netsim::validate(cfg.link);
  if (st != Status::Ok) return st;

  // IMU input for the run.
  std::vector<wire::MotionFrame> samples;
  if (!cfg.replay.empty()) {
    samples.reserve(cfg.frames);
    for (uint32_t i = 0; i < cfg.frames; ++i)
      samples.push_back(cfg.replay[i % cfg.replay.size()]);
  } else {
    trace::TraceSpec ts;
    ts.duration_s = static_cast<double>(cfg.frames) / cfg.rate_hz;
    ts.rate_hz = cfg.rate_hz;
    ts.pulses = cfg.pulses;
    ts.noise_sigma = cfg.noise_sigma;
    ts.seed = cfg.trace_seed;
    st = trace::generate(ts, samples);
    if (st != Status::Ok) return st;
    samples.resize(cfg.frames);
  }

  ControllerCore controller(cfg.session_id, cfg.rate_hz, cfg.key);
  HostCore::Config hc;
  hc.session_id = cfg.session_id;
  hc.key = cfg.key;
  hc.detector = cfg.detector;
  hc.haptic_intensity = cfg.haptic_intensity;
  hc.haptic_sharpness = cfg.haptic_sharpness;
  hc.haptic_duration_ms = cfg.haptic_duration_ms;
  HostCore host(hc);
  host.log().rate_hz = cfg.rate_hz;

  netsim::Scheduler sched;
  out.true_delay_us.assign(cfg.frames, std::nullopt);

  Status run_error = Status::Ok;
  auto fail = [&run_error](Status s) {
    if (run_error == Status::Ok) run_error = s;
  };

  // Host-to-controller leg: deliver haptic triggers.
  netsim::SimLink h2c(sched, cfg.link, 2, [&](int64_t now, std::vector<uint8_t> bytes) {
    const int64_t clock = cfg.controller_clock.reading_us(now);
    const Status s = controller.on_datagram(bytes, clock);
    if (s != Status::Ok) fail(s);
  });

  // Controller-to-host leg: deliver motion frames, answer detections after
  // the configured processing delay.
  netsim::SimLink c2h(sched, cfg.link, 1, [&](int64_t now, std::vector<uint8_t> bytes) {
    const int64_t clock = cfg.host_clock.reading_us(now);
    std::optional<HostCore::Pending> pending;
    Status s = host.on_motion(bytes, clock, pending);
    if (s != Status::Ok) {
      fail(s);
      return;
    }
    if (!pending) return;
    const HostCore::Pending p = *pending;
    sched.at(now + cfg.host_proc_delay_us, [&, p](int64_t send_now) {
      std::vector<uint8_t> reply;
      const Status s2 = host.seal_haptic(p, cfg.host_clock.reading_us(send_now), reply);
      if (s2 != Status::Ok) {
        fail(s2);
        return;
      }
      ++out.haptics_sent;
      h2c.send(send_now, std::move(reply));
    });
  });

  const auto tick_us = static_cast<int64_t>(std::llround(1e6 / cfg.rate_hz));
  for (uint32_t i = 0; i < cfg.frames; ++i) {
    const int64_t due = VIRTUAL_EPOCH_US + static_cast<int64_t>(i) * tick_us;
    sched.at(due, [&, i](int64_t now) {
      std::vector<uint8_t> bytes;
      Status s = controller.next_frame(samples[i], cfg.controller_clock.reading_us(now), bytes);
      if (s != Status::Ok) {
        fail(s);
        return;
      }
      for (const auto& c : cfg.corruptions) {
        if (c.sequence != i) continue;
        const size_t bit = c.payload_bit % (wire::MOTION_PAYLOAD_SIZE * 8);
        const size_t off = wire::HEADER_SIZE + wire::ENVELOPE_SIZE + bit / 8;
        bytes[off] ^= static_cast<uint8_t>(1u << (bit % 8));
        if (c.reseal) wire::reseal(bytes, cfg.key);
      }
      out.true_delay_us[i] = c2h.send(now, std::move(bytes));
    });
  }

  sched.run();
  if (run_error != Status::Ok) return run_error;

  out.actions = host.actions();
  out.controller_log = std::move(controller.log());
  out.host_log = std::move(host.log());
  return merge_logs(out.controller_log, out.host_log, out.merged);
}

}  // namespace mlink::session
