#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "core/clockmodel.hpp"
#include "core/error.hpp"
#include "core/gesture.hpp"
#include "core/linksim.hpp"
#include "core/sessionlog.hpp"
#include "core/trace.hpp"
#include "core/wire.hpp"

namespace mlink::session {

// Virtual-time runs place frame zero here so timestamps look like epoch
// milliseconds without touching the wall clock.
constexpr int64_t VIRTUAL_EPOCH_US = 1'700'000'000'000'000;

// Controller side: stamps and seals outgoing motion frames, records send
// times, and matches returning haptic triggers back to the frame that caused
// them (by the frame timestamp carried in the trigger). Transport-agnostic;
// callers move the bytes.
class ControllerCore {
 public:
  ControllerCore(uint32_t session_id, double rate_hz, const wire::SessionKey& key,
                 const wire::NonceSalt& salt = {});

  // Seals `sample` with the next sequence number, stamping the wire
  // timestamp from clock_us. Records t_send_us.
  Status next_frame(const wire::MotionFrame& sample, int64_t clock_us,
                    std::vector<uint8_t>& out);

  // Handles a datagram addressed to the controller (haptic triggers).
  // Frames from other sessions or unknown triggers are counted as foreign
  // and ignored; decode failures are counted, never fatal.
  Status on_datagram(std::span<const uint8_t> bytes, int64_t clock_us);

  struct Actuation {
    int64_t at_us;
    wire::HapticTrigger trigger;
  };

  SessionLog& log() { return log_; }
  const std::vector<Actuation>& actuations() const { return actuations_; }
  uint64_t foreign() const { return foreign_; }

 private:
  uint32_t session_id_;
  wire::SessionKey key_;
  wire::NonceSalt salt_;
  uint32_t next_seq_ = 0;
  SessionLog log_;
  std::vector<Actuation> actuations_;
  std::unordered_map<uint64_t, uint32_t> seq_by_stamp_;
  uint64_t foreign_ = 0;
};

// Host side: decodes motion frames, logs receive times, runs the gesture
// detector, and hands detections to the action sink. Decode failures are
// counted (checksum mismatches in checksum_failures, everything else in
// auth_failures) and the frame dropped; the session never aborts.
class HostCore {
 public:
  struct Config {
    uint32_t session_id = 1;
    wire::SessionKey key{};
    wire::NonceSalt salt{};
    gesture::DetectorConfig detector{};
    float haptic_intensity = 1.0f;
    float haptic_sharpness = 1.0f;
    uint16_t haptic_duration_ms = 20;
  };

  // A detection waiting to be answered with a haptic trigger.
  struct Pending {
    uint32_t frame_sequence;
    uint64_t ref_timestamp_ms;
  };

  explicit HostCore(const Config& cfg);

  Status on_motion(std::span<const uint8_t> bytes, int64_t clock_us,
                   std::optional<Pending>& pending);

  // Seals the trigger for a detection and records haptic_sent_us against
  // the triggering frame's record.
  Status seal_haptic(const Pending& pending, int64_t clock_us, std::vector<uint8_t>& out);

  void set_action_sink(std::function<void(const gesture::GestureEvent&)> sink);

  SessionLog& log() { return log_; }
  uint64_t actions() const { return actions_; }
  uint64_t foreign() const { return foreign_; }

 private:
  Config cfg_;
  gesture::Detector detector_;
  std::function<void(const gesture::GestureEvent&)> sink_;
  uint32_t next_haptic_seq_ = 0;
  SessionLog log_;
  std::unordered_map<uint32_t, size_t> record_by_seq_;
  uint64_t actions_ = 0;
  uint64_t foreign_ = 0;
};

// Fault injection for simulated runs: pick a frame, flip one payload bit.
// `reseal` recomputes the auth tag afterwards, so the corruption survives
// authentication and is caught by the checksum instead.
struct Corruption {
  uint32_t sequence = 0;
  size_t payload_bit = 0;  // bit index into the 36-byte motion payload
  bool reseal = false;
};

struct SimConfig {
  uint32_t frames = 1000;
  double rate_hz = 10;
  uint32_t session_id = 1;
  wire::SessionKey key{};
  netsim::LinkModel link{};
  netsim::ClockModel controller_clock{};
  netsim::ClockModel host_clock{};
  int64_t host_proc_delay_us = 0;
  gesture::DetectorConfig detector{};
  float haptic_intensity = 1.0f;
  float haptic_sharpness = 1.0f;
  uint16_t haptic_duration_ms = 20;
  // IMU input: scripted pulses plus noise, generated at the send rate.
  std::vector<trace::GesturePulse> pulses;
  double noise_sigma = 0;
  uint64_t trace_seed = 7;
  // Replay input. When non-empty, used instead of the generated trace
  // (cycled if shorter than `frames`).
  std::vector<wire::MotionFrame> replay;
  std::vector<Corruption> corruptions;
};

struct SimResult {
  SessionLog controller_log;
  SessionLog host_log;
  SessionLog merged;
  // Ground truth per sequence: realized one-way delay of the motion frame,
  // empty where the link dropped it.
  std::vector<std::optional<int64_t>> true_delay_us;
  uint64_t actions = 0;
  uint64_t haptics_sent = 0;
};

// Deterministic discrete-event run: controller ticks at exactly 1/rate in
// virtual time, both directions of the link draw from independent streams
// of the model's seed, and the whole exchange (including haptic returns)
// drains before the function returns.
Status run_simulation(const SimConfig& cfg, SimResult& out);

}  // namespace mlink::session
