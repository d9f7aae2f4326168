#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "core/error.hpp"
#include "core/wire.hpp"

namespace mlink::gesture {

enum class Axis : int { X = 0, Y = 1, Z = 2 };

struct DetectorConfig {
  float tau = 0.5f;  // m/s^2, strict threshold
  uint32_t refractory_ms = 500;
  Axis axis = Axis::Y;
};

struct GestureEvent {
  uint64_t frame_timestamp_ms = 0;
  float peak_value = 0;  // axis acceleration at the firing sample
  uint32_t sequence = 0;

  bool operator==(const GestureEvent&) const = default;
};

// Rising-edge threshold detector with a refractory hold-off.
//
// A sample fires iff its selected-axis value strictly exceeds tau, the
// previous sample did not (a first sample counts as rising), and at least
// refractory_ms elapsed since the last emitted event. Timestamps must be
// non-decreasing; a regression is an error, equal stamps are allowed.
class Detector {
 public:
  explicit Detector(const DetectorConfig& cfg) : cfg_(cfg) {}

  Status detect(const wire::MotionFrame& frame, uint32_t sequence,
                std::optional<GestureEvent>& event);
  void reset();
  const DetectorConfig& config() const { return cfg_; }

 private:
  DetectorConfig cfg_;
  bool has_prev_ = false;
  bool prev_above_ = false;
  uint64_t prev_ts_ = 0;
  bool has_fired_ = false;
  uint64_t last_fire_ts_ = 0;
};

// Fold of detect over the sequence; frame i gets sequence number i.
Status detect_stream(std::span<const wire::MotionFrame> frames, const DetectorConfig& cfg,
                     std::vector<GestureEvent>& out);

}  // namespace mlink::gesture
