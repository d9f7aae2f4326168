#include "core/gesture.hpp"

#include <cmath>

namespace mlink::gesture {

Status Detector::detect(const wire::MotionFrame& frame, uint32_t sequence,
                        std::optional<GestureEvent>& event) {
  event.reset();
  if (has_prev_ && frame.timestamp_ms < prev_ts_) return Status::OutOfOrderTimestamp;

  const float v = frame.accel[static_cast<int>(cfg_.axis)];
  if (!std::isfinite(v)) return Status::NonFiniteSensorValue;

  const bool above = v > cfg_.tau;
  const bool rising = above && !(has_prev_ && prev_above_);
  const bool clear =
      !has_fired_ || frame.timestamp_ms - last_fire_ts_ >= cfg_.refractory_ms;
  if (rising && clear) {
    event = GestureEvent{frame.timestamp_ms, v, sequence};
    has_fired_ = true;
    last_fire_ts_ = frame.timestamp_ms;
  }

  has_prev_ = true;
  prev_above_ = above;
  prev_ts_ = frame.timestamp_ms;
  return Status::Ok;
}

void Detector::reset() {
  has_prev_ = false;
  prev_above_ = false;
  prev_ts_ = 0;
  has_fired_ = false;
  last_fire_ts_ = 0;
}

Status detect_stream(std::span<const wire::MotionFrame> frames, const DetectorConfig& cfg,
                     std::vector<GestureEvent>& out) {
  out.clear();
  Detector det(cfg);
  std::optional<GestureEvent> ev;
  for (size_t i = 0; i < frames.size(); ++i) {
    const Status st = det.detect(frames[i], static_cast<uint32_t>(i), ev);
    if (st != Status::Ok) return st;
    if (ev) out.push_back(*ev);
  }
  return Status::Ok;
}

}  // namespace mlink::gesture
