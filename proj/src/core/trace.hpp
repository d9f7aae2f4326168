#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/gesture.hpp"
#include "core/wire.hpp"

namespace mlink::trace {

struct GesturePulse {
  double onset_s = 0;
  double amplitude = 1.0;  // m/s^2
  double width_ms = 200;
  gesture::Axis axis = gesture::Axis::Y;
};

struct TraceSpec {
  double duration_s = 0;
  double rate_hz = 10;
  std::vector<GesturePulse> pulses;
  double noise_sigma = 0;  // m/s^2, accel axes only
  uint64_t seed = 0;
};

// ceil(duration * rate) frames on an exact 1/rate grid (integer microsecond
// ticks). Each pulse adds a half-sine a(t) = amplitude * sin(pi (t-onset)/w)
// on its axis over [onset, onset+width]; overlapping pulses sum. Gaussian
// noise is drawn per frame in axis order ax, ay, az (the draw order is part
// of the fixture contract); gyro channels stay zero.
Status generate(const TraceSpec& spec, std::vector<wire::MotionFrame>& out);

// CSV with the exact header `t_ms,ax,ay,az,gx,gy,gz`. Floats are written
// with nine significant digits so a write/read cycle is bit-exact.
Status write_csv(const std::string& path, const std::vector<wire::MotionFrame>& frames);
Status read_csv(const std::string& path, std::vector<wire::MotionFrame>& out);

}  // namespace mlink::trace
