#pragma once

#include <cmath>
#include <cstdint>

namespace mlink::netsim {

// Affine clock over true time: reading(T) = T + offset + drift_ppm * 1e-6 * T.
// Readings are integer microseconds; the drift term is rounded once per
// reading, so a zero-drift clock is exactly true time plus a constant.
struct ClockModel {
  int64_t offset_us = 0;
  double drift_ppm = 0;

  int64_t reading_us(int64_t true_us) const {
    if (drift_ppm == 0) return true_us + offset_us;
    const double drift = static_cast<double>(true_us) * drift_ppm * 1e-6;
    return true_us + offset_us + static_cast<int64_t>(std::llround(drift));
  }
};

}  // namespace mlink::netsim
