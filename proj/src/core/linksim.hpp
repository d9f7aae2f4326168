#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace mlink::netsim {

enum class JitterShape : int {
  // base + sigma * z, z standard normal resampled to |z| <= 3, then to the
  // configured delay bounds.
  Gauss = 0,
  // Left-skewed: base + sigma * (C0 - C1 * exp(TAU * z)). Short upper tail
  // near base + 0.77 sigma, long lower tail, resampled to the bounds.
  // Constants calibrated so that for sigma 3.7 and bounds [base-18.2,
  // base+11.8] the 3-sigma-filtered series lands at mean ~= base,
  // std ~= sigma, p95 ~= base + 0.76 sigma.
  Skew = 1,
};

struct LinkModel {
  double base_delay_ms = 70.4;
  double jitter_sigma_ms = 3.7;
  std::optional<double> min_delay_ms = 52.2;
  std::optional<double> max_delay_ms = 82.2;
  double loss_prob = 0;
  bool ordered = true;
  uint64_t seed = 42;
  JitterShape shape = JitterShape::Skew;
};

Status validate(const LinkModel& m);

// Per-direction delay/loss sampler. Draw order per offered message: one
// uniform for loss (skipped entirely when loss_prob == 0), then jitter draws
// if the message survives. With jitter_sigma_ms == 0 the delay is exactly
// base_delay_ms and bounds are not consulted (nothing to truncate).
class DelaySampler {
 public:
  DelaySampler(const LinkModel& model, uint64_t stream);

  // False = lost. On true, delay_us is the sampled one-way delay.
  bool sample(int64_t& delay_us);

 private:
  int64_t sample_delay_us();

  LinkModel model_;
  Rng rng_;
};

// Discrete-event queue over integer-microsecond virtual time. Events pop in
// (due_us, insertion order) order, so equal-time events stay FIFO.
class Scheduler {
 public:
  using Callback = std::function<void(int64_t now_us)>;

  void at(int64_t due_us, Callback cb);
  bool step();  // runs the earliest event; false when empty
  void run();   // drains the queue
  int64_t now_us() const { return now_us_; }

 private:
  struct Event {
    int64_t due_us;
    uint64_t order;
    Callback cb;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.due_us != b.due_us) return a.due_us > b.due_us;
      return a.order > b.order;
    }
  };
  std::vector<Event> heap_;
  uint64_t next_order_ = 0;
  int64_t now_us_ = 0;
};

// One direction of a simulated link: samples loss and delay per message,
// preserves send order when ordered (a message never overtakes the one
// before it), and reports the realized delay as ground truth.
class SimLink {
 public:
  using Deliver = std::function<void(int64_t now_us, std::vector<uint8_t> bytes)>;

  SimLink(Scheduler& sched, const LinkModel& model, uint64_t stream, Deliver deliver);

  // Returns the realized delay when the message is scheduled, nullopt when
  // the loss draw dropped it. The realized delay includes any ordered-mode
  // hold-behind, so delivery time - send time equals it exactly.
  std::optional<int64_t> send(int64_t now_us, std::vector<uint8_t> bytes);

  uint64_t offered() const { return offered_; }
  uint64_t dropped() const { return dropped_; }

 private:
  Scheduler& sched_;
  DelaySampler sampler_;
  bool ordered_;
  Deliver deliver_;
  int64_t last_due_us_ = INT64_MIN;
  uint64_t offered_ = 0;
  uint64_t dropped_ = 0;
};

}  // namespace mlink::netsim
