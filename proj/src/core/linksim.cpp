#include "core/linksim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace mlink::netsim {

namespace {

// Skew-shape constants (see JitterShape::Skew).
constexpr double SKEW_TAU = 2.127;
constexpr double SKEW_C0 = 0.7745;
constexpr double SKEW_C1 = 0.4933;

// Resampling must terminate even for hostile configs (bounds that exclude
// nearly all of the distribution); after the cap the draw is clamped.
constexpr int RESAMPLE_CAP = 10000;

}  // namespace

Status validate(const LinkModel& m) {
  if (!(m.base_delay_ms >= 0) || !(m.jitter_sigma_ms >= 0)) return Status::InvalidArg;
  if (!(m.loss_prob >= 0 && m.loss_prob <= 1)) return Status::InvalidArg;
  if (m.min_delay_ms && m.max_delay_ms && *m.min_delay_ms > *m.max_delay_ms)
    return Status::InvalidArg;
  return Status::Ok;
}

DelaySampler::DelaySampler(const LinkModel& model, uint64_t stream)
    : model_(model), rng_(model.seed, stream) {}

bool DelaySampler::sample(int64_t& delay_us) {
  if (model_.loss_prob > 0) {
    if (rng_.uniform() < model_.loss_prob) return false;
  }
  delay_us = sample_delay_us();
  return true;
}

int64_t DelaySampler::sample_delay_us() {
  const double base = model_.base_delay_ms;
  const double sigma = model_.jitter_sigma_ms;
  if (sigma == 0) return static_cast<int64_t>(std::llround(base * 1000.0));

  const double lo = std::max(0.0, model_.min_delay_ms.value_or(0.0));
  const double hi = model_.max_delay_ms.value_or(std::numeric_limits<double>::infinity());

  double d = base;
  for (int i = 0; i < RESAMPLE_CAP; ++i) {
    const double z = rng_.gaussian();
    if (model_.shape == JitterShape::Gauss) {
      if (std::abs(z) > 3.0) continue;
      d = base + sigma * z;
    } else {
      d = base + sigma * (SKEW_C0 - SKEW_C1 * std::exp(SKEW_TAU * z));
    }
    if (d >= lo && d <= hi) return static_cast<int64_t>(std::llround(d * 1000.0));
  }
  d = std::clamp(d, lo, std::isfinite(hi) ? hi : d);
  return static_cast<int64_t>(std::llround(std::max(d, 0.0) * 1000.0));
}

void Scheduler::at(int64_t due_us, Callback cb) {
  heap_.push_back(Event{due_us, next_order_++, std::move(cb)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
}

bool Scheduler::step() {
  if (heap_.empty()) return false;
  std::pop_heap(heap_.begin(), heap_.end(), Later{});
  Event ev = std::move(heap_.back());
  heap_.pop_back();
  now_us_ = ev.due_us;
  ev.cb(now_us_);
  return true;
}

void Scheduler::run() {
  while (step()) {
  }
}

SimLink::SimLink(Scheduler& sched, const LinkModel& model, uint64_t stream, Deliver deliver)
    : sched_(sched), sampler_(model, stream), ordered_(model.ordered),
      deliver_(std::move(deliver)) {}

std::optional<int64_t> SimLink::send(int64_t now_us, std::vector<uint8_t> bytes) {
  ++offered_;
  int64_t delay_us = 0;
  if (!sampler_.sample(delay_us)) {
    ++dropped_;
    return std::nullopt;
  }
  int64_t due = now_us + delay_us;
  if (ordered_ && due < last_due_us_) due = last_due_us_;
  last_due_us_ = due;
  const int64_t realized = due - now_us;
  // Boxed so the callback stays copyable for std::function.
  auto boxed = std::make_shared<std::vector<uint8_t>>(std::move(bytes));
  sched_.at(due, [this, boxed](int64_t now) { deliver_(now, std::move(*boxed)); });
  return realized;
}

}  // namespace mlink::netsim
