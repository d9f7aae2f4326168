#include "core/latlab.hpp"

#include <algorithm>
#include <cmath>

namespace mlink::latlab {

namespace {

// Exact integer moments around the lower median. Deviations fit comfortably
// in __int128 for any realistic series, so mean and variance come out of
// exact sums with a single rounding each; the result is both deterministic
// across platforms and bit-identical under constant shifts.
struct Moments {
  int64_t median_us = 0;
  double mean_us = 0;
  double std_us = 0;
};

Moments moments_of(const std::vector<int64_t>& v) {
  Moments m;
  m.median_us = lower_median_us(v);
  const size_t n = v.size();
  __int128 sum_d = 0;
  __int128 sum_d2 = 0;
  for (const int64_t x : v) {
    const __int128 d = static_cast<__int128>(x) - m.median_us;
    sum_d += d;
    sum_d2 += d * d;
  }
  const double mean_dev = static_cast<double>(sum_d) / static_cast<double>(n);
  m.mean_us = static_cast<double>(m.median_us) + mean_dev;
  if (n >= 2) {
    const double a = static_cast<double>(sum_d2);
    const double b = static_cast<double>(sum_d);
    const double var =
        (a - b * b / static_cast<double>(n)) / static_cast<double>(n - 1);
    m.std_us = var > 0 ? std::sqrt(var) : 0;
  }
  return m;
}

}  // namespace

int64_t lower_median_us(std::vector<int64_t> values) {
  const size_t n = values.size();
  const size_t k = (n - 1) / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<ptrdiff_t>(k), values.end());
  return values[k];
}

int64_t percentile95_us(std::vector<int64_t> values) {
  const size_t n = values.size();
  // ceil(0.95 n) without floating point.
  const size_t rank = (19 * n + 19) / 20;
  const size_t k = rank - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<ptrdiff_t>(k), values.end());
  return values[k];
}

Status raw_latencies(const session::SessionLog& merged, LatencySeries& out) {
  out = LatencySeries{};
  for (const auto& r : merged.records) {
    if (!r.t_send_us || !r.t_recv_us) continue;
    out.sequences.push_back(r.sequence);
    out.values_us.push_back(*r.t_recv_us - *r.t_send_us);
  }
  if (out.values_us.empty()) return Status::EmptyLog;
  return Status::Ok;
}

Status normalize_offset(const LatencySeries& in, LatencySeries& out) {
  if (in.values_us.empty()) return Status::EmptyLog;
  const int64_t med = lower_median_us(in.values_us);
  out.sequences = in.sequences;
  out.values_us.resize(in.values_us.size());
  for (size_t i = 0; i < in.values_us.size(); ++i) out.values_us[i] = in.values_us[i] - med;
  return Status::Ok;
}

Status filter_3sigma(const LatencySeries& in, LatencySeries& kept,
                     std::vector<RemovedEntry>& removed) {
  kept = LatencySeries{};
  removed.clear();
  if (in.values_us.empty()) return Status::EmptyLog;
  if (in.values_us.size() < 2) {
    kept = in;
    return Status::Ok;
  }
  const Moments m = moments_of(in.values_us);
  const double limit = 3.0 * m.std_us;
  const double mean_dev = m.mean_us - static_cast<double>(m.median_us);
  for (size_t i = 0; i < in.values_us.size(); ++i) {
    const double dev = static_cast<double>(in.values_us[i] - m.median_us) - mean_dev;
    if (std::abs(dev) > limit) {
      removed.push_back(RemovedEntry{in.sequences[i], in.values_us[i]});
    } else {
      kept.sequences.push_back(in.sequences[i]);
      kept.values_us.push_back(in.values_us[i]);
    }
  }
  return Status::Ok;
}

Status summarize(const LatencySeries& in, LatencySummary& out) {
  out = LatencySummary{};
  const size_t n = in.values_us.size();
  if (n == 0) return Status::EmptyLog;
  const Moments m = moments_of(in.values_us);
  const auto [mn, mx] = std::minmax_element(in.values_us.begin(), in.values_us.end());
  out.mean_ms = m.mean_us / 1000.0;
  out.std_ms = m.std_us / 1000.0;
  out.median_ms = static_cast<double>(m.median_us) / 1000.0;
  out.p95_ms = static_cast<double>(percentile95_us(in.values_us)) / 1000.0;
  out.min_ms = static_cast<double>(*mn) / 1000.0;
  out.max_ms = static_cast<double>(*mx) / 1000.0;
  out.n_raw = n;
  out.n_kept = n;
  out.n_removed = 0;
  return Status::Ok;
}

Status spread(const LatencySeries& in, SpreadSummary& out) {
  out = SpreadSummary{};
  if (in.values_us.empty()) return Status::EmptyLog;
  const Moments m = moments_of(in.values_us);
  const auto [mn, mx] = std::minmax_element(in.values_us.begin(), in.values_us.end());
  out.std_ms = m.std_us / 1000.0;
  out.p95_minus_median_ms =
      static_cast<double>(percentile95_us(in.values_us) - m.median_us) / 1000.0;
  out.span_ms = static_cast<double>(*mx - *mn) / 1000.0;
  out.n = in.values_us.size();
  return Status::Ok;
}

Status haptic_rtt(const session::SessionLog& merged, LatencySeries& out) {
  out = LatencySeries{};
  for (const auto& r : merged.records) {
    if (!r.t_send_us || !r.haptic_recv_us) continue;
    out.sequences.push_back(r.sequence);
    out.values_us.push_back(*r.haptic_recv_us - *r.t_send_us);
  }
  if (out.values_us.empty()) return Status::NoHapticEvents;
  return Status::Ok;
}

Status analyze(const session::SessionLog& merged, Analysis& out) {
  out = Analysis{};
  out.session_id = merged.session_id;
  out.rate_hz = merged.rate_hz;
  out.role = merged.role;
  out.counters = merged.counters;

  LatencySeries raw;
  Status st = raw_latencies(merged, raw);
  if (st != Status::Ok) return st;
  st = summarize(raw, out.raw);
  if (st != Status::Ok) return st;

  LatencySeries kept;
  st = filter_3sigma(raw, kept, out.removed);
  if (st != Status::Ok) return st;
  st = summarize(kept, out.filtered);
  if (st != Status::Ok) return st;
  out.filtered.n_raw = raw.size();
  out.filtered.n_removed = out.removed.size();

  LatencySeries norm;
  st = normalize_offset(kept, norm);
  if (st != Status::Ok) return st;
  st = spread(norm, out.normalized);
  if (st != Status::Ok) return st;

  LatencySeries rtt;
  st = haptic_rtt(merged, rtt);
  if (st == Status::Ok) {
    out.have_haptic = true;
    st = summarize(rtt, out.haptic);
    if (st != Status::Ok) return st;
  } else if (st != Status::NoHapticEvents) {
    return st;
  }
  return Status::Ok;
}

}  // namespace mlink::latlab
