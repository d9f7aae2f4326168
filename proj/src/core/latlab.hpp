#pragma once

#include <cstdint>
#include <vector>

#include "core/error.hpp"
#include "core/sessionlog.hpp"

namespace mlink::latlab {

// Latency values are integer microseconds aligned to frame sequences.
// Keeping integers end-to-end makes the offset-invariance properties exact:
// adding a constant to every receive stamp shifts each value by exactly that
// constant, so median-anchored quantities are bit-identical.
struct LatencySeries {
  std::vector<uint32_t> sequences;
  std::vector<int64_t> values_us;

  size_t size() const { return values_us.size(); }
};

struct RemovedEntry {
  uint32_t sequence = 0;
  int64_t value_us = 0;
};

struct LatencySummary {
  double mean_ms = 0;
  double p95_ms = 0;
  double max_ms = 0;
  double min_ms = 0;
  double std_ms = 0;  // sample (n-1); 0 when n == 1
  double median_ms = 0;
  uint64_t n_raw = 0;
  uint64_t n_kept = 0;
  uint64_t n_removed = 0;
};

// The offset-invariant block: unchanged under any constant shift of the
// receiver clock.
struct SpreadSummary {
  double std_ms = 0;
  double p95_minus_median_ms = 0;
  double span_ms = 0;  // max - min
  uint64_t n = 0;
};

// Order statistics used throughout: lower median (sorted[(n-1)/2]) and
// nearest-rank 95th percentile (sorted[ceil(0.95 n) - 1]).
int64_t lower_median_us(std::vector<int64_t> values);
int64_t percentile95_us(std::vector<int64_t> values);

// Per-sequence one-way latency t_recv - t_send over received records.
Status raw_latencies(const session::SessionLog& merged, LatencySeries& out);

// Subtracts the lower median from every element.
Status normalize_offset(const LatencySeries& in, LatencySeries& out);

// Single pass: mean and sample std of the input, drop |v - mean| > 3 std.
// With fewer than two values there is nothing to estimate; the input passes
// through unfiltered.
Status filter_3sigma(const LatencySeries& in, LatencySeries& kept,
                     std::vector<RemovedEntry>& removed);

Status summarize(const LatencySeries& in, LatencySummary& out);
Status spread(const LatencySeries& in, SpreadSummary& out);

// Per haptic event, round trip = haptic_recv - t_send of the triggering
// frame, both on the controller clock.
Status haptic_rtt(const session::SessionLog& merged, LatencySeries& out);

// The full pipeline over a merged log, in report-ready form.
struct Analysis {
  uint32_t session_id = 0;
  double rate_hz = 0;
  std::string role;
  session::Counters counters;
  LatencySummary raw;       // raw clock, unfiltered
  LatencySummary filtered;  // raw clock, after the 3-sigma pass
  SpreadSummary normalized;  // offset-invariant spread of the filtered series
  std::vector<RemovedEntry> removed;
  bool have_haptic = false;
  LatencySummary haptic;  // round-trip stats, unfiltered
};

Status analyze(const session::SessionLog& merged, Analysis& out);

}  // namespace mlink::latlab
