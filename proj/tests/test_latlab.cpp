#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "core/latlab.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace mlink;
using namespace mlink::latlab;
using mlink::session::LogRecord;
using mlink::session::SessionLog;

namespace {

LatencySeries series_ms(const std::vector<double>& ms) {
  LatencySeries s;
  for (size_t i = 0; i < ms.size(); ++i) {
    s.sequences.push_back(static_cast<uint32_t>(i));
    s.values_us.push_back(static_cast<int64_t>(std::llround(ms[i] * 1000)));
  }
  return s;
}

SessionLog merged_from_us(const std::vector<int64_t>& latencies_us) {
  SessionLog log;
  log.session_id = 1;
  log.rate_hz = 10;
  log.role = "merged";
  for (size_t i = 0; i < latencies_us.size(); ++i) {
    LogRecord r;
    r.sequence = static_cast<uint32_t>(i);
    r.t_send_us = 1'000'000 + static_cast<int64_t>(i) * 100'000;
    r.t_recv_us = *r.t_send_us + latencies_us[i];
    log.records.push_back(r);
  }
  log.counters.sent = latencies_us.size();
  log.counters.received = latencies_us.size();
  return log;
}

}  // namespace

TEST_CASE("median normalization: 68 70 75 becomes -2 0 5") {
  const auto s = series_ms({68, 70, 75});
  LatencySeries norm;
  REQUIRE(normalize_offset(s, norm) == Status::Ok);
  REQUIRE(norm.size() == 3);
  CHECK(norm.values_us[0] == -2000);
  CHECK(norm.values_us[1] == 0);
  CHECK(norm.values_us[2] == 5000);
}

TEST_CASE("summary of 60 70 80: mean 70, std 10, p95 80") {
  const auto s = series_ms({60, 70, 80});
  LatencySummary sum;
  REQUIRE(summarize(s, sum) == Status::Ok);
  CHECK(sum.mean_ms == doctest::Approx(70.0).epsilon(1e-12));
  CHECK(sum.std_ms == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(sum.p95_ms == 80.0);
  CHECK(sum.max_ms == 80.0);
  CHECK(sum.min_ms == 60.0);
  CHECK(sum.median_ms == 70.0);
  CHECK(sum.n_kept == 3);
}

TEST_CASE("filter keeps 0 0 0 1 intact: nothing beyond three sigma") {
  const auto s = series_ms({0, 0, 0, 1});
  LatencySeries kept;
  std::vector<RemovedEntry> removed;
  REQUIRE(filter_3sigma(s, kept, removed) == Status::Ok);
  CHECK(kept.size() == 4);
  CHECK(removed.empty());
}

TEST_CASE("filter removes a far spike and records it") {
  std::vector<double> ms(100, 70.0);
  for (size_t i = 0; i < ms.size(); i += 2) ms[i] = 71.0;  // nonzero std
  ms[50] = 570.0;
  const auto s = series_ms(ms);
  LatencySeries kept;
  std::vector<RemovedEntry> removed;
  REQUIRE(filter_3sigma(s, kept, removed) == Status::Ok);
  REQUIRE(removed.size() == 1);
  CHECK(removed[0].sequence == 50);
  CHECK(removed[0].value_us == 570'000);
  CHECK(kept.size() == 99);
  CHECK(std::find(kept.sequences.begin(), kept.sequences.end(), 50) == kept.sequences.end());
}

TEST_CASE("single-pass filter: the pass uses the unfiltered moments") {
  // Two moderate outliers that survive only because the spike inflates the
  // std in the single pass; an iterated filter would remove them.
  std::vector<double> ms(200, 70.0);
  for (size_t i = 0; i < ms.size(); i += 2) ms[i] = 70.5;
  ms[0] = 570.0;  // dominates the std
  ms[1] = 100.0;  // inside 3 sigma of the inflated moments
  const auto s = series_ms(ms);
  LatencySeries kept;
  std::vector<RemovedEntry> removed;
  REQUIRE(filter_3sigma(s, kept, removed) == Status::Ok);
  REQUIRE(removed.size() == 1);
  CHECK(removed[0].value_us == 570'000);
  CHECK(std::find(kept.values_us.begin(), kept.values_us.end(), 100'000) !=
        kept.values_us.end());
}

TEST_CASE("fewer than two samples pass through the filter") {
  const auto s = series_ms({70});
  LatencySeries kept;
  std::vector<RemovedEntry> removed;
  REQUIRE(filter_3sigma(s, kept, removed) == Status::Ok);
  CHECK(kept.size() == 1);
  CHECK(removed.empty());
  LatencySummary sum;
  REQUIRE(summarize(kept, sum) == Status::Ok);
  CHECK(sum.std_ms == 0.0);
  CHECK(sum.mean_ms == 70.0);
}

TEST_CASE("order statistics: lower median and nearest-rank p95") {
  // Even count: lower median.
  CHECK(lower_median_us({1000, 2000, 3000, 4000}) == 2000);
  CHECK(lower_median_us({4000, 1000, 3000, 2000}) == 2000);
  CHECK(lower_median_us({1000, 2000, 3000}) == 2000);
  CHECK(lower_median_us({5000}) == 5000);

  // Nearest rank: ceil(0.95 n) - 1, zero-based.
  std::vector<int64_t> v;
  for (int i = 1; i <= 20; ++i) v.push_back(i * 1000);
  CHECK(percentile95_us(v) == 19'000);  // ceil(19) = 19th value
  v.push_back(21'000);
  CHECK(percentile95_us(v) == 20'000);  // n=21: ceil(19.95) = 20th value
  CHECK(percentile95_us({7000}) == 7000);
  CHECK(percentile95_us({1000, 2000, 3000}) == 3000);
}

TEST_CASE("offset invariance is exact, element-wise and in the spread block") {
  Rng rng(123);
  std::vector<int64_t> base_us;
  for (int i = 0; i < 1000; ++i)
    base_us.push_back(70'000 + static_cast<int64_t>(std::llround(rng.gaussian() * 3700)));
  base_us[100] = 570'000;
  base_us[200] = 570'000;

  const int64_t offsets[] = {0, 12'345'000, -987'654'321, 1};
  Analysis ref;
  REQUIRE(analyze(merged_from_us(base_us), ref) == Status::Ok);
  LatencySeries ref_norm;
  {
    LatencySeries raw, kept;
    std::vector<RemovedEntry> rem;
    REQUIRE(raw_latencies(merged_from_us(base_us), raw) == Status::Ok);
    REQUIRE(filter_3sigma(raw, kept, rem) == Status::Ok);
    REQUIRE(normalize_offset(kept, ref_norm) == Status::Ok);
  }

  for (int64_t off : offsets) {
    std::vector<int64_t> shifted = base_us;
    for (auto& v : shifted) v += off;
    const auto log = merged_from_us(shifted);

    Analysis a;
    REQUIRE(analyze(log, a) == Status::Ok);
    // Spread block: bit-identical doubles, not approximately equal.
    CHECK(a.normalized.std_ms == ref.normalized.std_ms);
    CHECK(a.normalized.p95_minus_median_ms == ref.normalized.p95_minus_median_ms);
    CHECK(a.normalized.span_ms == ref.normalized.span_ms);
    CHECK(a.filtered.n_removed == ref.filtered.n_removed);

    LatencySeries raw, kept, norm;
    std::vector<RemovedEntry> rem;
    REQUIRE(raw_latencies(log, raw) == Status::Ok);
    REQUIRE(filter_3sigma(raw, kept, rem) == Status::Ok);
    REQUIRE(normalize_offset(kept, norm) == Status::Ok);
    REQUIRE(norm.size() == ref_norm.size());
    for (size_t i = 0; i < norm.size(); ++i) CHECK(norm.values_us[i] == ref_norm.values_us[i]);
  }
}

TEST_CASE("raw latencies skip lost frames and need at least one sample") {
  SessionLog log = merged_from_us({70'000, 71'000});
  LogRecord lost;
  lost.sequence = 2;
  lost.t_send_us = 2'000'000;
  log.records.push_back(lost);
  LatencySeries s;
  REQUIRE(raw_latencies(log, s) == Status::Ok);
  CHECK(s.size() == 2);

  SessionLog empty;
  empty.role = "merged";
  CHECK(raw_latencies(empty, s) == Status::EmptyLog);
}

TEST_CASE("haptic rtt pairs haptic receive times with the triggering send") {
  SessionLog log = merged_from_us({70'000, 71'000, 69'000});
  log.records[1].gesture = true;
  log.records[1].haptic_sent_us = *log.records[1].t_recv_us + 500;
  log.records[1].haptic_recv_us = *log.records[1].t_send_us + 142'000;
  LatencySeries rtt;
  REQUIRE(haptic_rtt(log, rtt) == Status::Ok);
  REQUIRE(rtt.size() == 1);
  CHECK(rtt.values_us[0] == 142'000);
  CHECK(rtt.sequences[0] == 1);

  SessionLog no_haptics = merged_from_us({70'000});
  CHECK(haptic_rtt(no_haptics, rtt) == Status::NoHapticEvents);
}

TEST_CASE("analyze fills the full report structure") {
  std::vector<int64_t> values;
  Rng rng(5);
  for (int i = 0; i < 500; ++i)
    values.push_back(70'000 + static_cast<int64_t>(std::llround(rng.gaussian() * 3000)));
  values[7] = 900'000;
  auto log = merged_from_us(values);
  log.records[3].gesture = true;
  log.records[3].haptic_sent_us = *log.records[3].t_recv_us + 100;
  log.records[3].haptic_recv_us = *log.records[3].t_send_us + 141'000;

  Analysis a;
  REQUIRE(analyze(log, a) == Status::Ok);
  CHECK(a.session_id == 1);
  CHECK(a.raw.n_raw == 500);
  CHECK(a.filtered.n_removed == 1);
  CHECK(a.filtered.n_kept == 499);
  CHECK(a.removed.size() == 1);
  CHECK(a.removed[0].sequence == 7);
  CHECK(a.filtered.mean_ms > 69.0);
  CHECK(a.filtered.mean_ms < 71.0);
  CHECK(a.normalized.n == 499);
  CHECK(a.have_haptic);
  CHECK(a.haptic.mean_ms == 141.0);
  CHECK(a.haptic.n_kept == 1);
}

TEST_CASE("degenerate identical series: std 0, spread 0") {
  const auto s = series_ms({70, 70, 70, 70});
  LatencySummary sum;
  REQUIRE(summarize(s, sum) == Status::Ok);
  CHECK(sum.std_ms == 0.0);
  SpreadSummary sp;
  REQUIRE(spread(s, sp) == Status::Ok);
  CHECK(sp.std_ms == 0.0);
  CHECK(sp.p95_minus_median_ms == 0.0);
  CHECK(sp.span_ms == 0.0);
}
