#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <vector>

#include "core/clockmodel.hpp"
#include "core/linksim.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace mlink;
using namespace mlink::netsim;

TEST_CASE("pinned rng produces its golden stream on every platform") {
  // Frozen from an independent implementation of the same generator.
  Rng r(42);
  CHECK(r.next_u64() == 0xd0764d4f4476689fULL);
  CHECK(r.next_u64() == 0x519e4174576f3791ULL);
  CHECK(r.next_u64() == 0xfbe07cfb0c24ed8cULL);
  CHECK(r.next_u64() == 0xb37d9f600cd835b8ULL);
  CHECK(r.next_u64() == 0xcb231c3874846a73ULL);

  Rng s1(42, 1);
  CHECK(s1.next_u64() == 0xefdb3abe2d004720ULL);
  CHECK(s1.next_u64() == 0x74285db8cad01896ULL);
  CHECK(s1.next_u64() == 0xe6026692c15933c2ULL);

  Rng z(0);
  CHECK(z.next_u64() == 0x53175d61490b23dfULL);
  CHECK(z.next_u64() == 0x61da6f3dc380d507ULL);
  CHECK(z.next_u64() == 0x5c0fdf91ec9a7bfcULL);
}

TEST_CASE("rng derived distributions stay in range and reproduce") {
  Rng a(7), b(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.uniform());
  }
  Rng g(7);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) sum += g.gaussian();
  CHECK(std::abs(sum / 10000) < 0.05);
  Rng e(7);
  for (int i = 0; i < 100; ++i) CHECK(e.exponential() >= 0.0);
}

TEST_CASE("zero jitter delivers the base delay exactly, ignoring bounds") {
  LinkModel m;
  m.base_delay_ms = 5.0;
  m.jitter_sigma_ms = 0.0;
  m.min_delay_ms = 52.2;  // would clamp 5 ms if bounds were consulted
  m.max_delay_ms = 82.2;
  DelaySampler s(m, 1);
  for (int i = 0; i < 100; ++i) {
    int64_t d = -1;
    REQUIRE(s.sample(d));
    CHECK(d == 5000);
  }
}

TEST_CASE("gaussian shape: 10000 samples land on the configured moments") {
  LinkModel m;  // defaults: base 70.4, sigma 3.7, bounds [52.2, 82.2]
  m.shape = JitterShape::Gauss;
  DelaySampler s(m, 1);
  std::vector<double> ms;
  for (int i = 0; i < 10000; ++i) {
    int64_t d = 0;
    REQUIRE(s.sample(d));
    ms.push_back(d / 1000.0);
  }
  double mean = 0;
  for (double v : ms) mean += v;
  mean /= ms.size();
  double var = 0;
  for (double v : ms) var += (v - mean) * (v - mean);
  var /= (ms.size() - 1);
  CHECK(std::abs(mean - 70.4) < 0.5);
  CHECK(std::abs(std::sqrt(var) - 3.7) < 0.5);
  const auto [lo, hi] = std::minmax_element(ms.begin(), ms.end());
  CHECK(*lo >= 52.2);
  CHECK(*hi <= 82.2);
  // |z| <= 3 resampling keeps everything within 3 sigma of base.
  CHECK(*lo >= 70.4 - 3 * 3.7 - 1e-9);
  CHECK(*hi <= 70.4 + 3 * 3.7 + 1e-9);
}

TEST_CASE("skewed shape respects the delay bounds") {
  LinkModel m;  // defaults, shape Skew
  DelaySampler s(m, 1);
  for (int i = 0; i < 10000; ++i) {
    int64_t d = 0;
    REQUIRE(s.sample(d));
    CHECK(d >= 52200);
    CHECK(d <= 82200);
  }
}

TEST_CASE("no loss uniform is consumed when loss_prob is zero") {
  LinkModel m;
  m.shape = JitterShape::Gauss;
  m.loss_prob = 0;
  DelaySampler s(m, 1);
  // Replicate the first draws with a bare generator on the same stream: the
  // first value consumed must be the jitter gaussian, not a loss uniform.
  Rng r(m.seed, 1);
  for (int i = 0; i < 500; ++i) {
    int64_t d = 0;
    REQUIRE(s.sample(d));
    double z = r.gaussian();
    while (std::abs(z) > 3.0) z = r.gaussian();
    // Defaults keep base +- 3 sigma inside [52.2, 82.2]: no bound resampling.
    CHECK(d == std::llround((70.4 + 3.7 * z) * 1000.0));
  }
}

TEST_CASE("loss rate tracks loss_prob") {
  LinkModel m;
  m.loss_prob = 0.5;
  DelaySampler b(m, 1);
  int dropped = 0;
  int64_t d = 0;
  for (int i = 0; i < 2000; ++i)
    if (!b.sample(d)) ++dropped;
  CHECK(dropped > 800);
  CHECK(dropped < 1200);
}

TEST_CASE("loss probability one drops everything") {
  LinkModel m;
  m.loss_prob = 1.0;
  DelaySampler s(m, 1);
  int64_t d = 0;
  for (int i = 0; i < 50; ++i) CHECK(!s.sample(d));
}

TEST_CASE("link model validation") {
  LinkModel m;
  CHECK(validate(m) == Status::Ok);
  m.loss_prob = 1.5;
  CHECK(validate(m) == Status::InvalidArg);
  m.loss_prob = 0;
  m.jitter_sigma_ms = -1;
  CHECK(validate(m) == Status::InvalidArg);
  m.jitter_sigma_ms = 3.7;
  m.min_delay_ms = 90;
  m.max_delay_ms = 80;
  CHECK(validate(m) == Status::InvalidArg);
  m.min_delay_ms = 52.2;
  m.max_delay_ms = 82.2;
  m.base_delay_ms = -5;
  CHECK(validate(m) == Status::InvalidArg);
}

TEST_CASE("scheduler pops by due time with FIFO tie-break") {
  Scheduler sched;
  std::vector<int> order;
  sched.at(300, [&](int64_t) { order.push_back(3); });
  sched.at(100, [&](int64_t) { order.push_back(1); });
  sched.at(200, [&](int64_t) { order.push_back(20); });
  sched.at(200, [&](int64_t) { order.push_back(21); });
  sched.at(200, [&](int64_t) { order.push_back(22); });
  sched.run();
  CHECK(order == std::vector<int>{1, 20, 21, 22, 3});
  CHECK(sched.now_us() == 300);
}

TEST_CASE("events scheduled from inside callbacks run in time order") {
  Scheduler sched;
  std::vector<int64_t> fired;
  sched.at(10, [&](int64_t now) {
    fired.push_back(now);
    sched.at(now + 5, [&](int64_t n2) { fired.push_back(n2); });
    sched.at(now + 1, [&](int64_t n2) { fired.push_back(n2); });
  });
  sched.at(12, [&](int64_t now) { fired.push_back(now); });
  sched.run();
  CHECK(fired == std::vector<int64_t>{10, 11, 12, 15});
}

TEST_CASE("ordered link never delivers out of send order") {
  Scheduler sched;
  LinkModel m;
  m.base_delay_ms = 10;
  m.jitter_sigma_ms = 5;
  m.min_delay_ms = 1;
  m.max_delay_ms = 30;
  m.shape = JitterShape::Gauss;
  std::vector<uint8_t> seen;
  SimLink link(sched, m, 1, [&](int64_t, std::vector<uint8_t> b) { seen.push_back(b[0]); });
  for (uint8_t i = 0; i < 200; ++i) {
    // Sends 1 ms apart; jitter larger than the gap forces hold-behind.
    auto delay = link.send(i * 1000, {i});
    REQUIRE(delay.has_value());
  }
  sched.run();
  REQUIRE(seen.size() == 200);
  for (size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == i);
}

TEST_CASE("ordered link reports the realized delay including hold-behind") {
  Scheduler sched;
  LinkModel m;
  m.base_delay_ms = 10;
  m.jitter_sigma_ms = 5;
  m.min_delay_ms = 1;
  m.max_delay_ms = 30;
  m.shape = JitterShape::Gauss;
  std::vector<std::pair<int64_t, int64_t>> sent;  // (send time, realized delay)
  std::vector<int64_t> delivered_at;
  SimLink link(sched, m, 1,
               [&](int64_t now, std::vector<uint8_t>) { delivered_at.push_back(now); });
  for (int i = 0; i < 100; ++i) {
    const int64_t t = i * 1000;
    auto delay = link.send(t, {static_cast<uint8_t>(i)});
    REQUIRE(delay.has_value());
    sent.push_back({t, *delay});
  }
  sched.run();
  REQUIRE(delivered_at.size() == sent.size());
  for (size_t i = 0; i < sent.size(); ++i)
    CHECK(delivered_at[i] - sent[i].first == sent[i].second);
  for (size_t i = 1; i < delivered_at.size(); ++i)
    CHECK(delivered_at[i] >= delivered_at[i - 1]);
}

TEST_CASE("unordered link can reorder but still reports exact delays") {
  Scheduler sched;
  LinkModel m;
  m.base_delay_ms = 10;
  m.jitter_sigma_ms = 5;
  m.min_delay_ms = 1;
  m.max_delay_ms = 30;
  m.ordered = false;
  m.shape = JitterShape::Gauss;
  std::vector<uint8_t> seen;
  SimLink link(sched, m, 1, [&](int64_t, std::vector<uint8_t> b) { seen.push_back(b[0]); });
  for (uint8_t i = 0; i < 200; ++i) REQUIRE(link.send(i * 1000, {i}).has_value());
  sched.run();
  REQUIRE(seen.size() == 200);
  CHECK(!std::is_sorted(seen.begin(), seen.end()));
}

TEST_CASE("lossy link counts drops and delivers the rest") {
  Scheduler sched;
  LinkModel m;
  m.loss_prob = 0.3;
  int delivered = 0;
  SimLink link(sched, m, 1, [&](int64_t, std::vector<uint8_t>) { ++delivered; });
  int sent_ok = 0;
  for (int i = 0; i < 1000; ++i)
    if (link.send(i * 1000, {0}).has_value()) ++sent_ok;
  sched.run();
  CHECK(link.offered() == 1000);
  CHECK(link.dropped() == 1000 - sent_ok);
  CHECK(delivered == sent_ok);
  CHECK(sent_ok > 600);
  CHECK(sent_ok < 800);
}

TEST_CASE("clock model: zero drift is an exact constant shift") {
  ClockModel c;
  c.offset_us = 12'345'000;
  CHECK(c.reading_us(0) == 12'345'000);
  CHECK(c.reading_us(1'700'000'000'000'000) == 1'700'000'012'345'000);
  CHECK(c.reading_us(-5) == 12'344'995);
}

TEST_CASE("clock model drift in parts per million") {
  ClockModel c;
  c.drift_ppm = 50;  // 50 us gained per second
  CHECK(c.reading_us(1'000'000) == 1'000'050);
  CHECK(c.reading_us(2'000'000) == 2'000'100);
  c.drift_ppm = -50;
  CHECK(c.reading_us(1'000'000) == 999'950);
  c.drift_ppm = 1;
  c.offset_us = 10;
  CHECK(c.reading_us(500'000) == 500'011);  // rounds 0.5 up away from zero
}
