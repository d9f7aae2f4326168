#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/error.hpp"

namespace mlink::session {

struct LogRecord {
  uint32_t sequence = 0;
  std::optional<int64_t> t_send_us;       // controller clock
  std::optional<int64_t> t_recv_us;       // host clock; empty = lost
  bool gesture = false;
  std::optional<int64_t> haptic_sent_us;  // host clock
  std::optional<int64_t> haptic_recv_us;  // controller clock
};

struct Counters {
  uint64_t sent = 0;
  uint64_t received = 0;
  uint64_t lost = 0;
  uint64_t auth_failures = 0;
  uint64_t checksum_failures = 0;
};

struct SessionLog {
  uint32_t session_id = 0;
  double rate_hz = 0;
  std::string role;  // "controller", "host", or "merged"
  std::vector<LogRecord> records;
  Counters counters;
};

// Timestamps are integer microseconds internally but serialize as decimal
// milliseconds: "70" when the value is whole, else exactly three fractional
// digits ("70.120"). The pair below converts losslessly in both directions;
// parse never goes through a double, so values survive a write/read cycle
// bit-exactly.
std::string format_ms(int64_t us);
Status parse_ms(std::string_view text, int64_t& us);

// JSON-Lines, one record per line:
//   {"seq":0,"t_send_ms":...,"t_recv_ms":...|null,"gesture":false,
//    "haptic_sent_ms":...|null,"haptic_recv_ms":...|null}
// then one trailing summary line:
//   {"counters":{"sent":..,"received":..,"lost":..,"auth_failures":..,
//    "checksum_failures":..},"session_id":..,"rate_hz":..,"role":".."}
std::string to_jsonl(const SessionLog& log);
Status parse_jsonl(std::string_view text, SessionLog& out);
Status write_jsonl(const std::string& path, const SessionLog& log);
Status read_jsonl(const std::string& path, SessionLog& out);

// Joins by sequence: one output record per controller-sent sequence, host
// fields filled where a matching host record exists. Sequences the host
// never saw stay without t_recv and are counted lost. Decode-failure
// counters from both sides are summed.
Status merge_logs(const SessionLog& controller, const SessionLog& host, SessionLog& out);

}  // namespace mlink::session
