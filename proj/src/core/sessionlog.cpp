#include "core/sessionlog.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace mlink::session {

std::string format_ms(int64_t us) {
  const bool neg = us < 0;
  const uint64_t a = neg ? 0ull - static_cast<uint64_t>(us) : static_cast<uint64_t>(us);
  const uint64_t whole = a / 1000;
  const uint64_t frac = a % 1000;
  char buf[40];
  if (frac == 0) {
    std::snprintf(buf, sizeof buf, "%s%" PRIu64, neg ? "-" : "", whole);
  } else {
    std::snprintf(buf, sizeof buf, "%s%" PRIu64 ".%03u", neg ? "-" : "", whole,
                  static_cast<unsigned>(frac));
  }
  return buf;
}

Status parse_ms(std::string_view text, int64_t& us) {
  size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    neg = text[i] == '-';
    ++i;
  }
  if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
    return Status::ParseError;

  uint64_t whole = 0;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    if (whole > (UINT64_MAX - 9) / 10) return Status::ParseError;
    whole = whole * 10 + static_cast<uint64_t>(text[i] - '0');
  }
  uint64_t frac = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    int digits = 0;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      if (digits >= 3) return Status::ParseError;  // finer than microseconds
      frac = frac * 10 + static_cast<uint64_t>(text[i] - '0');
      ++digits;
    }
    if (digits == 0) return Status::ParseError;
    for (; digits < 3; ++digits) frac *= 10;
  }
  if (i != text.size()) return Status::ParseError;

  if (whole > static_cast<uint64_t>(INT64_MAX / 1000) - 1) return Status::ParseError;
  const int64_t value = static_cast<int64_t>(whole * 1000 + frac);
  us = neg ? -value : value;
  return Status::Ok;
}

namespace {

void append_opt_ms(std::string& out, const std::optional<int64_t>& v) {
  if (v) {
    out += format_ms(*v);
  } else {
    out += "null";
  }
}

std::string format_rate(double rate_hz) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", rate_hz);
  return buf;
}

// Minimal strict reader for the subset of JSON this module emits: objects
// with known string keys, unsigned integers, decimal numbers, booleans,
// null, one level of nesting, and escape-free strings.
class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }
  bool eat(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  bool peek(char c) {
    skip_ws();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool at_end() {
    skip_ws();
    return i_ >= s_.size();
  }

  Status read_string(std::string_view& out) {
    if (!eat('"')) return Status::ParseError;
    const size_t start = i_;
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\') return Status::ParseError;
      ++i_;
    }
    if (i_ >= s_.size()) return Status::ParseError;
    out = s_.substr(start, i_ - start);
    ++i_;
    return Status::Ok;
  }

  // Longest run matching the number grammar; validation happens downstream.
  Status read_number_token(std::string_view& out) {
    skip_ws();
    const size_t start = i_;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) ++i_;
    while (i_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.'))
      ++i_;
    if (i_ == start) return Status::ParseError;
    out = s_.substr(start, i_ - start);
    return Status::Ok;
  }

  bool eat_literal(std::string_view lit) {
    skip_ws();
    if (s_.substr(i_, lit.size()) == lit) {
      i_ += lit.size();
      return true;
    }
    return false;
  }

 private:
  std::string_view s_;
  size_t i_ = 0;
};

Status read_u64(Cursor& c, uint64_t& out) {
  std::string_view tok;
  Status st = c.read_number_token(tok);
  if (st != Status::Ok) return st;
  if (tok.empty() || tok.find('.') != std::string_view::npos || tok[0] == '-' || tok[0] == '+')
    return Status::ParseError;
  errno = 0;
  char* end = nullptr;
  const std::string tmp(tok);
  out = std::strtoull(tmp.c_str(), &end, 10);
  if (errno != 0 || end != tmp.c_str() + tmp.size()) return Status::ParseError;
  return Status::Ok;
}

Status read_opt_ms(Cursor& c, std::optional<int64_t>& out) {
  if (c.eat_literal("null")) {
    out.reset();
    return Status::Ok;
  }
  std::string_view tok;
  Status st = c.read_number_token(tok);
  if (st != Status::Ok) return st;
  int64_t us = 0;
  st = parse_ms(tok, us);
  if (st != Status::Ok) return st;
  out = us;
  return Status::Ok;
}

Status read_bool(Cursor& c, bool& out) {
  if (c.eat_literal("true")) {
    out = true;
    return Status::Ok;
  }
  if (c.eat_literal("false")) {
    out = false;
    return Status::Ok;
  }
  return Status::ParseError;
}

Status parse_counters(Cursor& c, Counters& out) {
  if (!c.eat('{')) return Status::ParseError;
  bool first = true;
  while (!c.peek('}')) {
    if (!first && !c.eat(',')) return Status::ParseError;
    first = false;
    std::string_view key;
    Status st = c.read_string(key);
    if (st != Status::Ok) return st;
    if (!c.eat(':')) return Status::ParseError;
    uint64_t v = 0;
    st = read_u64(c, v);
    if (st != Status::Ok) return st;
    if (key == "sent") out.sent = v;
    else if (key == "received") out.received = v;
    else if (key == "lost") out.lost = v;
    else if (key == "auth_failures") out.auth_failures = v;
    else if (key == "checksum_failures") out.checksum_failures = v;
    else return Status::ParseError;
  }
  c.eat('}');
  return Status::Ok;
}

// A line is either a record ({"seq":...}) or the summary ({"counters":...}).
Status parse_line(std::string_view line, SessionLog& log, bool& was_summary) {
  Cursor c(line);
  was_summary = false;
  if (!c.eat('{')) return Status::ParseError;

  LogRecord rec;
  bool have_seq = false;
  bool first = true;
  while (!c.peek('}')) {
    if (!first && !c.eat(',')) return Status::ParseError;
    first = false;
    std::string_view key;
    Status st = c.read_string(key);
    if (st != Status::Ok) return st;
    if (!c.eat(':')) return Status::ParseError;

    if (key == "seq") {
      uint64_t v = 0;
      st = read_u64(c, v);
      if (st != Status::Ok || v > UINT32_MAX) return Status::ParseError;
      rec.sequence = static_cast<uint32_t>(v);
      have_seq = true;
    } else if (key == "t_send_ms") {
      st = read_opt_ms(c, rec.t_send_us);
      if (st != Status::Ok) return st;
    } else if (key == "t_recv_ms") {
      st = read_opt_ms(c, rec.t_recv_us);
      if (st != Status::Ok) return st;
    } else if (key == "gesture") {
      st = read_bool(c, rec.gesture);
      if (st != Status::Ok) return st;
    } else if (key == "haptic_sent_ms") {
      st = read_opt_ms(c, rec.haptic_sent_us);
      if (st != Status::Ok) return st;
    } else if (key == "haptic_recv_ms") {
      st = read_opt_ms(c, rec.haptic_recv_us);
      if (st != Status::Ok) return st;
    } else if (key == "counters") {
      st = parse_counters(c, log.counters);
      if (st != Status::Ok) return st;
      was_summary = true;
    } else if (key == "session_id") {
      uint64_t v = 0;
      st = read_u64(c, v);
      if (st != Status::Ok || v > UINT32_MAX) return Status::ParseError;
      log.session_id = static_cast<uint32_t>(v);
    } else if (key == "rate_hz") {
      std::string_view tok;
      st = c.read_number_token(tok);
      if (st != Status::Ok) return st;
      const std::string tmp(tok);
      errno = 0;
      char* end = nullptr;
      log.rate_hz = std::strtod(tmp.c_str(), &end);
      if (errno != 0 || end != tmp.c_str() + tmp.size()) return Status::ParseError;
    } else if (key == "role") {
      std::string_view v;
      st = c.read_string(v);
      if (st != Status::Ok) return st;
      log.role = std::string(v);
    } else {
      return Status::ParseError;
    }
  }
  c.eat('}');
  if (!c.at_end()) return Status::ParseError;

  if (was_summary) {
    if (have_seq) return Status::ParseError;  // mixed line
    return Status::Ok;
  }
  if (!have_seq) return Status::ParseError;
  log.records.push_back(rec);
  return Status::Ok;
}

}  // namespace

std::string to_jsonl(const SessionLog& log) {
  std::string out;
  out.reserve(log.records.size() * 96 + 160);
  for (const auto& r : log.records) {
    out += "{\"seq\":";
    out += std::to_string(r.sequence);
    out += ",\"t_send_ms\":";
    append_opt_ms(out, r.t_send_us);
    out += ",\"t_recv_ms\":";
    append_opt_ms(out, r.t_recv_us);
    out += ",\"gesture\":";
    out += r.gesture ? "true" : "false";
    out += ",\"haptic_sent_ms\":";
    append_opt_ms(out, r.haptic_sent_us);
    out += ",\"haptic_recv_ms\":";
    append_opt_ms(out, r.haptic_recv_us);
    out += "}\n";
  }
  out += "{\"counters\":{\"sent\":";
  out += std::to_string(log.counters.sent);
  out += ",\"received\":";
  out += std::to_string(log.counters.received);
  out += ",\"lost\":";
  out += std::to_string(log.counters.lost);
  out += ",\"auth_failures\":";
  out += std::to_string(log.counters.auth_failures);
  out += ",\"checksum_failures\":";
  out += std::to_string(log.counters.checksum_failures);
  out += "},\"session_id\":";
  out += std::to_string(log.session_id);
  out += ",\"rate_hz\":";
  out += format_rate(log.rate_hz);
  out += ",\"role\":\"";
  out += log.role;
  out += "\"}\n";
  return out;
}

Status parse_jsonl(std::string_view text, SessionLog& out) {
  out = SessionLog{};
  size_t pos = 0;
  bool saw_summary = false;
  bool saw_line = false;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (saw_summary) return Status::ParseError;  // summary must be last
    saw_line = true;
    bool was_summary = false;
    const Status st = parse_line(line, out, was_summary);
    if (st != Status::Ok) return st;
    saw_summary = was_summary;
  }
  // A log without its closing summary line is truncated, not valid.
  if (!saw_summary) return saw_line ? Status::ParseError : Status::EmptyLog;
  return Status::Ok;
}

Status write_jsonl(const std::string& path, const SessionLog& log) {
  std::ofstream os(path, std::ios::binary);
  if (!os) return Status::IoError;
  os << to_jsonl(log);
  os.flush();
  return os ? Status::Ok : Status::IoError;
}

Status read_jsonl(const std::string& path, SessionLog& out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return Status::IoError;
  std::ostringstream ss;
  ss << is.rdbuf();
  if (is.bad()) return Status::IoError;
  return parse_jsonl(ss.str(), out);
}

Status merge_logs(const SessionLog& controller, const SessionLog& host, SessionLog& out) {
  if (controller.session_id != host.session_id) return Status::SessionMismatch;
  out = SessionLog{};
  out.session_id = controller.session_id;
  out.rate_hz = controller.rate_hz != 0 ? controller.rate_hz : host.rate_hz;
  out.role = "merged";

  std::map<uint32_t, const LogRecord*> host_by_seq;
  for (const auto& r : host.records) host_by_seq.emplace(r.sequence, &r);

  out.records.reserve(controller.records.size());
  for (const auto& c : controller.records) {
    LogRecord m;
    m.sequence = c.sequence;
    m.t_send_us = c.t_send_us;
    m.haptic_recv_us = c.haptic_recv_us;
    if (auto it = host_by_seq.find(c.sequence); it != host_by_seq.end()) {
      m.t_recv_us = it->second->t_recv_us;
      m.gesture = it->second->gesture;
      m.haptic_sent_us = it->second->haptic_sent_us;
    }
    out.records.push_back(m);
  }
  std::sort(out.records.begin(), out.records.end(),
            [](const LogRecord& a, const LogRecord& b) { return a.sequence < b.sequence; });

  uint64_t received = 0;
  for (const auto& r : out.records)
    if (r.t_recv_us) ++received;
  out.counters.sent = controller.counters.sent != 0
                          ? controller.counters.sent
                          : static_cast<uint64_t>(controller.records.size());
  out.counters.received = received;
  out.counters.lost = out.counters.sent >= received ? out.counters.sent - received : 0;
  out.counters.auth_failures = controller.counters.auth_failures + host.counters.auth_failures;
  out.counters.checksum_failures =
      controller.counters.checksum_failures + host.counters.checksum_failures;
  return Status::Ok;
}

}  // namespace mlink::session
