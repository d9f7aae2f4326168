#include "core/trace.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "core/rng.hpp"

namespace mlink::trace {

namespace {

constexpr const char* CSV_HEADER = "t_ms,ax,ay,az,gx,gy,gz";

void format_float(char* buf, size_t n, float v) { std::snprintf(buf, n, "%.9g", v); }

}  // namespace

Status generate(const TraceSpec& spec, std::vector<wire::MotionFrame>& out) {
  out.clear();
  if (!(spec.rate_hz > 0) || !(spec.duration_s >= 0) || spec.noise_sigma < 0)
    return Status::InvalidArg;
  for (const auto& p : spec.pulses) {
    if (p.onset_s < 0 || p.onset_s > spec.duration_s) return Status::RangeError;
    if (!(p.width_ms > 0)) return Status::RangeError;
  }

  const auto n = static_cast<uint64_t>(std::ceil(spec.duration_s * spec.rate_hz));
  const auto tick_us = static_cast<int64_t>(std::llround(1e6 / spec.rate_hz));
  Rng rng(spec.seed);

  out.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    const int64_t t_us = static_cast<int64_t>(i) * tick_us;
    wire::MotionFrame f;
    f.timestamp_ms = static_cast<uint64_t>((t_us + 500) / 1000);

    const double t_ms = static_cast<double>(t_us) / 1000.0;
    for (const auto& p : spec.pulses) {
      const double onset_ms = p.onset_s * 1000.0;
      const double rel = t_ms - onset_ms;
      if (rel < 0 || rel > p.width_ms) continue;
      const double a = p.amplitude * std::sin(std::numbers::pi * rel / p.width_ms);
      f.accel[static_cast<int>(p.axis)] += static_cast<float>(a);
    }
    if (spec.noise_sigma > 0) {
      for (float& a : f.accel) a += static_cast<float>(spec.noise_sigma * rng.gaussian());
    }
    out.push_back(f);
  }
  return Status::Ok;
}

Status write_csv(const std::string& path, const std::vector<wire::MotionFrame>& frames) {
  std::ofstream os(path, std::ios::binary);
  if (!os) return Status::IoError;
  os << CSV_HEADER << '\n';
  char buf[32];
  for (const auto& f : frames) {
    os << f.timestamp_ms;
    for (int i = 0; i < 3; ++i) {
      format_float(buf, sizeof buf, f.accel[i]);
      os << ',' << buf;
    }
    for (int i = 0; i < 3; ++i) {
      format_float(buf, sizeof buf, f.gyro[i]);
      os << ',' << buf;
    }
    os << '\n';
  }
  os.flush();
  return os ? Status::Ok : Status::IoError;
}

Status read_csv(const std::string& path, std::vector<wire::MotionFrame>& out) {
  out.clear();
  std::ifstream is(path, std::ios::binary);
  if (!is) return Status::IoError;

  std::string line;
  if (!std::getline(is, line)) return Status::ParseError;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != CSV_HEADER) return Status::ParseError;

  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::array<std::string, 7> col;
    size_t start = 0, idx = 0;
    for (; idx < 7; ++idx) {
      const size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        if (idx != 6) return Status::ParseError;
        col[idx] = line.substr(start);
        break;
      }
      col[idx] = line.substr(start, comma - start);
      start = comma + 1;
    }
    if (idx != 6 || line.find(',', start) != std::string::npos) return Status::ParseError;

    wire::MotionFrame f;
    errno = 0;
    char* end = nullptr;
    f.timestamp_ms = std::strtoull(col[0].c_str(), &end, 10);
    if (errno != 0 || end == col[0].c_str() || *end != '\0') return Status::ParseError;
    float* dst[6] = {&f.accel[0], &f.accel[1], &f.accel[2],
                     &f.gyro[0], &f.gyro[1], &f.gyro[2]};
    for (int i = 0; i < 6; ++i) {
      errno = 0;
      *dst[i] = std::strtof(col[i + 1].c_str(), &end);
      if (errno != 0 || end == col[i + 1].c_str() || *end != '\0') return Status::ParseError;
    }
    out.push_back(f);
  }
  return Status::Ok;
}

}  // namespace mlink::trace
