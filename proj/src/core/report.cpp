#include "core/report.hpp"

#include <cinttypes>
#include <cstdio>

#include "core/wire.hpp"

namespace mlink::report {

namespace {

constexpr const char* UNIT_NOTE =
    "kbit counts 1000 bit and kibit counts 1024 bit (2.4% apart); rounding to "
    "one decimal can make an SI kilobit figure pass for kibit/s. At 10 Hz and "
    "88 bytes per frame the exact values are 7.040 kbit/s and 6.875 kibit/s.";

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string ms(double v) { return fmt("%.3f", v); }

void text_summary_rows(std::string& out, const latlab::LatencySummary& s) {
  out += "  Mean               : " + fmt("%10.3f", s.mean_ms) + " ms\n";
  out += "  95th Percentile    : " + fmt("%10.3f", s.p95_ms) + " ms\n";
  out += "  Maximum            : " + fmt("%10.3f", s.max_ms) + " ms\n";
  out += "  Minimum            : " + fmt("%10.3f", s.min_ms) + " ms\n";
  out += "  Standard Deviation : " + fmt("%10.3f", s.std_ms) + " ms\n";
}

std::string render_text(const latlab::Analysis& a) {
  std::string out;
  out += "motion link session report\n";
  out += "==========================\n";
  out += "session id        : " + std::to_string(a.session_id) + "\n";
  out += "role              : " + a.role + "\n";
  out += "frames sent       : " + std::to_string(a.counters.sent) + "\n";
  out += "frames received   : " + std::to_string(a.counters.received) + "\n";
  out += "frames lost       : " + std::to_string(a.counters.lost) + "\n";
  out += "auth failures     : " + std::to_string(a.counters.auth_failures) + "\n";
  out += "checksum failures : " + std::to_string(a.counters.checksum_failures) + "\n";
  out += "\n";
  out += "one-way latency, raw clock, 3-sigma filtered (n_raw=" +
         std::to_string(a.filtered.n_raw) + ", kept=" + std::to_string(a.filtered.n_kept) +
         ", removed=" + std::to_string(a.filtered.n_removed) + ")\n";
  text_summary_rows(out, a.filtered);
  out += "\n";
  out += "offset-normalized spread, filtered (constant clock offsets cancel)\n";
  out += "  Standard Deviation : " + fmt("%10.3f", a.normalized.std_ms) + " ms\n";
  out += "  p95 - median       : " + fmt("%10.3f", a.normalized.p95_minus_median_ms) + " ms\n";
  out += "  max - min          : " + fmt("%10.3f", a.normalized.span_ms) + " ms\n";
  if (a.have_haptic) {
    out += "\n";
    out += "haptic round trip, controller clock (n=" + std::to_string(a.haptic.n_kept) + ")\n";
    text_summary_rows(out, a.haptic);
  }
  if (a.rate_hz > 0) {
    wire::ThroughputReport t;
    if (wire::throughput_report(a.rate_hz, wire::MOTION_FRAME_SIZE, t) == Status::Ok) {
      out += "\n";
      out += "throughput (" + fmt("%g", a.rate_hz) + " Hz, " +
             std::to_string(wire::MOTION_FRAME_SIZE) + "-byte motion frames)\n";
      out += "  " + fmt("%.0f", t.bits_per_s) + " bit/s = " + ms(t.kbit_per_s) +
             " kbit/s = " + ms(t.kibit_per_s) + " kibit/s\n";
      out += "  note: ";
      out += UNIT_NOTE;
      out += "\n";
    }
  }
  return out;
}

void json_summary(std::string& out, const latlab::LatencySummary& s) {
  out += "{\"mean_ms\":" + ms(s.mean_ms) + ",\"p95_ms\":" + ms(s.p95_ms) +
         ",\"max_ms\":" + ms(s.max_ms) + ",\"min_ms\":" + ms(s.min_ms) +
         ",\"std_ms\":" + ms(s.std_ms) + ",\"median_ms\":" + ms(s.median_ms) +
         ",\"n_raw\":" + std::to_string(s.n_raw) + ",\"n_kept\":" + std::to_string(s.n_kept) +
         ",\"n_removed\":" + std::to_string(s.n_removed) + "}";
}

std::string render_json(const latlab::Analysis& a) {
  std::string out = "{\"session_id\":" + std::to_string(a.session_id) + ",\"role\":\"" +
                    a.role + "\",\"counters\":{\"sent\":" + std::to_string(a.counters.sent) +
                    ",\"received\":" + std::to_string(a.counters.received) +
                    ",\"lost\":" + std::to_string(a.counters.lost) +
                    ",\"auth_failures\":" + std::to_string(a.counters.auth_failures) +
                    ",\"checksum_failures\":" + std::to_string(a.counters.checksum_failures) +
                    "},\"latency_raw\":";
  json_summary(out, a.raw);
  out += ",\"latency_filtered\":";
  json_summary(out, a.filtered);
  out += ",\"normalized_spread\":{\"std_ms\":" + ms(a.normalized.std_ms) +
         ",\"p95_minus_median_ms\":" + ms(a.normalized.p95_minus_median_ms) +
         ",\"span_ms\":" + ms(a.normalized.span_ms) +
         ",\"n\":" + std::to_string(a.normalized.n) + "}";
  out += ",\"haptic_rtt\":";
  if (a.have_haptic) {
    json_summary(out, a.haptic);
  } else {
    out += "null";
  }
  out += ",\"throughput\":";
  wire::ThroughputReport t;
  if (a.rate_hz > 0 &&
      wire::throughput_report(a.rate_hz, wire::MOTION_FRAME_SIZE, t) == Status::Ok) {
    out += "{\"rate_hz\":" + fmt("%g", a.rate_hz) +
           ",\"frame_bytes\":" + std::to_string(wire::MOTION_FRAME_SIZE) +
           ",\"bits_per_s\":" + fmt("%.3f", t.bits_per_s) +
           ",\"kbit_per_s\":" + ms(t.kbit_per_s) + ",\"kibit_per_s\":" + ms(t.kibit_per_s) +
           ",\"note\":\"";
    out += UNIT_NOTE;
    out += "\"}";
  } else {
    out += "null";
  }
  out += "}\n";
  return out;
}

void csv_summary(std::string& out, const char* prefix, const latlab::LatencySummary& s) {
  const std::string p(prefix);
  out += p + "_mean_ms," + ms(s.mean_ms) + "\n";
  out += p + "_p95_ms," + ms(s.p95_ms) + "\n";
  out += p + "_max_ms," + ms(s.max_ms) + "\n";
  out += p + "_min_ms," + ms(s.min_ms) + "\n";
  out += p + "_std_ms," + ms(s.std_ms) + "\n";
  out += p + "_median_ms," + ms(s.median_ms) + "\n";
  out += p + "_n_raw," + std::to_string(s.n_raw) + "\n";
  out += p + "_n_kept," + std::to_string(s.n_kept) + "\n";
  out += p + "_n_removed," + std::to_string(s.n_removed) + "\n";
}

std::string render_csv(const latlab::Analysis& a) {
  std::string out = "metric,value\n";
  out += "session_id," + std::to_string(a.session_id) + "\n";
  out += "sent," + std::to_string(a.counters.sent) + "\n";
  out += "received," + std::to_string(a.counters.received) + "\n";
  out += "lost," + std::to_string(a.counters.lost) + "\n";
  out += "auth_failures," + std::to_string(a.counters.auth_failures) + "\n";
  out += "checksum_failures," + std::to_string(a.counters.checksum_failures) + "\n";
  csv_summary(out, "raw", a.raw);
  csv_summary(out, "filtered", a.filtered);
  out += "normalized_std_ms," + ms(a.normalized.std_ms) + "\n";
  out += "normalized_p95_minus_median_ms," + ms(a.normalized.p95_minus_median_ms) + "\n";
  out += "normalized_span_ms," + ms(a.normalized.span_ms) + "\n";
  if (a.have_haptic) csv_summary(out, "haptic_rtt", a.haptic);
  wire::ThroughputReport t;
  if (a.rate_hz > 0 &&
      wire::throughput_report(a.rate_hz, wire::MOTION_FRAME_SIZE, t) == Status::Ok) {
    out += "throughput_bits_per_s," + fmt("%.3f", t.bits_per_s) + "\n";
    out += "throughput_kbit_per_s," + ms(t.kbit_per_s) + "\n";
    out += "throughput_kibit_per_s," + ms(t.kibit_per_s) + "\n";
  }
  return out;
}

}  // namespace

std::string render(const latlab::Analysis& analysis, Format format) {
  switch (format) {
    case Format::Json:
      return render_json(analysis);
    case Format::Csv:
      return render_csv(analysis);
    case Format::Text:
    default:
      return render_text(analysis);
  }
}

Status parse_format(const std::string& name, Format& out) {
  if (name == "text") {
    out = Format::Text;
  } else if (name == "json") {
    out = Format::Json;
  } else if (name == "csv") {
    out = Format::Csv;
  } else {
    return Status::InvalidArg;
  }
  return Status::Ok;
}

}  // namespace mlink::report
