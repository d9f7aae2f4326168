#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <sstream>
#include <string>

#include "core/latlab.hpp"
#include "core/report.hpp"
#include "core/sessionlog.hpp"
#include "doctest.h"

using namespace mlink;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string fixture(const char* name) { return std::string(FIXTURE_DIR) + "/" + name; }

latlab::Analysis fixture_analysis() {
  session::SessionLog log;
  REQUIRE(session::read_jsonl(fixture("merged_small.jsonl"), log) == Status::Ok);
  latlab::Analysis a;
  REQUIRE(latlab::analyze(log, a) == Status::Ok);
  return a;
}

}  // namespace

TEST_CASE("text report matches the frozen golden byte-for-byte") {
  const auto a = fixture_analysis();
  CHECK(report::render(a, report::Format::Text) == slurp(fixture("report_small.txt")));
}

TEST_CASE("json report matches the frozen golden byte-for-byte") {
  const auto a = fixture_analysis();
  CHECK(report::render(a, report::Format::Json) == slurp(fixture("report_small.json")));
}

TEST_CASE("csv report matches the frozen golden byte-for-byte") {
  const auto a = fixture_analysis();
  CHECK(report::render(a, report::Format::Csv) == slurp(fixture("report_small.csv")));
}

TEST_CASE("report values are the hand-computed statistics of 68 70 75") {
  // mean 71, sample std sqrt(13) = 3.60555.. -> 3.606, lower median 70,
  // nearest-rank p95 = 75; normalized spread: p95 - median = 5, span = 7.
  const std::string text = report::render(fixture_analysis(), report::Format::Text);
  CHECK(text.find("Mean               :     71.000 ms") != std::string::npos);
  CHECK(text.find("Standard Deviation :      3.606 ms") != std::string::npos);
  CHECK(text.find("95th Percentile    :     75.000 ms") != std::string::npos);
  CHECK(text.find("p95 - median       :      5.000 ms") != std::string::npos);
  CHECK(text.find("max - min          :      7.000 ms") != std::string::npos);
  CHECK(text.find("haptic round trip, controller clock (n=1)") != std::string::npos);
  CHECK(text.find("   141.000 ms") != std::string::npos);
}

TEST_CASE("throughput line and unit footnote are part of every format") {
  const auto a = fixture_analysis();
  const std::string text = report::render(a, report::Format::Text);
  CHECK(text.find("7040 bit/s = 7.040 kbit/s = 6.875 kibit/s") != std::string::npos);
  CHECK(text.find("kbit counts 1000 bit and kibit counts 1024 bit") != std::string::npos);

  const std::string json = report::render(a, report::Format::Json);
  CHECK(json.find("\"kibit_per_s\":6.875") != std::string::npos);
  CHECK(json.find("\"kbit_per_s\":7.040") != std::string::npos);

  const std::string csv = report::render(a, report::Format::Csv);
  CHECK(csv.find("throughput_kibit_per_s,6.875") != std::string::npos);
}

TEST_CASE("haptic block is omitted when no haptics were exchanged") {
  auto a = fixture_analysis();
  a.have_haptic = false;
  const std::string text = report::render(a, report::Format::Text);
  CHECK(text.find("haptic round trip") == std::string::npos);
  const std::string json = report::render(a, report::Format::Json);
  CHECK(json.find("\"haptic_rtt\":null") != std::string::npos);
  const std::string csv = report::render(a, report::Format::Csv);
  CHECK(csv.find("haptic_rtt_mean_ms") == std::string::npos);
}

TEST_CASE("throughput block is omitted without a known rate") {
  auto a = fixture_analysis();
  a.rate_hz = 0;
  CHECK(report::render(a, report::Format::Text).find("throughput") == std::string::npos);
  CHECK(report::render(a, report::Format::Json).find("\"throughput\":null") !=
        std::string::npos);
}

TEST_CASE("json report is a single line") {
  const std::string json = report::render(fixture_analysis(), report::Format::Json);
  CHECK(json.find('\n') == json.size() - 1);
}

TEST_CASE("format names parse") {
  report::Format f;
  REQUIRE(report::parse_format("text", f) == Status::Ok);
  CHECK(f == report::Format::Text);
  REQUIRE(report::parse_format("json", f) == Status::Ok);
  CHECK(f == report::Format::Json);
  REQUIRE(report::parse_format("csv", f) == Status::Ok);
  CHECK(f == report::Format::Csv);
  CHECK(report::parse_format("xml", f) == Status::InvalidArg);
}
