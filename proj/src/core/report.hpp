#pragma once

#include <string>

#include "core/error.hpp"
#include "core/latlab.hpp"

namespace mlink::report {

enum class Format : int { Text = 0, Json = 1, Csv = 2 };

// Renders an analysis as a fixed-layout text table, a single-line JSON
// object, or metric,value CSV rows. Layouts are frozen; golden fixtures
// compare byte-for-byte. All millisecond values print with three decimals
// (the data's full microsecond resolution).
std::string render(const latlab::Analysis& analysis, Format format);

Status parse_format(const std::string& name, Format& out);  // text|json|csv

}  // namespace mlink::report
