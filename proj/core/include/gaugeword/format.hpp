#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gaugeword {

// 17 significant digits ("%.17g"), enough to round-trip any binary64 value.
std::string format_real(double value);

// Strict parse of a whole field; throws Error(MalformedLine) on failure.
double parse_real(std::string_view text);

// 64-bit FNV-1a over a byte string, used for run-manifest digests.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace gaugeword
