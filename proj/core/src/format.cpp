#include "gaugeword/format.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

#include "gaugeword/error.hpp"

namespace gaugeword {

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_real(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw Error(ErrorCode::MalformedLine, "empty numeric field");
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) {
    throw Error(ErrorCode::MalformedLine, "not a number: '" + s + "'");
  }
  return value;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace gaugeword
