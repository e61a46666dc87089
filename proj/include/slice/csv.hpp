#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace slice {

// Shortest round-trip decimal form of a double; parsing it back recovers the
// exact bit pattern, which keeps emitted CSVs audit-friendly.
inline void append_csv_double(std::string& out, double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) {
    throw std::runtime_error("double formatting failed");
  }
  out.append(buf, p);
}

inline std::string csv_double(double v) {
  std::string out;
  append_csv_double(out, v);
  return out;
}

// Strict full-field parse used when auditing emitted CSVs.
inline double parse_csv_double(std::string_view field) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || p != last) {
    throw std::runtime_error("malformed numeric field '" + std::string(field) +
                             "'");
  }
  return v;
}

}  // namespace slice
