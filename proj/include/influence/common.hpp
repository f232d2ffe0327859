#pragma once
// Shared error taxonomy. Callers (and the CLI exit-code mapping) rely on the
// distinction between malformed data and numerically degenerate requests.

#include <charconv>
#include <stdexcept>
#include <string>

namespace influence {

// Unreadable or malformed input: missing files, bad cells, schema mismatches,
// out-of-domain values arriving from data.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Statistically degenerate request: constant response, single-class labels,
// zero-denominator rates, constant columns offered for discretization.
class DegenerateError : public std::runtime_error {
 public:
  explicit DegenerateError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

// Shortest round-trip decimal form, used everywhere a double is printed so
// that artifacts are byte-stable across reruns.
inline std::string fmt_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace detail
}  // namespace influence
