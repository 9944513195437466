#pragma once

#include <stdexcept>
#include <string>

namespace bnmap {

// Malformed input: bad files, inconsistent networks, invalid queries.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

// A computation would exceed a configured size guard (cell budget, enumeration cap).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bnmap
