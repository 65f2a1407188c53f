#pragma once

#include <stdexcept>
#include <string>

namespace specpart {

/// Input exceeds a hard enumeration / size cap (exit code 4 in the CLI).
class capacity_error : public std::runtime_error {
public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed external input; carries the 1-based line number when known.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, long line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  long line() const { return line_; }

private:
  long line_;
};

}  // namespace specpart
