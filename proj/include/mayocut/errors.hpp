#pragma once

#include <stdexcept>
#include <string>

namespace mayocut {

// Invalid geometric or measure input: zero normal, dimension mismatch,
// nonpositive mass, malformed preconditions.
struct invalid_input : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A configured cap or retry budget was exhausted. The message carries the
// diagnostics (what was tried, how close the nearest miss came).
struct limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Textual input could not be parsed. line/column are 1-based; zero means
// the position is unknown (e.g. a schema-level problem).
struct parse_error : std::runtime_error {
  parse_error(std::string file_, int line_, int column_, const std::string& what_)
      : std::runtime_error(format(file_, line_, column_, what_)),
        file(std::move(file_)),
        line(line_),
        column(column_) {}

  static std::string format(const std::string& file, int line, int column, const std::string& what) {
    if (line <= 0) return file + ": " + what;
    return file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what;
  }

  std::string file;
  int line = 0;
  int column = 0;
};

}  // namespace mayocut
