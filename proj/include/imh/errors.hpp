#pragma once

#include <stdexcept>

namespace imh {

// Bad caller-supplied arguments or configuration. CLI exit code 1.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed input files: wrong magic, truncated payload, ragged rows.
// CLI exit code 2.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File system failures (missing file, write error). CLI exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: NaN gradients, non-finite statistics, failed solves.
// CLI exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace imh
