#pragma once

#include <stdexcept>

namespace cbwk {

// Malformed text input (config files, instance files, CSV).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem-level failure (file missing, unwritable path).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cbwk
