#pragma once

#include <stdexcept>
#include <string>

namespace gearsieve {

// Domain violations (bad n, even m0, inadmissible tuple, ...) are reported as
// std::domain_error / std::invalid_argument. The two types below exist so the
// CLI can map them onto distinct exit codes.

/// An exact identity or cross-check between two computation routes failed.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Reading or writing an output file failed; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gearsieve
