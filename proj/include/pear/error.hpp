// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace pear {

// Invalid user configuration (unknown key, out-of-range value, bad flag).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A required input artifact (checkpoint, config file, fixture) is missing or
// unreadable, or an output location is unwritable.
class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A non-finite value appeared where a finite one is required.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pear
