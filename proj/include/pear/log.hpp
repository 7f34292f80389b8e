// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <spdlog/spdlog.h>

namespace pear {

// Configures the default logger from PEAR_LOG_LEVEL (error, info, debug).
// Unset means info. Returns false if the variable holds an unknown value.
bool init_logging();

}  // namespace pear
