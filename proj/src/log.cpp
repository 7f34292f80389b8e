// SPDX-License-Identifier: Apache-2.0
#include "pear/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>

#include <cstdlib>
#include <string_view>

namespace pear {

bool init_logging() {
  auto logger = spdlog::stderr_color_mt("pear");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);

  const char* env = std::getenv("PEAR_LOG_LEVEL");
  const std::string_view level = env ? env : "info";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::info);
    return false;
  }
  return true;
}

}  // namespace pear
