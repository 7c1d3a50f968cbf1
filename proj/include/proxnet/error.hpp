#pragma once

#include <stdexcept>
#include <string>

namespace proxnet {

// Error classes map 1:1 to CLI exit codes (see cli.cpp).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Inconsistent inputs (e.g. a detection without a matching scan count).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Undefined statistic (zero margin, constant matrix, empty roster...).
struct StatsError : std::runtime_error {
  explicit StatsError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace proxnet
