#pragma once

#include <stdexcept>
#include <string>

namespace treefactor {

// thrown when an exact computation would exceed a configured size cap;
// the message names the offending stage so callers can switch strategy
struct resource_limit_error : std::runtime_error {
  explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// thrown when a (polynomial, t) pair falls outside the supported model table
struct unsupported_condition_error : std::runtime_error {
  explicit unsupported_condition_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace treefactor
