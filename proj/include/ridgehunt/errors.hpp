#pragma once

#include <stdexcept>
#include <string>

namespace ridgehunt {

// Error categories map onto the CLI exit codes: io_error -> 2,
// numeric_error -> 3, config_error -> 4.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

class config_error : public std::invalid_argument {
 public:
  explicit config_error(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace ridgehunt
