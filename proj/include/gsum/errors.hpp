#pragma once

#include <stdexcept>
#include <string>

namespace gsum {

// Raised when a node system has no root inside the admissible box.
class NoSolution : public std::runtime_error {
 public:
  explicit NoSolution(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace gsum
