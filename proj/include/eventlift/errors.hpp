#pragma once

#include <stdexcept>
#include <string>

namespace eventlift {

// Error taxonomy. The CLI maps these onto process exit codes:
// validation/format/io -> 2, data availability -> 3, numeric failure -> 4.

class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested dates/windows not covered by the available series.
class data_availability_error : public std::runtime_error {
 public:
  explicit data_availability_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical collapse (non-positive prediction variance, failed fit, ...).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace eventlift
