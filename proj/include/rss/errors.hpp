#pragma once

#include <stdexcept>
#include <string>

namespace rss {

// Contract violations (bad arguments, infeasible inputs). CLI exit code 2.
struct contract_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Filesystem / parse-level failures. CLI exit code 3.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The exact oracle refuses instances beyond its enumeration cap. CLI exit code 4.
struct enumeration_cap_error : std::runtime_error {
  enumeration_cap_error(const std::string& msg, double required)
      : std::runtime_error(msg), required_combinations(required) {}
  double required_combinations;
};

}  // namespace rss
