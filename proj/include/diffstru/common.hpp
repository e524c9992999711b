#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace diffstru {

using Matrix = Eigen::MatrixXd;
using IntMatrix = Eigen::MatrixXi;
using Vector = Eigen::VectorXd;

// Exit codes used by the CLI: 2 config, 3 data, 4 numeric.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string shape_str(long rows, long cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace diffstru
