#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "caputo/steppers.hpp"

namespace caputo {

enum class Command { kDerivative, kDecompose, kConvergence, kNodes, kStiffness };

struct GridSpec {
  bool graded = false;
  /// t_n = a + T (n / N)^exponent when graded.
  double exponent = 1.0;
};

/// One experiment, parsed from a `key = value` file.
struct RunConfig {
  Command command = Command::kNodes;
  std::optional<double> alpha;
  double a = 0.0;
  double T = 1.0;
  std::optional<std::size_t> N;
  std::vector<std::size_t> N_list;
  std::optional<std::size_t> K;
  std::vector<std::size_t> K_list;
  std::optional<std::size_t> K_star;
  Method method = Method::kBackwardEuler;
  GridSpec grid;
  std::optional<std::string> function;
  double truth_tol = 1e-9;
  std::optional<std::string> output;
};

/// Parses and validates a config. One `key = value` per line, `#` starts a
/// comment, blank lines are ignored. Unknown or repeated keys, malformed
/// values and missing required keys throw ConfigError naming the line or
/// key.
RunConfig parse_config(std::string_view text);

std::string_view command_name(Command command);
std::string_view method_name(Method method);

}  // namespace caputo
