#include "caputo/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "caputo/corpus.hpp"
#include "caputo/diffusive.hpp"
#include "caputo/error.hpp"
#include "caputo/oracle.hpp"
#include "caputo/quadrature.hpp"

namespace caputo {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class LineError {
 public:
  LineError(std::size_t line, std::string_view key) : line_(line), key_(key) {}

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "line " << line_ << ": " << key_ << ": " << what;
    throw ConfigError(os.str());
  }

 private:
  std::size_t line_;
  std::string key_;
};

double parse_double(std::string_view s, const LineError& where) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) {
    where.fail("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view s, const LineError& where) {
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || v == 0) {
    where.fail("expected a positive integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::size_t> parse_count_list(std::string_view s, const LineError& where) {
  std::vector<std::size_t> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_count(trim(s.substr(0, comma)), where));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] <= out[i - 1]) where.fail("list must be strictly increasing");
  }
  return out;
}

std::size_t parse_rule_size(std::string_view s, const LineError& where) {
  const std::size_t K = parse_count(s, where);
  if (K > QuadratureRule::kMaxNodes) {
    where.fail("must be at most " + std::to_string(QuadratureRule::kMaxNodes));
  }
  return K;
}

GridSpec parse_grid(std::string_view s, const LineError& where) {
  if (s == "uniform") return {};
  constexpr std::string_view prefix = "graded(";
  if (s.substr(0, prefix.size()) == prefix && s.size() > prefix.size() + 1 && s.back() == ')') {
    const double exponent = parse_double(trim(s.substr(prefix.size(), s.size() - prefix.size() - 1)), where);
    if (!(exponent > 0.0)) where.fail("grading exponent must be positive");
    return {true, exponent};
  }
  where.fail("expected 'uniform' or 'graded(<exponent>)', got '" + std::string(s) + "'");
}

[[noreturn]] void missing(std::string_view key, Command command) {
  throw ConfigError("missing required key '" + std::string(key) + "' for command " +
                    std::string(command_name(command)));
}

}  // namespace

std::string_view command_name(Command command) {
  switch (command) {
    case Command::kDerivative: return "derivative";
    case Command::kDecompose: return "decompose";
    case Command::kConvergence: return "convergence";
    case Command::kNodes: return "nodes";
    case Command::kStiffness: return "stiffness";
  }
  return "?";
}

std::string_view method_name(Method method) {
  return method == Method::kBackwardEuler ? "backward-euler" : "trapezoidal";
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::map<std::string, std::size_t> seen;
  bool have_command = false;

  std::istringstream lines{std::string(text)};
  std::string raw;
  std::size_t line_number = 0;
  while (std::getline(lines, raw)) {
    ++line_number;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_number) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const LineError where(line_number, key);
    if (key.empty()) throw ConfigError("line " + std::to_string(line_number) + ": empty key");
    if (value.empty()) where.fail("empty value");
    if (auto [it, inserted] = seen.emplace(key, line_number); !inserted) {
      where.fail("repeated key (first set on line " + std::to_string(it->second) + ")");
    }

    if (key == "command") {
      if (value == "derivative") config.command = Command::kDerivative;
      else if (value == "decompose") config.command = Command::kDecompose;
      else if (value == "convergence") config.command = Command::kConvergence;
      else if (value == "nodes") config.command = Command::kNodes;
      else if (value == "stiffness") config.command = Command::kStiffness;
      else where.fail("unknown command '" + std::string(value) + "'");
      have_command = true;
    } else if (key == "alpha") {
      const double alpha = parse_double(value, where);
      try {
        validate_order(alpha);
      } catch (const InvalidOrder& e) {
        where.fail(e.what());
      }
      config.alpha = alpha;
    } else if (key == "a") {
      config.a = parse_double(value, where);
    } else if (key == "T") {
      config.T = parse_double(value, where);
      if (!(config.T > 0.0)) where.fail("must be positive");
    } else if (key == "N") {
      config.N = parse_count(value, where);
    } else if (key == "N_list") {
      config.N_list = parse_count_list(value, where);
    } else if (key == "K") {
      config.K = parse_rule_size(value, where);
    } else if (key == "K_list") {
      config.K_list = parse_count_list(value, where);
      for (std::size_t K : config.K_list) {
        if (K > QuadratureRule::kMaxNodes) where.fail("entries must be at most " + std::to_string(QuadratureRule::kMaxNodes));
      }
    } else if (key == "K_star") {
      config.K_star = parse_rule_size(value, where);
    } else if (key == "method") {
      if (value == "backward-euler") config.method = Method::kBackwardEuler;
      else if (value == "trapezoidal") config.method = Method::kTrapezoidal;
      else where.fail("expected 'backward-euler' or 'trapezoidal'");
    } else if (key == "grid") {
      config.grid = parse_grid(value, where);
    } else if (key == "function") {
      try {
        corpus_function(std::string(value));
      } catch (const InvalidParameter& e) {
        where.fail(e.what());
      }
      config.function = std::string(value);
    } else if (key == "truth_tol") {
      config.truth_tol = parse_double(value, where);
      if (!(config.truth_tol >= kMinOracleTolerance && config.truth_tol <= 1e-8)) {
        where.fail("must be in [1e-14, 1e-8]");
      }
    } else if (key == "output") {
      config.output = std::string(value);
    } else {
      throw ConfigError("line " + std::to_string(line_number) + ": unknown key '" + key + "'");
    }
  }

  if (!have_command) throw ConfigError("missing required key 'command'");
  const Command c = config.command;
  const bool needs_problem = c == Command::kDerivative || c == Command::kDecompose || c == Command::kConvergence;
  if ((needs_problem || c == Command::kStiffness) && !config.alpha) missing("alpha", c);
  if (needs_problem && !config.function) missing("function", c);
  if ((c == Command::kDerivative || c == Command::kDecompose) && !config.N) missing("N", c);
  if (c != Command::kConvergence && !config.K) missing("K", c);
  if (c == Command::kConvergence) {
    if (config.N_list.empty() == config.K_list.empty()) {
      throw ConfigError("convergence needs exactly one of 'N_list' (with K) or 'K_list'");
    }
    if (!config.N_list.empty() && !config.K) missing("K", c);
    if (config.grid.graded) throw ConfigError("convergence runs on uniform grids only");
  }
  if (config.K_star && (!config.K || *config.K_star > *config.K)) {
    throw ConfigError("K_star must not exceed K");
  }
  return config;
}

}  // namespace caputo
