#include "caputo/runner.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "caputo/analysis.hpp"
#include "caputo/corpus.hpp"
#include "caputo/error.hpp"
#include "caputo/oracle.hpp"
#include "caputo/quadrature.hpp"

namespace caputo {

namespace {

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << field(fields), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string field(double v) {
    if (!std::isfinite(v)) throw EvaluationError("non-finite value in output", std::nan(""));
    return format_number(v);
  }
  static std::string field(std::size_t v) { return std::to_string(v); }
  static std::string field(const std::string& v) { return v; }
  static std::string field(const char* v) { return v; }

  std::ostream& out_;
};

TimeGrid make_grid(const RunConfig& config) {
  return config.grid.graded ? TimeGrid::graded(config.a, config.T, *config.N, config.grid.exponent)
                            : TimeGrid::uniform(config.a, config.T, *config.N);
}

void run_nodes(const RunConfig& config, CsvWriter& csv) {
  const QuadratureRule rule = gauss_laguerre_rule(*config.K);
  csv.row("k", "node", "weight");
  for (std::size_t k = 0; k < rule.size(); ++k) csv.row(k + 1, rule.node(k), rule.weight(k));
}

void run_stiffness(const RunConfig& config, CsvWriter& csv) {
  // Only alpha enters the node sets; the forcing is irrelevant here.
  const DerivativeProblem problem(*config.alpha, config.a, config.T, [](double) { return 0.0; });
  const DiffusiveSystem system = build_system(problem, gauss_laguerre_rule(*config.K));
  const StiffnessReport report = stiffness_report(system);
  csv.row("k", "w", "log10_lipschitz");
  for (std::size_t i = 0; i < report.exponents.size(); ++i) {
    csv.row(i + 1, report.exponents[i], report.log10_lipschitz[i]);
  }
}

void run_derivative(const RunConfig& config, CsvWriter& csv) {
  const TestFunction& f = corpus_function(*config.function);
  const DerivativeProblem problem = f.problem(*config.alpha, config.a, config.T);
  const TimeGrid grid = make_grid(config);
  const std::vector<double> values =
      evaluate_derivative(problem, gauss_laguerre_rule(*config.K), grid, config.method, config.K_star);
  csv.row("n", "t", "value", "exact", "abs_err");
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const std::optional<double> exact = f.exact_caputo(*config.alpha, grid[n] - config.a);
    if (exact) {
      csv.row(n, grid[n], values[n], *exact, std::abs(*exact - values[n]));
    } else {
      csv.row(n, grid[n], values[n], "", "");
    }
  }
}

void run_decompose(const RunConfig& config, CsvWriter& csv) {
  const TestFunction& f = corpus_function(*config.function);
  const DerivativeProblem problem = f.problem(*config.alpha, config.a, config.T);
  const auto rows = decompose_error(problem, gauss_laguerre_rule(*config.K), make_grid(config), config.method,
                                    config.truth_tol, config.K_star);
  csv.row("n", "t", "r_total", "r_q", "r_ode");
  for (const ErrorDecomposition& r : rows) csv.row(r.n, r.t, r.r_total, r.r_q, r.r_ode);
}

std::string summary(const RateFit& fit) { return "slope=" + format_number(fit.slope); }
std::string summary_r2(const RateFit& fit) { return "r2=" + format_number(fit.r2); }

void run_convergence(const RunConfig& config, CsvWriter& csv) {
  const TestFunction& f = corpus_function(*config.function);
  const double alpha = *config.alpha;
  const DerivativeProblem problem = f.problem(alpha, config.a, config.T);
  csv.row("resolution", "max_err");

  if (!config.K_list.empty()) {
    const QuadratureDecay study = quadrature_decay_study(problem, problem.end(), config.K_list, config.truth_tol);
    std::vector<double> xs, errs;
    for (const auto& e : study.entries) {
      csv.row(e.K, e.abs_error);
      xs.push_back(static_cast<double>(e.K));
      errs.push_back(e.abs_error);
    }
    const RateFit fit = fit_rate(xs, errs);
    csv.row(summary(fit), summary_r2(fit));
    return;
  }

  const double tol = config.truth_tol;
  auto truth = [&](double t) {
    const std::optional<double> exact = f.exact_caputo(alpha, t - config.a);
    return exact ? *exact : brute_force_caputo(problem, t, tol);
  };
  const ConvergenceStudy study = convergence_study(problem, gauss_laguerre_rule(*config.K), config.N_list,
                                                   config.method, truth, config.K_star);
  for (std::size_t i = 0; i < study.N.size(); ++i) csv.row(study.N[i], study.max_error[i]);
  csv.row(summary(study.fit), summary_r2(study.fit));
}

}  // namespace

std::string format_number(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  std::string s(buffer, ec == std::errc() ? end : buffer);
  if (std::isfinite(value) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void run(const RunConfig& config, std::ostream& out) {
  // Rendered into a buffer first so a failure part-way leaves no partial CSV.
  std::ostringstream buffer;
  CsvWriter csv(buffer);
  switch (config.command) {
    case Command::kNodes: run_nodes(config, csv); break;
    case Command::kStiffness: run_stiffness(config, csv); break;
    case Command::kDerivative: run_derivative(config, csv); break;
    case Command::kDecompose: run_decompose(config, csv); break;
    case Command::kConvergence: run_convergence(config, csv); break;
  }
  out << buffer.str();
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error) || dynamic_cast<const InvalidParameter*>(&error) ||
      dynamic_cast<const UnsupportedOperation*>(&error)) {
    return kExitConfigError;
  }
  if (dynamic_cast<const OracleFailure*>(&error)) return kExitOracleFailure;
  if (dynamic_cast<const EvaluationError*>(&error) || dynamic_cast<const InsufficientData*>(&error)) {
    return kExitNumericalFailure;
  }
  return kExitFailure;
}

int run_config_text(const std::string& text, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = parse_config(text);
    if (config.output) {
      std::ostringstream buffer;
      run(config, buffer);
      std::ofstream file(*config.output, std::ios::binary | std::ios::trunc);
      if (!file || !(file << buffer.str()) || !file.flush()) {
        err << "error: cannot write " << *config.output << '\n';
        return kExitFailure;
      }
    } else {
      run(config, out);
    }
    return kExitSuccess;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace caputo
