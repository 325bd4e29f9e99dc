#include "caputo/quadrature.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "caputo/error.hpp"

namespace caputo {

namespace {

constexpr double kNodeTolerance = 1e-14;
constexpr int kMaxNewtonIterations = 100;

// L_K(x) and L_{K-1}(x) from the three-term recurrence, rescaled on the fly
// so that large nodes at large K cannot overflow. The true values are
// exp(log_scale) times the returned ones.
struct LaguerrePair {
  double current;
  double previous;
  double log_scale;
};

LaguerrePair laguerre_pair(std::size_t K, double x) {
  constexpr double kBig = 1e150;
  double prev = 1.0;
  double cur = 1.0 - x;
  double log_scale = 0.0;
  for (std::size_t j = 1; j < K; ++j) {
    const double jd = static_cast<double>(j);
    const double next = ((2.0 * jd + 1.0 - x) * cur - jd * prev) / (jd + 1.0);
    prev = cur;
    cur = next;
    if (std::abs(cur) > kBig) {
      cur /= kBig;
      prev /= kBig;
      log_scale += std::log(kBig);
    }
  }
  if (K == 0) return {1.0, 0.0, 0.0};
  return {cur, prev, log_scale};
}

double initial_guess(std::size_t i, std::size_t K, const std::vector<double>& found) {
  const double n = static_cast<double>(K);
  if (i == 0) return 3.0 / (1.0 + 2.4 * n);
  if (i == 1) return found[0] + 15.0 / (1.0 + 2.5 * n);
  const double ai = static_cast<double>(i - 1);
  return found[i - 1] + (1.0 + 2.55 * ai) / (1.9 * ai) * (found[i - 1] - found[i - 2]);
}

}  // namespace

QuadratureRule::QuadratureRule(std::vector<double> nodes, std::vector<double> log_weights)
    : nodes_(std::move(nodes)), log_weights_(std::move(log_weights)), parent_size_(nodes_.size()) {
  if (nodes_.empty() || nodes_.size() != log_weights_.size()) {
    throw InvalidParameter("quadrature rule needs equally many nodes and weights, at least one");
  }
}

double QuadratureRule::weight(std::size_t k) const { return std::exp(log_weights_[k]); }

std::vector<double> QuadratureRule::weights() const {
  std::vector<double> w(size());
  for (std::size_t k = 0; k < size(); ++k) w[k] = weight(k);
  return w;
}

QuadratureRule gauss_laguerre_rule(std::size_t K) {
  if (K == 0 || K > QuadratureRule::kMaxNodes) {
    throw InvalidParameter("Gauss-Laguerre rule size must be in [1, " +
                           std::to_string(QuadratureRule::kMaxNodes) + "], got " + std::to_string(K));
  }
  const double n = static_cast<double>(K);
  std::vector<double> nodes;
  std::vector<double> log_weights;
  nodes.reserve(K);
  log_weights.reserve(K);

  for (std::size_t i = 0; i < K; ++i) {
    double x = initial_guess(i, K, nodes);
    double step = 0.0;
    for (int it = 0; it < kMaxNewtonIterations; ++it) {
      const LaguerrePair p = laguerre_pair(K, x);
      const double derivative = n * (p.current - p.previous) / x;
      step = p.current / derivative;
      x -= step;
      if (std::abs(step) <= kNodeTolerance * x) break;
    }
    // Stagnation at the rounding level of the recurrence is acceptable.
    if (!(x > 0.0) || !(std::abs(step) <= 1e-10 * x) || (i > 0 && !(x > nodes.back()))) {
      throw Error("Gauss-Laguerre Newton iteration failed for node " + std::to_string(i + 1) +
                  " of " + std::to_string(K));
    }
    const LaguerrePair p = laguerre_pair(K, x);
    const double derivative = n * (p.current - p.previous) / x;
    nodes.push_back(x);
    log_weights.push_back(-std::log(x) - 2.0 * (std::log(std::abs(derivative)) + p.log_scale));
  }
  return QuadratureRule(std::move(nodes), std::move(log_weights));
}

QuadratureRule truncate_rule(const QuadratureRule& rule, std::size_t K_star) {
  if (K_star == 0 || K_star > rule.size()) {
    throw InvalidParameter("truncation size must be in [1, " + std::to_string(rule.size()) +
                           "], got " + std::to_string(K_star));
  }
  const auto nodes_end = rule.nodes().begin() + static_cast<std::ptrdiff_t>(K_star);
  const auto weights_end = rule.log_weights().begin() + static_cast<std::ptrdiff_t>(K_star);
  QuadratureRule out(std::vector<double>(rule.nodes().begin(), nodes_end),
                     std::vector<double>(rule.log_weights().begin(), weights_end));
  out.parent_size_ = rule.parent_size();
  return out;
}

std::vector<std::string> check_rule(const QuadratureRule& rule, double sum_tol) {
  std::vector<std::string> problems;
  const auto& x = rule.nodes();
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0)) problems.push_back("node " + std::to_string(k + 1) + " not positive");
    if (k > 0 && !(x[k] > x[k - 1])) {
      problems.push_back("nodes not strictly increasing at " + std::to_string(k + 1));
    }
    if (!std::isfinite(rule.log_weight(k))) {
      problems.push_back("weight " + std::to_string(k + 1) + " not positive");
    }
  }
  const double bound = 4.0 * static_cast<double>(rule.parent_size()) + 2.0;
  if (!(rule.largest_node() < bound)) {
    std::ostringstream os;
    os << "largest node " << rule.largest_node() << " violates bound " << bound;
    problems.push_back(os.str());
  }
  const auto w = rule.weights();
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (rule.truncated()) {
    if (sum > 1.0 + sum_tol) problems.push_back("truncated weight sum exceeds 1");
  } else if (std::abs(sum - 1.0) > sum_tol) {
    std::ostringstream os;
    os << "weight sum " << sum << " differs from 1 by more than " << sum_tol;
    problems.push_back(os.str());
  }
  return problems;
}

}  // namespace caputo
