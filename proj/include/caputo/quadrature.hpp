#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace caputo {

/// K-point Gauss-Laguerre rule for the weight e^{-w} on [0, inf).
///
/// Weights are held as natural logarithms: for K beyond ~60 the weights of
/// the outer nodes underflow while e^{x_k} overflows, and only their product
/// a_k e^{x_k} = exp(log_weight + node) is needed by the evaluation scheme.
class QuadratureRule {
 public:
  static constexpr std::size_t kMaxNodes = 256;

  QuadratureRule(std::vector<double> nodes, std::vector<double> log_weights);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& log_weights() const { return log_weights_; }

  double node(std::size_t k) const { return nodes_[k]; }
  double log_weight(std::size_t k) const { return log_weights_[k]; }
  double weight(std::size_t k) const;
  std::vector<double> weights() const;
  double largest_node() const { return nodes_.back(); }

  /// Node count of the rule this one was truncated from (size() if it was
  /// generated directly).
  std::size_t parent_size() const { return parent_size_; }
  bool truncated() const { return parent_size_ != nodes_.size(); }

  friend bool operator==(const QuadratureRule&, const QuadratureRule&) = default;

 private:
  friend QuadratureRule truncate_rule(const QuadratureRule&, std::size_t);

  std::vector<double> nodes_;
  std::vector<double> log_weights_;
  std::size_t parent_size_;
};

/// Nodes by Newton iteration on the three-term Laguerre recurrence; weights
/// from 1 / (x_k [L_K'(x_k)]^2), evaluated in log form. Throws
/// InvalidParameter unless 1 <= K <= QuadratureRule::kMaxNodes.
QuadratureRule gauss_laguerre_rule(std::size_t K);

/// The first K_star nodes and weights of `rule`.
QuadratureRule truncate_rule(const QuadratureRule& rule, std::size_t K_star);

/// Violations of the rule invariants (ordering, positivity, the 4K + 2
/// bound on the largest node, unit weight sum within `sum_tol`). Empty when
/// the rule is valid. Truncated rules are held to the node bound of their
/// parent and to a weight sum of at most one.
std::vector<std::string> check_rule(const QuadratureRule& rule, double sum_tol = 1e-12);

}  // namespace caputo
