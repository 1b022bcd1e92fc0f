#include "mnl/confidence.hpp"

#include <cmath>

#include "mnl/errors.hpp"

namespace mnl {

namespace {

double width_multiplier(const ConfidenceConfig& cfg, long t) {
  if (t < 1) throw InvalidInput("width requires t >= 1");
  if (!(cfg.kappa_alpha > 0.0)) throw InvalidInput("kappa_alpha must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
  const double n = static_cast<double>(cfg.num_arms);
  const double tt = static_cast<double>(t);
  const double log_term = std::log(3.0 * n * n * tt * tt / cfg.delta);
  return (8.0 / cfg.kappa_alpha) * std::sqrt(static_cast<double>(cfg.dim) + log_term);
}

double pair_width(const Eigen::MatrixXd& gram, double mult, int i, int j) {
  const double sq = gram(i, i) + gram(j, j) - 2.0 * gram(i, j);
  return mult * std::sqrt(std::max(0.0, sq));
}

}  // namespace

double width(const ConfidenceConfig& cfg, long t, const DesignState& state,
             const Eigen::VectorXd& g) {
  return width_multiplier(cfg, t) * std::sqrt(std::max(0.0, state.mahalanobis(g)));
}

std::optional<int> stopping_check(const ConfidenceConfig& cfg, long t,
                                  const DesignState& state, const Eigen::VectorXd& theta_hat,
                                  const std::vector<int>& active_arms,
                                  const Eigen::MatrixXd& arms) {
  const double mult = width_multiplier(cfg, t);
  const Eigen::MatrixXd gram = arms * state.V_inv() * arms.transpose();
  const Eigen::VectorXd utilities = arms * theta_hat;
  for (int i : active_arms) {
    bool certified = true;
    for (int j : active_arms) {
      if (j == i) continue;
      if (!(pair_width(gram, mult, i, j) <= utilities[i] - utilities[j])) {
        certified = false;
        break;
      }
    }
    if (certified) return i;
  }
  return std::nullopt;
}

bool dominated(const ConfidenceConfig& cfg, long t, const DesignState& state,
               const Eigen::VectorXd& theta_hat, int i, const std::vector<int>& active_arms,
               const Eigen::MatrixXd& arms) {
  const double mult = width_multiplier(cfg, t);
  const Eigen::MatrixXd gram = arms * state.V_inv() * arms.transpose();
  const Eigen::VectorXd utilities = arms * theta_hat;
  for (int k : active_arms) {
    if (k == i) continue;
    if (pair_width(gram, mult, k, i) <= utilities[k] - utilities[i]) return true;
  }
  return false;
}

}  // namespace mnl
