#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mnl/design.hpp"

namespace mnl {

struct ConfidenceConfig {
  double kappa_alpha = 0.5;
  double delta = 0.05;
  int num_arms = 0;
  int dim = 0;
};

// Confidence width for direction g after t steps:
//   (8 / kappa_alpha) * sqrt(d + log(3 N^2 t^2 / delta)) * ||g||_{V^{-1}}.
// Natural logarithm; requires t >= 1.
double width(const ConfidenceConfig& cfg, long t, const DesignState& state,
             const Eigen::VectorXd& g);

// Returns the lowest index i in `active_arms` with
//   width(a_i - a_j) <= <theta_hat, a_i - a_j>  for every j in `active_arms`,
// or nullopt when no arm qualifies. A single active arm qualifies vacuously.
std::optional<int> stopping_check(const ConfidenceConfig& cfg, long t,
                                  const DesignState& state, const Eigen::VectorXd& theta_hat,
                                  const std::vector<int>& active_arms,
                                  const Eigen::MatrixXd& arms);

// True iff some k in `active_arms`, k != i, certifies arm i sub-optimal:
// width(a_k - a_i) <= <theta_hat, a_k - a_i>.
bool dominated(const ConfidenceConfig& cfg, long t, const DesignState& state,
               const Eigen::VectorXd& theta_hat, int i, const std::vector<int>& active_arms,
               const Eigen::MatrixXd& arms);

}  // namespace mnl
