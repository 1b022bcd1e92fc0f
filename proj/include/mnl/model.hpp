#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mnl/rng.hpp"

namespace mnl {

// One problem instance: N arms in R^d (rows of `arms`), the hidden utility
// parameter, the subset size K and the failure probability delta. The hidden
// parameter is visible to the simulator and the evaluation code only;
// allocation strategies never read it.
struct Instance {
  Eigen::MatrixXd arms;        // N x d, row i = feature vector of arm i
  Eigen::VectorXd theta_star;  // hidden parameter
  int subset_size = 2;         // K
  double delta = 0.05;

  int num_arms() const { return static_cast<int>(arms.rows()); }
  int dim() const { return static_cast<int>(arms.cols()); }
  Eigen::VectorXd arm(int i) const { return arms.row(i).transpose(); }

  // Throws InvalidInput unless all invariants hold: N >= 2, K >= 2,
  // delta in (0,1), every arm norm <= 1 + 1e-12, dimensions consistent,
  // and the best arm under theta_star unique (top-two utilities differ).
  void validate() const;

  static Instance from_json(const std::string& text);
  std::string to_json() const;
};

// K arm indices played in one step. Repeated indices are allowed; the
// all-identical subset is rejected because it carries no information under
// winner-only feedback.
class SubsetAction {
 public:
  SubsetAction(std::vector<int> indices, int num_arms);

  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  int operator[](int k) const { return indices_[static_cast<std::size_t>(k)]; }

 private:
  std::vector<int> indices_;
};

struct FeedbackSample {
  SubsetAction action;
  int winner;  // local index in [0, K)
};

// Append-only log of feedback; the adaptive strategy starts a fresh one per
// batch.
struct History {
  std::vector<FeedbackSample> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  void add(SubsetAction action, int winner);
};

// Winner distribution over the K slots of `action` under parameter `theta`:
// entry i equals exp<theta, x_i> / sum_j exp<theta, x_j>, computed with
// max-utility subtraction. Entries are strictly positive and sum to one.
Eigen::VectorXd mnl_probs(const Eigen::MatrixXd& arms, const Eigen::VectorXd& theta,
                          const SubsetAction& action);

// Draws a local winner index from a simplex point. Throws InvalidInput if the
// entries do not sum to 1 within 1e-9 or leave [0,1].
int sample_winner(const Eigen::VectorXd& probs, Rng& rng);

// Gaussian random-utility winner: argmax_i <theta, x_i> + eta_i with
// eta_i ~ N(0, sigma^2) i.i.d.; ties broken by lowest local index.
int sample_rum_winner(const Eigen::MatrixXd& arms, const Eigen::VectorXd& theta,
                      double sigma, const SubsetAction& action, Rng& rng);

// Index of the arm maximizing <theta_star, a_i>; lowest index on exact ties
// (excluded by the instance invariant but handled deterministically).
int best_arm(const Instance& instance);

}  // namespace mnl
