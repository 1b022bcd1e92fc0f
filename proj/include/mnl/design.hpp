#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "mnl/model.hpp"
#include "mnl/rng.hpp"

namespace mnl {

// Pairwise difference directions over an active arm set. Pairs are stored
// with i < j; the quadratic forms below are sign-symmetric so one orientation
// suffices.
struct GapSet {
  std::vector<std::pair<int, int>> pairs;

  static GapSet over(const std::vector<int>& active_arms);
  bool empty() const { return pairs.empty(); }
};

// Accumulated information matrix V = sum_s X^(s) X^(s)' + ridge * I together
// with its inverse, maintained by rank-one Sherman-Morrison updates and
// refreshed from a dense factorization every `kRefreshInterval` rank-one
// updates. Single-owner mutable; copy freely for trial evaluations.
class DesignState {
 public:
  static constexpr long kRefreshInterval = 1000;

  DesignState(int dim, double ridge);

  // V += sum_k x_k x_k'; t += 1.
  void add_action(const Eigen::MatrixXd& arms, const SubsetAction& action);

  // g' V^{-1} g (the squared norm; callers take square roots).
  double mahalanobis(const Eigen::VectorXd& g) const;

  const Eigen::MatrixXd& V() const { return v_; }
  const Eigen::MatrixXd& V_inv() const { return v_inv_; }
  long t() const { return t_; }
  int dim() const { return dim_; }
  double ridge() const { return ridge_; }
  long rank_one_updates() const { return updates_; }

 private:
  void rank_one(const Eigen::VectorXd& x);
  void refresh_inverse();

  int dim_;
  double ridge_;
  long t_ = 0;
  long updates_ = 0;
  Eigen::MatrixXd v_;
  Eigen::MatrixXd v_inv_;
};

// max over gap vectors a_i - a_j in `gaps` of the squared V^{-1} norm.
double rho(const DesignState& state, const GapSet& gaps, const Eigen::MatrixXd& arms);

// One-step greedy subset choice: per slot, the arm minimizing the post-update
// worst-case gap norm max_g g'(V + aa')^{-1} g, evaluated through the
// Sherman-Morrison identity without forming trial inverses. Near-ties on the
// worst case resolve by the total over gaps, then by lowest arm index; the
// worst case alone is frequently tied exactly and index tie-breaking then
// starves whole directions. If all K slots land on one arm, the last slot is
// replaced by its second-best candidate. Does not mutate `state`.
SubsetAction greedy_select_subset(const DesignState& state, const Eigen::MatrixXd& arms,
                                  const GapSet& gaps, int subset_size);

// Variant that scores single-arm directions ||a||^2 over the arm set instead
// of gap directions.
SubsetAction greedy_select_subset_alt(const DesignState& state, const Eigen::MatrixXd& arms,
                                      int subset_size);

// K indices drawn independently uniformly from [0, N); resampled wholesale
// while all identical.
SubsetAction random_action(int num_arms, int subset_size, Rng& rng);

}  // namespace mnl
