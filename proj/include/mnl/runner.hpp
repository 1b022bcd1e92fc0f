#pragma once

#include <cstdint>
#include <vector>

#include "mnl/confidence.hpp"
#include "mnl/design.hpp"
#include "mnl/estimator.hpp"
#include "mnl/model.hpp"

namespace mnl {

enum class SelectionRule { GapGreedy, ArmGreedy, Random };
enum class FeedbackModel { Mnl, GaussianRum };

struct RunConfig {
  int explore_steps = 5;        // t'
  double lambda = 1e-4;         // MLE regularization
  double ridge = 1e-4;          // design ridge
  double kappa_alpha = 0.5;
  double batch_alpha = 0.25;    // adaptive batch-shrink factor, in (0,1)
  std::uint64_t max_steps = 5'000'000;
  SelectionRule selection_rule = SelectionRule::GapGreedy;
  FeedbackModel feedback = FeedbackModel::Mnl;
  double rum_sigma = 1.0;
  bool record_trajectory = false;
  double mle_tol = 1e-8;
  int mle_max_iter = 100;

  void validate() const;
};

struct BatchRecord {
  int index = 0;              // j
  long length = 0;            // n_j
  double rho_final = 0.0;     // rho_j at batch end
  std::vector<int> survivors; // active arms after elimination
};

struct RunResult {
  int returned_arm = -1;
  std::uint64_t tau = 0;
  std::vector<std::uint64_t> pull_counts;  // per arm, each slot occurrence counts once
  bool correct = false;
  bool truncated = false;
  std::vector<BatchRecord> batches;        // adaptive only
  std::vector<int> trajectory;             // per-step incumbent, if recorded
  Estimate final_estimate;
};

// Static allocation: t' random exploration steps, then per step a greedy
// subset for the full gap set, an environment sample, a design update, an MLE
// refit and a stopping check. Honors cfg.selection_rule.
RunResult run_static(const Instance& instance, const RunConfig& cfg, Rng& rng);

// Batch-adaptive allocation: static allocation within batches restricted to
// the survivors' gap set, dominated-arm elimination between batches, data
// discarded at batch boundaries.
RunResult run_adaptive(const Instance& instance, const RunConfig& cfg, Rng& rng);

// Random allocation with the same estimator and stopping rule as run_static.
RunResult run_random(const Instance& instance, const RunConfig& cfg, Rng& rng);

// K=2 reduction to a pairwise generalized linear model: pair arms
// b_ij = a_i - a_j for i != j; playing {a_i, a_j} and reporting whether a_i
// won realizes a Bernoulli with success probability sigmoid(<theta, b_ij>).
class GlmPairReduction {
 public:
  struct Pair {
    int i;
    int j;
  };

  explicit GlmPairReduction(const Instance& instance);

  const std::vector<Pair>& pairs() const { return pairs_; }
  Eigen::VectorXd pair_feature(std::size_t p) const;
  SubsetAction action_for(std::size_t p) const;
  double success_probability(std::size_t p, const Eigen::VectorXd& theta) const;
  // Maps the MNL winner of action_for(p) to the binary GLM outcome.
  static int outcome_from_winner(int winner_local) { return winner_local == 0 ? 1 : 0; }

 private:
  const Instance& instance_;
  std::vector<Pair> pairs_;
};

}  // namespace mnl
