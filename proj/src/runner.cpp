#include "mnl/runner.hpp"

#include <algorithm>
#include <cmath>

#include "mnl/errors.hpp"

namespace mnl {

void RunConfig::validate() const {
  if (explore_steps < 1) throw InvalidInput("explore_steps must be >= 1");
  if (!(lambda >= 0.0)) throw InvalidInput("lambda must be >= 0");
  if (!(ridge > 0.0)) throw InvalidInput("ridge must be positive");
  if (!(kappa_alpha > 0.0)) throw InvalidInput("kappa_alpha must be positive");
  if (!(batch_alpha > 0.0 && batch_alpha < 1.0)) throw InvalidInput("batch_alpha must lie in (0, 1)");
  if (max_steps < static_cast<std::uint64_t>(explore_steps))
    throw InvalidInput("max_steps must cover the exploration phase");
  if (feedback == FeedbackModel::GaussianRum && !(rum_sigma > 0.0))
    throw InvalidInput("rum_sigma must be positive");
}

namespace {

int argmax_utility(const Eigen::MatrixXd& arms, const Eigen::VectorXd& theta,
                   const std::vector<int>& candidates) {
  int best = candidates.front();
  double best_value = arms.row(best).dot(theta);
  for (int i : candidates) {
    const double value = arms.row(i).dot(theta);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  return best;
}

// Shared per-run machinery: environment sampling, bookkeeping, refits. The
// fitted parameter lives in `theta` and is refit in place with a persistent
// workspace; every step refits, so the buffers must not churn.
struct RunLoop {
  const Instance& instance;
  const RunConfig& cfg;
  Rng& rng;
  std::vector<int> all_arms;
  std::vector<std::uint64_t> pulls;
  std::vector<int> trajectory;
  std::uint64_t total_steps = 0;
  Eigen::VectorXd theta;
  FitWorkspace fit_ws;
  FitStatus fit_status;

  RunLoop(const Instance& inst, const RunConfig& c, Rng& r)
      : instance(inst), cfg(c), rng(r), pulls(static_cast<std::size_t>(inst.num_arms()), 0),
        theta(Eigen::VectorXd::Zero(inst.dim())) {
    all_arms.resize(static_cast<std::size_t>(inst.num_arms()));
    for (int i = 0; i < inst.num_arms(); ++i) all_arms[static_cast<std::size_t>(i)] = i;
  }

  int sample_feedback(const SubsetAction& action) {
    if (cfg.feedback == FeedbackModel::GaussianRum)
      return sample_rum_winner(instance.arms, instance.theta_star, cfg.rum_sigma, action, rng);
    return sample_winner(mnl_probs(instance.arms, instance.theta_star, action), rng);
  }

  // Plays one action: samples a winner, updates stats/design/pull counts.
  void play(const SubsetAction& action, SuffStats& stats, DesignState& state) {
    const int winner = sample_feedback(action);
    stats.add(instance.arms, action, winner);
    state.add_action(instance.arms, action);
    for (int k = 0; k < action.size(); ++k) ++pulls[static_cast<std::size_t>(action[k])];
    ++total_steps;
  }

  // Warm-started refit of theta on the given statistics.
  void refit(const SuffStats& stats) {
    fit_status = fit_mle_inplace(stats, cfg.lambda, cfg.mle_tol, cfg.mle_max_iter, theta,
                                 fit_ws, nullptr);
  }

  void record_incumbent() {
    if (cfg.record_trajectory)
      trajectory.push_back(argmax_utility(instance.arms, theta, all_arms));
  }

  RunResult finish(int arm, bool truncated, std::vector<BatchRecord> batches) {
    RunResult out;
    out.returned_arm = arm;
    out.tau = total_steps;
    out.pull_counts = std::move(pulls);
    out.correct = arm == best_arm(instance);
    out.truncated = truncated;
    out.batches = std::move(batches);
    out.trajectory = std::move(trajectory);
    out.final_estimate.theta_hat = theta;
    out.final_estimate.grad_norm = fit_status.grad_norm;
    out.final_estimate.iterations = fit_status.iterations;
    out.final_estimate.converged = fit_status.converged;
    return out;
  }
};

RunResult run_static_like(const Instance& instance, const RunConfig& cfg, Rng& rng,
                          SelectionRule rule) {
  instance.validate();
  cfg.validate();
  const int n = instance.num_arms();
  const int d = instance.dim();
  const int k = instance.subset_size;

  RunLoop loop(instance, cfg, rng);
  DesignState state(d, cfg.ridge);
  SuffStats stats(d);
  const GapSet gaps = GapSet::over(loop.all_arms);
  const ConfidenceConfig conf{cfg.kappa_alpha, instance.delta, n, d};

  for (int s = 0; s < cfg.explore_steps; ++s) {
    loop.play(random_action(n, k, rng), stats, state);
    if (cfg.record_trajectory) {
      loop.refit(stats);
      loop.record_incumbent();
    }
  }
  loop.refit(stats);

  for (;;) {
    const auto winner =
        stopping_check(conf, state.t(), state, loop.theta, loop.all_arms, instance.arms);
    if (winner) return loop.finish(*winner, false, {});
    if (loop.total_steps >= cfg.max_steps) {
      const int incumbent = argmax_utility(instance.arms, loop.theta, loop.all_arms);
      return loop.finish(incumbent, true, {});
    }

    SubsetAction action = [&] {
      switch (rule) {
        case SelectionRule::GapGreedy:
          return greedy_select_subset(state, instance.arms, gaps, k);
        case SelectionRule::ArmGreedy:
          return greedy_select_subset_alt(state, instance.arms, k);
        case SelectionRule::Random:
          return random_action(n, k, rng);
      }
      throw InternalError("unknown selection rule");
    }();
    loop.play(action, stats, state);
    loop.refit(stats);
    loop.record_incumbent();
  }
}

}  // namespace

RunResult run_static(const Instance& instance, const RunConfig& cfg, Rng& rng) {
  return run_static_like(instance, cfg, rng, cfg.selection_rule);
}

RunResult run_random(const Instance& instance, const RunConfig& cfg, Rng& rng) {
  return run_static_like(instance, cfg, rng, SelectionRule::Random);
}

RunResult run_adaptive(const Instance& instance, const RunConfig& cfg, Rng& rng) {
  instance.validate();
  cfg.validate();
  const int n = instance.num_arms();
  const int d = instance.dim();
  const int k = instance.subset_size;

  RunLoop loop(instance, cfg, rng);
  const ConfidenceConfig conf{cfg.kappa_alpha, instance.delta, n, d};

  std::vector<int> survivors = loop.all_arms;
  std::vector<BatchRecord> batches;
  double rho_prev = 1.0;                                 // rho_0
  double n_prev = static_cast<double>(d * (d + 1) + 1);  // n_0

  for (int batch_index = 1; survivors.size() > 1; ++batch_index) {
    DesignState state(d, cfg.ridge);
    SuffStats stats(d);
    const GapSet gaps = GapSet::over(survivors);

    auto truncated_result = [&]() {
      // stats can be empty when truncation hits before this batch's first
      // play; theta then still holds the previous batch's estimate.
      if (!stats.empty()) loop.refit(stats);
      const int incumbent = argmax_utility(instance.arms, loop.theta, survivors);
      return loop.finish(incumbent, true, std::move(batches));
    };

    for (int s = 0; s < cfg.explore_steps; ++s) {
      if (loop.total_steps >= cfg.max_steps) return truncated_result();
      loop.play(random_action(n, k, rng), stats, state);
      if (cfg.record_trajectory) {
        loop.refit(stats);
        loop.record_incumbent();
      }
    }

    // The batch-length rule rho_j / t >= alpha * rho_{j-1} / n_{j-1} is
    // checked only for t > t'; rho_j is recomputed after every step.
    double rho_j;
    do {
      if (loop.total_steps >= cfg.max_steps) return truncated_result();
      loop.play(greedy_select_subset(state, instance.arms, gaps, k), stats, state);
      rho_j = rho(state, gaps, instance.arms);
      if (cfg.record_trajectory) {
        loop.refit(stats);
        loop.record_incumbent();
      }
    } while (rho_j / static_cast<double>(state.t()) >= cfg.batch_alpha * rho_prev / n_prev);

    const long batch_length = state.t();
    loop.refit(stats);

    std::vector<int> next_survivors;
    for (int i : survivors) {
      if (!dominated(conf, batch_length, state, loop.theta, i, survivors, instance.arms))
        next_survivors.push_back(i);
    }
    if (next_survivors.empty())
      throw InternalError("elimination emptied the active set");

    batches.push_back(BatchRecord{batch_index, batch_length, rho_j, next_survivors});
    survivors = std::move(next_survivors);
    rho_prev = rho_j;
    n_prev = static_cast<double>(batch_length);
  }

  return loop.finish(survivors.front(), false, std::move(batches));
}

GlmPairReduction::GlmPairReduction(const Instance& instance) : instance_(instance) {
  if (instance.subset_size != 2)
    throw InvalidInput("pairwise GLM reduction requires K = 2");
  const int n = instance.num_arms();
  pairs_.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) pairs_.push_back(Pair{i, j});
    }
  }
}

Eigen::VectorXd GlmPairReduction::pair_feature(std::size_t p) const {
  const auto& pr = pairs_.at(p);
  return (instance_.arms.row(pr.i) - instance_.arms.row(pr.j)).transpose();
}

SubsetAction GlmPairReduction::action_for(std::size_t p) const {
  const auto& pr = pairs_.at(p);
  return SubsetAction({pr.i, pr.j}, instance_.num_arms());
}

double GlmPairReduction::success_probability(std::size_t p, const Eigen::VectorXd& theta) const {
  const double margin = pair_feature(p).dot(theta);
  return 1.0 / (1.0 + std::exp(-margin));
}

}  // namespace mnl
