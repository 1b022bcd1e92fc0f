#include "mnl/verify.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "mnl/bench.hpp"
#include "mnl/confidence.hpp"
#include "mnl/design.hpp"
#include "mnl/estimator.hpp"
#include "mnl/model.hpp"
#include "mnl/runner.hpp"
#include "mnl/theory.hpp"

namespace mnl {

namespace {

void run_check(std::vector<CheckResult>& results, const std::string& name,
               const std::function<void(std::ostringstream&)>& body) {
  CheckResult r;
  r.name = name;
  std::ostringstream detail;
  try {
    body(detail);
    r.passed = true;
  } catch (const std::exception& e) {
    r.passed = false;
    detail << e.what();
  }
  r.detail = detail.str();
  results.push_back(r);
}

void require(bool cond, const std::string& message) {
  if (!cond) throw std::runtime_error(message);
}

Instance toy_instance(int d, int k, Rng& rng) {
  Instance instance;
  instance.arms = Eigen::MatrixXd(d, d);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd row(d);
    for (int c = 0; c < d; ++c) row[c] = rng.normal();
    instance.arms.row(i) = (row / (row.norm() * 1.25)).transpose();
  }
  Eigen::VectorXd theta(d);
  for (int c = 0; c < d; ++c) theta[c] = rng.normal();
  instance.theta_star = theta;
  instance.subset_size = k;
  instance.delta = 0.05;
  instance.validate();
  return instance;
}

}  // namespace

std::vector<CheckResult> run_self_checks() {
  std::vector<CheckResult> results;

  run_check(results, "mnl_probs simplex and hand value", [](std::ostringstream&) {
    Eigen::MatrixXd arms = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd theta(2);
    theta << 2.0, 0.0;
    const auto probs = mnl_probs(arms, theta, SubsetAction({0, 1}, 2));
    require(std::abs(probs.sum() - 1.0) <= 1e-12, "probabilities must sum to 1");
    const double expected = std::exp(2.0) / (1.0 + std::exp(2.0));
    require(std::abs(probs[0] - expected) <= 1e-12, "hand value mismatch");
  });

  run_check(results, "softmax shift invariance", [](std::ostringstream&) {
    Rng rng(7);
    Eigen::MatrixXd arms(3, 2);
    arms << 0.3, 0.4, -0.5, 0.1, 0.2, -0.7;
    Eigen::VectorXd theta(2);
    theta << 1.2, -0.4;
    Eigen::MatrixXd shifted(3, 3);
    shifted.leftCols(2) = arms;
    shifted.col(2).setOnes();
    Eigen::VectorXd theta3(3);
    theta3 << 1.2, -0.4, 500.0;
    const SubsetAction action({0, 1, 2}, 3);
    const auto base = mnl_probs(arms, theta, action);
    const auto moved = mnl_probs(shifted, theta3, action);
    require((base - moved).cwiseAbs().maxCoeff() <= 1e-12, "shift changed probabilities");
    (void)rng;
  });

  run_check(results, "score matches finite differences", [](std::ostringstream& detail) {
    Rng rng(11);
    const Instance instance = toy_instance(3, 2, rng);
    History history;
    for (int s = 0; s < 40; ++s) {
      const SubsetAction action = random_action(3, 2, rng);
      history.add(action, sample_winner(mnl_probs(instance.arms, instance.theta_star, action), rng));
    }
    Eigen::VectorXd theta(3);
    theta << 0.2, -0.3, 0.5;
    const Eigen::VectorXd grad = score(history, instance.arms, theta, 1e-4);
    for (int c = 0; c < 3; ++c) {
      Eigen::VectorXd up = theta, dn = theta;
      up[c] += 1e-6;
      dn[c] -= 1e-6;
      const double fd = (log_likelihood(history, instance.arms, up, 1e-4) -
                         log_likelihood(history, instance.arms, dn, 1e-4)) / 2e-6;
      require(std::abs(fd - grad[c]) <= 1e-5 * std::max(1.0, std::abs(fd)),
              "finite-difference mismatch");
    }
    detail << "3 coordinates";
  });

  run_check(results, "information matrix inverse stays consistent", [](std::ostringstream&) {
    Rng rng(13);
    DesignState state(4, 1e-4);
    Eigen::MatrixXd arms(6, 4);
    for (int i = 0; i < 6; ++i) {
      Eigen::VectorXd row(4);
      for (int c = 0; c < 4; ++c) row[c] = rng.normal();
      arms.row(i) = (row / (row.norm() * 1.1)).transpose();
    }
    for (int s = 0; s < 60; ++s) state.add_action(arms, random_action(6, 3, rng));
    const Eigen::MatrixXd dense = state.V().inverse();
    const double rel = (state.V_inv() - dense).norm() / dense.norm();
    require(rel <= 1e-8, "Sherman-Morrison drift too large");
  });

  run_check(results, "greedy slot equals exhaustive argmin", [](std::ostringstream&) {
    Rng rng(17);
    Eigen::MatrixXd arms(4, 3);
    for (int i = 0; i < 4; ++i) {
      Eigen::VectorXd row(3);
      for (int c = 0; c < 3; ++c) row[c] = rng.normal();
      arms.row(i) = (row / (row.norm() * 1.2)).transpose();
    }
    DesignState state(3, 1e-4);
    for (int s = 0; s < 10; ++s) state.add_action(arms, random_action(4, 2, rng));
    std::vector<int> active{0, 1, 2, 3};
    const GapSet gaps = GapSet::over(active);
    const SubsetAction action = greedy_select_subset(state, arms, gaps, 1);
    double best_value = 1e300;
    int best_arm_index = -1;
    for (int a = 0; a < 4; ++a) {
      const Eigen::MatrixXd v_trial =
          state.V() + arms.row(a).transpose() * arms.row(a);
      const Eigen::MatrixXd inv = v_trial.inverse();
      double worst = 0.0;
      for (const auto& [i, j] : gaps.pairs) {
        const Eigen::VectorXd g = (arms.row(i) - arms.row(j)).transpose();
        worst = std::max(worst, g.dot(inv * g));
      }
      if (worst < best_value) {
        best_value = worst;
        best_arm_index = a;
      }
    }
    require(action[0] == best_arm_index, "greedy choice differs from exhaustive argmin");
  });

  run_check(results, "width scales as 1/sqrt(c) on V = cI", [](std::ostringstream&) {
    const ConfidenceConfig cfg{0.5, 0.05, 2, 3};
    Eigen::VectorXd g(3);
    g << 1.0, 0.0, 0.0;
    DesignState a(3, 1.0);
    DesignState b(3, 4.0);
    const double wa = width(cfg, 1, a, g);
    const double wb = width(cfg, 1, b, g);
    require(std::abs(wa / wb - 2.0) <= 1e-9, "width scaling broken");
  });

  run_check(results, "f_alpha stationary point", [](std::ostringstream&) {
    for (double alpha : {0.1, 0.5, 1.0}) {
      const double x_star = f_alpha_maximizer(alpha);
      const double fd =
          (f_alpha(alpha, x_star + 1e-6) - f_alpha(alpha, x_star - 1e-6)) / 2e-6;
      require(std::abs(fd) <= 1e-6, "derivative not zero at maximizer");
    }
  });

  run_check(results, "perturbation KL identities", [](std::ostringstream&) {
    Rng rng(23);
    Instance instance = toy_instance(4, 3, rng);
    const int best = best_arm(instance);
    const int target = best == 0 ? 1 : 0;
    const auto report = make_perturbation(instance, target, 0.05);
    require(report.residual_span <= 1e-8 && report.residual_gap <= 1e-8,
            "perturbation residuals too large");
    // Excluded subset: KL must vanish.
    std::vector<int> excluded;
    for (int i = 0; i < 4 && static_cast<int>(excluded.size()) < 3; ++i)
      if (i != target) excluded.push_back(i);
    const SubsetAction action_out(excluded, 4);
    require(std::abs(kl_mnl_subset(instance.arms, action_out, instance.theta_star,
                                   report.theta_j)) <= 1e-10,
            "exclusion identity violated");
    // Included subset: KL must equal the closed form.
    std::vector<int> included{target};
    for (int i = 0; i < 4 && static_cast<int>(included.size()) < 3; ++i)
      if (i != target) included.push_back(i);
    const SubsetAction action_in(included, 4);
    const double kl =
        kl_mnl_subset(instance.arms, action_in, instance.theta_star, report.theta_j);
    const double mu_j = mnl_probs(instance.arms, instance.theta_star, action_in)[0];
    const double closed = f_alpha(report.gap_1j + report.epsilon, mu_j);
    require(std::abs(kl - closed) <= 1e-10, "closed form mismatch");
  });

  run_check(results, "lower bound hand value", [](std::ostringstream&) {
    Instance instance;
    instance.arms = Eigen::MatrixXd::Identity(2, 2);
    instance.theta_star = Eigen::VectorXd(2);
    instance.theta_star << 0.9, 0.0;
    instance.subset_size = 2;
    instance.delta = 0.05;
    const auto report = lower_bound_value(instance, 0.1, 0.05);
    const double expected = 0.5 / std::exp(1.0) * std::log(1.0 / 0.12);
    require(std::abs(report.total - expected) <= 1e-12, "formula composition broken");
    require(std::abs(report.total - 0.39001) <= 1e-4, "hand value mismatch");
  });

  run_check(results, "seeded runs are reproducible", [](std::ostringstream&) {
    const Instance instance = standard_instance(2, 0.8, 2, 0.05);
    RunConfig cfg;
    cfg.max_steps = 3000;
    Rng r1 = Rng::child(99, 0);
    Rng r2 = Rng::child(99, 0);
    const RunResult a = run_static(instance, cfg, r1);
    const RunResult b = run_static(instance, cfg, r2);
    require(a.tau == b.tau && a.returned_arm == b.returned_arm &&
                a.pull_counts == b.pull_counts,
            "identical seeds diverged");
  });

  return results;
}

}  // namespace mnl
