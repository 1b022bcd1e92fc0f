#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "mnl/model.hpp"

namespace mnl {

// Fitted parameter plus optimizer diagnostics. `grad_norm` is the norm of the
// regularized score restricted to the identified subspace (see fit_mle);
// `ll_trace` holds the regularized log-likelihood at the start point and
// after every accepted line-search step.
struct Estimate {
  Eigen::VectorXd theta_hat;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> ll_trace;
};

// Winner-count statistics grouped by distinct subset. The MNL likelihood only
// depends on (subset, winner-arm) counts, so refitting after every step stays
// cheap even for long runs: cost scales with the number of distinct subsets,
// not with t. Grouping keys sort the indices; the likelihood is invariant to
// slot order.
class SuffStats {
 public:
  explicit SuffStats(int dim) : dim_(dim) {}

  void add(const Eigen::MatrixXd& arms, const SubsetAction& action, int winner_local);
  void add_history(const Eigen::MatrixXd& arms, const History& history);

  int dim() const { return dim_; }
  long total_samples() const { return total_; }
  bool empty() const { return total_ == 0; }

  double log_likelihood(const Eigen::VectorXd& theta, double lambda) const;
  Eigen::VectorXd score(const Eigen::VectorXd& theta, double lambda) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& theta, double lambda) const;

  // One shared softmax sweep; grad and hess must be presized to (d) and
  // (d, d).
  void score_and_hessian(const Eigen::VectorXd& theta, double lambda, Eigen::VectorXd& grad,
                         Eigen::MatrixXd& hess) const;

  struct Group {
    Eigen::MatrixXd features;     // d x K, columns = arm vectors, index-sorted
    Eigen::VectorXd win_counts;   // wins credited per column
    double total = 0.0;           // times this subset was played
  };
  const std::vector<Group>& groups() const { return groups_; }

 private:
  void ensure_scratch(int k) const;

  int dim_;
  long total_ = 0;
  int max_k_ = 0;
  std::vector<Group> groups_;
  std::map<std::vector<int>, std::size_t> index_;

  // Assembly workspaces; runs refit after every step, so keep the inner loops
  // allocation-free. Guarded by the single-owner usage pattern.
  mutable Eigen::VectorXd util_, probs_, resid_, xp_mean_;
  mutable Eigen::MatrixXd xp_;
};

// Regularized log-likelihood of the observed winners:
//   sum_s log mu_{winner(s)}(theta) - (lambda/2) ||theta||^2.
// Throws InvalidInput on an empty history.
double log_likelihood(const History& history, const Eigen::MatrixXd& arms,
                      const Eigen::VectorXd& theta, double lambda);

// Gradient of log_likelihood: sum_s X^(s) (y^(s) - mu^(s)(theta)) - lambda theta.
Eigen::VectorXd score(const History& history, const Eigen::MatrixXd& arms,
                      const Eigen::VectorXd& theta, double lambda);

// Hessian: -sum_s X^(s) [diag(mu) - mu mu'] X^(s)' - lambda I. Negative
// semidefinite for lambda = 0, negative definite for lambda > 0.
Eigen::MatrixXd hessian(const History& history, const Eigen::MatrixXd& arms,
                        const Eigen::VectorXd& theta, double lambda);

// Reusable buffers for fit_mle_inplace; refitting after every step reuses one
// of these instead of reallocating.
struct FitWorkspace {
  Eigen::VectorXd grad;
  Eigen::VectorXd direction;
  Eigen::VectorXd candidate;
  Eigen::MatrixXd neg_hessian;
  Eigen::MatrixXd basis;
  Eigen::VectorXd reduced_grad;
  Eigen::MatrixXd reduced_hessian;
  Eigen::VectorXd reduced_step;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  Eigen::LLT<Eigen::MatrixXd> llt;
};

struct FitStatus {
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton ascent with Armijo backtracking (halving, sufficient-decrease
// 1e-4) and a gradient fallback when the eigensolve fails. Steps are
// restricted to information eigendirections with curvature >= 1; directions
// the played subsets barely identify keep their initialization, and
// convergence means the restricted score norm fell below tol. Exhausting
// max_iter yields converged=false rather than an exception. theta is the
// start point on entry and the fitted value on exit; ll_trace, when non-null,
// receives the regularized log-likelihood at the start and after every
// accepted step.
FitStatus fit_mle_inplace(const SuffStats& stats, double lambda, double tol, int max_iter,
                          Eigen::VectorXd& theta, FitWorkspace& ws,
                          std::vector<double>* ll_trace);

Estimate fit_mle(const SuffStats& stats, double lambda, double tol, int max_iter,
                 const Eigen::VectorXd& init);
Estimate fit_mle(const History& history, const Eigen::MatrixXd& arms, double lambda,
                 double tol, int max_iter, const Eigen::VectorXd& init);

}  // namespace mnl
