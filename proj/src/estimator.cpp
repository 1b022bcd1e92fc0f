#include "mnl/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "mnl/errors.hpp"

namespace mnl {

void SuffStats::ensure_scratch(int k) const {
  if (util_.size() < k) {
    util_.resize(k);
    probs_.resize(k);
    resid_.resize(k);
    xp_.resize(dim_, k);
  }
  if (xp_mean_.size() != dim_) xp_mean_.resize(dim_);
}

void SuffStats::add(const Eigen::MatrixXd& arms, const SubsetAction& action, int winner_local) {
  if (winner_local < 0 || winner_local >= action.size())
    throw InvalidInput("winner index outside action");
  std::vector<int> key = action.indices();
  std::sort(key.begin(), key.end());
  auto it = index_.find(key);
  if (it == index_.end()) {
    Group g;
    const int k = static_cast<int>(key.size());
    g.features.resize(dim_, k);
    for (int c = 0; c < k; ++c)
      g.features.col(c) = arms.row(key[static_cast<std::size_t>(c)]).transpose();
    g.win_counts = Eigen::VectorXd::Zero(k);
    groups_.push_back(std::move(g));
    max_k_ = std::max(max_k_, k);
    it = index_.emplace(std::move(key), groups_.size() - 1).first;
  }
  // Credit the first column holding the winning arm; duplicates of an arm
  // have identical features, so the likelihood does not distinguish them.
  const int winner_arm = action[winner_local];
  const auto& sorted = it->first;
  const auto pos = std::lower_bound(sorted.begin(), sorted.end(), winner_arm) - sorted.begin();
  Group& group = groups_[it->second];
  group.win_counts[static_cast<Eigen::Index>(pos)] += 1.0;
  group.total += 1.0;
  ++total_;
}

void SuffStats::add_history(const Eigen::MatrixXd& arms, const History& history) {
  for (const auto& sample : history.samples) add(arms, sample.action, sample.winner);
}

double SuffStats::log_likelihood(const Eigen::VectorXd& theta, double lambda) const {
  if (empty()) throw InvalidInput("empty history");
  ensure_scratch(max_k_);
  double ll = 0.0;
  for (const auto& g : groups_) {
    const int k = static_cast<int>(g.features.cols());
    auto util = util_.head(k);
    util.noalias() = g.features.transpose() * theta;
    const double m = util.maxCoeff();
    const double lse = m + std::log((util.array() - m).exp().sum());
    for (int c = 0; c < k; ++c) {
      if (g.win_counts[c] > 0.0) ll += g.win_counts[c] * (util[c] - lse);
    }
  }
  return ll - 0.5 * lambda * theta.squaredNorm();
}

Eigen::VectorXd SuffStats::score(const Eigen::VectorXd& theta, double lambda) const {
  if (empty()) throw InvalidInput("empty history");
  ensure_scratch(max_k_);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim_);
  for (const auto& g : groups_) {
    const int k = static_cast<int>(g.features.cols());
    auto util = util_.head(k);
    auto probs = probs_.head(k);
    auto resid = resid_.head(k);
    util.noalias() = g.features.transpose() * theta;
    const double m = util.maxCoeff();
    probs = (util.array() - m).exp();
    probs /= probs.sum();
    resid = g.win_counts - g.total * probs;
    grad.noalias() += g.features * resid;
  }
  return grad - lambda * theta;
}

Eigen::MatrixXd SuffStats::hessian(const Eigen::VectorXd& theta, double lambda) const {
  if (empty()) throw InvalidInput("empty history");
  ensure_scratch(max_k_);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& g : groups_) {
    const int k = static_cast<int>(g.features.cols());
    auto util = util_.head(k);
    auto probs = probs_.head(k);
    util.noalias() = g.features.transpose() * theta;
    const double m = util.maxCoeff();
    probs = (util.array() - m).exp();
    probs /= probs.sum();
    auto xp = xp_.leftCols(k);
    xp.noalias() = g.features * probs.asDiagonal();
    h.noalias() -= g.total * (xp * g.features.transpose());
    xp_mean_.noalias() = g.features * probs;
    h.noalias() += g.total * (xp_mean_ * xp_mean_.transpose());
  }
  h.diagonal().array() -= lambda;
  return 0.5 * (h + h.transpose());
}

void SuffStats::score_and_hessian(const Eigen::VectorXd& theta, double lambda,
                                  Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
  if (empty()) throw InvalidInput("empty history");
  ensure_scratch(max_k_);
  grad.setZero();
  hess.setZero();
  for (const auto& g : groups_) {
    const int k = static_cast<int>(g.features.cols());
    auto util = util_.head(k);
    auto probs = probs_.head(k);
    auto resid = resid_.head(k);
    util.noalias() = g.features.transpose() * theta;
    const double m = util.maxCoeff();
    probs = (util.array() - m).exp();
    probs /= probs.sum();
    resid = g.win_counts - g.total * probs;
    grad.noalias() += g.features * resid;
    auto xp = xp_.leftCols(k);
    xp.noalias() = g.features * probs.asDiagonal();
    hess.noalias() -= g.total * (xp * g.features.transpose());
    xp_mean_.noalias() = g.features * probs;
    hess.noalias() += g.total * (xp_mean_ * xp_mean_.transpose());
  }
  grad -= lambda * theta;
  hess.diagonal().array() -= lambda;
}

double log_likelihood(const History& history, const Eigen::MatrixXd& arms,
                      const Eigen::VectorXd& theta, double lambda) {
  if (history.empty()) throw InvalidInput("empty history");
  SuffStats stats(static_cast<int>(arms.cols()));
  stats.add_history(arms, history);
  return stats.log_likelihood(theta, lambda);
}

Eigen::VectorXd score(const History& history, const Eigen::MatrixXd& arms,
                      const Eigen::VectorXd& theta, double lambda) {
  if (history.empty()) throw InvalidInput("empty history");
  SuffStats stats(static_cast<int>(arms.cols()));
  stats.add_history(arms, history);
  return stats.score(theta, lambda);
}

Eigen::MatrixXd hessian(const History& history, const Eigen::MatrixXd& arms,
                        const Eigen::VectorXd& theta, double lambda) {
  if (history.empty()) throw InvalidInput("empty history");
  SuffStats stats(static_cast<int>(arms.cols()));
  stats.add_history(arms, history);
  return stats.hessian(theta, lambda);
}

// Winner-only feedback pins utilities only up to per-subset shifts; where the
// played subsets barely cover a direction, the exact regularized MLE chases
// sampling noise along it with huge excursions (curvature ~ lambda), which
// corrupts estimated gaps for arms coupled to that direction. Each refit
// therefore fixes the subspace spanned by information eigendirections with at
// least this much curvature (measured at the start point) and runs Newton
// inside it; softer directions keep their initialization. Convergence is
// declared on the score restricted to that subspace.
constexpr double kMinCurvature = 1.0;

FitStatus fit_mle_inplace(const SuffStats& stats, double lambda, double tol, int max_iter,
                          Eigen::VectorXd& theta, FitWorkspace& ws,
                          std::vector<double>* ll_trace) {
  if (stats.empty()) throw InvalidInput("empty history");
  const int d = stats.dim();
  if (theta.size() != d) throw InvalidInput("init dimension mismatch");
  if (ws.grad.size() != d) {
    ws.grad.resize(d);
    ws.direction.resize(d);
    ws.candidate.resize(d);
    ws.neg_hessian.resize(d, d);
  }

  double ll = stats.log_likelihood(theta, lambda);

  stats.score_and_hessian(theta, lambda, ws.grad, ws.neg_hessian);
  ws.neg_hessian = -ws.neg_hessian;
  ws.eig.compute(ws.neg_hessian);

  FitStatus status;
  if (ws.eig.info() != Eigen::Success) {
    if (ll_trace != nullptr) ll_trace->push_back(ll);
    // Eigensolve failure: fall back to plain gradient ascent on the full
    // space with the unrestricted score as the convergence measure.
    int iter = 0;
    double grad_norm = ws.grad.norm();
    for (; iter < max_iter && grad_norm > tol; ++iter) {
      const double slope = grad_norm * grad_norm;
      double step = 1.0;
      bool accepted = false;
      while (step > 1e-14) {
        ws.candidate.noalias() = theta + step * ws.grad;
        const double candidate_ll = stats.log_likelihood(ws.candidate, lambda);
        if (std::isfinite(candidate_ll) && candidate_ll >= ll + 1e-4 * step * slope) {
          theta.swap(ws.candidate);
          ll = candidate_ll;
          if (ll_trace != nullptr) ll_trace->push_back(ll);
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      ws.grad = stats.score(theta, lambda);
      grad_norm = ws.grad.norm();
    }
    status.grad_norm = grad_norm;
    status.iterations = iter;
    status.converged = grad_norm <= tol;
    return status;
  }

  int strong = 0;
  for (int i = 0; i < d; ++i)
    if (ws.eig.eigenvalues()[i] >= kMinCurvature) ++strong;
  if (strong == 0) {
    // Nothing identifiable yet; stay at the start point.
    if (ll_trace != nullptr) ll_trace->push_back(ll);
    status.grad_norm = 0.0;
    status.iterations = 0;
    status.converged = true;
    return status;
  }
  // Eigenvalues are ascending; the strong directions are the trailing ones.
  ws.basis = ws.eig.eigenvectors().rightCols(strong);

  // Anchor the weak components at zero. Warm-started chains otherwise
  // accumulate drift along barely-identified directions as the eigenbasis
  // rotates from step to step.
  if (strong < d) {
    ws.candidate.noalias() = ws.basis * (ws.basis.transpose() * theta);
    theta.swap(ws.candidate);
    ll = stats.log_likelihood(theta, lambda);
    stats.score_and_hessian(theta, lambda, ws.grad, ws.neg_hessian);
    ws.neg_hessian = -ws.neg_hessian;
  }
  if (ll_trace != nullptr) ll_trace->push_back(ll);

  int iter = 0;
  double grad_norm = 0.0;
  for (; iter < max_iter; ++iter) {
    ws.reduced_grad.noalias() = ws.basis.transpose() * ws.grad;
    grad_norm = ws.reduced_grad.norm();
    if (grad_norm <= tol) break;

    ws.reduced_hessian.noalias() = ws.basis.transpose() * ws.neg_hessian * ws.basis;
    ws.llt.compute(ws.reduced_hessian);
    bool newton_ok = ws.llt.info() == Eigen::Success;
    if (newton_ok) {
      ws.reduced_step.noalias() = ws.llt.solve(ws.reduced_grad);
      newton_ok = ws.reduced_step.allFinite() &&
                  ws.reduced_grad.dot(ws.reduced_step) > 0.0;
    }
    if (!newton_ok) ws.reduced_step = ws.reduced_grad;  // gradient fallback
    ws.direction.noalias() = ws.basis * ws.reduced_step;

    // The log-likelihood is evaluated in doubles, so improvements below
    // noise * |ll| are invisible to the Armijo test; near convergence the
    // full Newton step is taken on the strength of the local model instead.
    const double slope = ws.reduced_grad.dot(ws.reduced_step);
    const double noise = 1e-13 * (1.0 + std::abs(ll));
    bool accepted = false;
    if (slope <= noise) {
      theta += ws.direction;
      ll = stats.log_likelihood(theta, lambda);
      if (ll_trace != nullptr) ll_trace->push_back(ll);
      accepted = true;
    } else {
      double step = 1.0;
      while (step > 1e-14) {
        ws.candidate.noalias() = theta + step * ws.direction;
        const double candidate_ll = stats.log_likelihood(ws.candidate, lambda);
        if (std::isfinite(candidate_ll) &&
            candidate_ll >= ll + 1e-4 * step * slope - noise) {
          theta.swap(ws.candidate);
          ll = candidate_ll;
          if (ll_trace != nullptr) ll_trace->push_back(ll);
          accepted = true;
          break;
        }
        step *= 0.5;
      }
    }
    if (!accepted) break;  // no admissible step; report current point
    stats.score_and_hessian(theta, lambda, ws.grad, ws.neg_hessian);
    ws.neg_hessian = -ws.neg_hessian;
  }

  status.grad_norm = grad_norm;
  status.iterations = iter;
  status.converged = grad_norm <= tol;
  return status;
}

Estimate fit_mle(const SuffStats& stats, double lambda, double tol, int max_iter,
                 const Eigen::VectorXd& init) {
  Estimate est;
  Eigen::VectorXd theta = init;
  FitWorkspace ws;
  const FitStatus status = fit_mle_inplace(stats, lambda, tol, max_iter, theta, ws,
                                           &est.ll_trace);
  est.theta_hat = std::move(theta);
  est.grad_norm = status.grad_norm;
  est.iterations = status.iterations;
  est.converged = status.converged;
  return est;
}

Estimate fit_mle(const History& history, const Eigen::MatrixXd& arms, double lambda,
                 double tol, int max_iter, const Eigen::VectorXd& init) {
  if (history.empty()) throw InvalidInput("empty history");
  SuffStats stats(static_cast<int>(arms.cols()));
  stats.add_history(arms, history);
  return fit_mle(stats, lambda, tol, max_iter, init);
}

}  // namespace mnl
