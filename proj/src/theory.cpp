#include "mnl/theory.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mnl/errors.hpp"
#include "mnl/estimator.hpp"
#include "nlohmann/json.hpp"

namespace mnl {

double f_alpha(double alpha, double x) {
  if (!(alpha > 0.0)) throw InvalidInput("f_alpha requires alpha > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("f_alpha requires x in [0, 1]");
  return std::log1p(x * std::expm1(alpha)) - alpha * x;
}

double f_alpha_maximizer(double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("f_alpha requires alpha > 0");
  return 1.0 / alpha - 1.0 / std::expm1(alpha);
}

double kl_categorical(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw InvalidInput("KL requires equal lengths");
  double kl = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw InvalidInput("KL requires nonnegative entries");
    if (p[i] == 0.0) continue;
    if (q[i] <= 0.0) throw InvalidInput("KL support violation: q = 0 where p > 0");
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(kl, 0.0);
}

double kl_mnl_subset(const Eigen::MatrixXd& arms, const SubsetAction& action,
                     const Eigen::VectorXd& theta1, const Eigen::VectorXd& theta2) {
  return kl_categorical(mnl_probs(arms, theta1, action), mnl_probs(arms, theta2, action));
}

PerturbationReport make_perturbation(const Instance& instance, int j, double epsilon) {
  instance.validate();
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  const int n = instance.num_arms();
  const int d = instance.dim();
  if (n != d) throw InvalidInput("perturbation requires N = d arms");
  if (j < 0 || j >= n) throw InvalidInput("target arm index out of range");
  const int best = best_arm(instance);
  if (j == best) throw InvalidInput("target arm must differ from the best arm");

  // A_j: all arms except a_j, as columns.
  Eigen::MatrixXd others(d, n - 1);
  int col = 0;
  for (int i = 0; i < n; ++i) {
    if (i != j) others.col(col++) = instance.arms.row(i).transpose();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
  qr.setThreshold(1e-10);
  if (qr.rank() < n - 1) throw InvalidInput("arms are not linearly independent");

  // F_j = I - projection onto span(A_j), via the thin Q factor.
  Eigen::MatrixXd q_full = qr.householderQ();
  Eigen::MatrixXd q_thin = q_full.leftCols(n - 1);
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(d, d) - q_thin * q_thin.transpose();

  const Eigen::VectorXd direction =
      (instance.arms.row(best) - instance.arms.row(j)).transpose();
  const double gap = instance.theta_star.dot(direction);
  const Eigen::VectorXd f_dir = f * direction;
  const double denom = direction.dot(f_dir);
  if (!(denom > 1e-24) || std::sqrt(denom) < 1e-12)
    throw InvalidInput("degenerate perturbation direction");

  PerturbationReport report;
  report.j = j;
  report.epsilon = epsilon;
  report.gap_1j = gap;
  report.delta_j = ((epsilon + gap) / denom) * f_dir;
  report.theta_j = instance.theta_star - report.delta_j;

  double span_residual = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == j) continue;
    span_residual = std::max(span_residual,
                             std::abs(instance.arms.row(i).dot(report.delta_j)));
  }
  report.residual_span = span_residual;
  report.residual_gap = std::abs(direction.dot(report.delta_j) - (epsilon + gap));
  return report;
}

LowerBoundReport lower_bound_value(const Instance& instance, double epsilon, double delta) {
  instance.validate();
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
  const int n = instance.num_arms();
  const int d = instance.dim();
  if (n != d) throw InvalidInput("lower bound requires N = d arms");
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(instance.arms.transpose());
    qr.setThreshold(1e-10);
    if (qr.rank() < d) throw InvalidInput("arms must span a d-dimensional subspace");
  }

  const int best = best_arm(instance);
  const int k = instance.subset_size;
  LowerBoundReport report;
  if (k < 12)
    report.warnings.push_back(
        "K < 12: the e/(K-1) <= 1/4 step behind the KL cap needs larger K");

  double sum_terms = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == best) continue;
    const double gap = instance.theta_star.dot(
        (instance.arms.row(best) - instance.arms.row(j)).transpose());
    const double alpha = gap + epsilon;
    if (alpha > 1.0)
      report.warnings.push_back("gap + epsilon > 1 for arm " + std::to_string(j) +
                                ": theorem hypothesis violated");
    const double term = 1.0 / (alpha * alpha);
    report.per_j_terms.push_back(term);
    sum_terms += term;
    report.kl_caps.push_back(k >= 2 ? f_alpha(alpha, std::min(1.0, std::numbers::e / (k - 1)))
                                    : 0.0);
  }
  const double k_factor = 1.0 - 1.0 / static_cast<double>(k);
  report.total = k_factor / std::numbers::e * sum_terms * std::log(1.0 / (2.4 * delta));
  return report;
}

double upper_bound_value(int d, int k, int n, double delta, double kappa_alpha,
                         double delta_min, double beta, double tau_guess) {
  if (d < 1 || k < 1 || n < 1) throw InvalidInput("d, K, N must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
  if (!(kappa_alpha > 0.0) || !(delta_min > 0.0) || !(beta >= 0.0) || !(tau_guess > 0.0))
    throw InvalidInput("kappa, delta_min, tau must be positive and beta >= 0");
  const double nn = static_cast<double>(n);
  const double log_term = std::log(3.0 * nn * nn * tau_guess * tau_guess / delta);
  return 512.0 * (1.0 + beta) / (kappa_alpha * kappa_alpha * delta_min * delta_min) *
         (static_cast<double>(d) + log_term) * static_cast<double>(d) / static_cast<double>(k);
}

UpperBoundValue upper_bound_fixed_point(int d, int k, int n, double delta,
                                        double kappa_alpha, double delta_min, double beta,
                                        double tau_guess) {
  UpperBoundValue out;
  double tau = tau_guess;
  out.converged = false;
  for (int it = 0; it < 100; ++it) {
    const double next = upper_bound_value(d, k, n, delta, kappa_alpha, delta_min, beta, tau);
    out.iterations = it + 1;
    if (std::abs(next - tau) <= 1e-6 * std::abs(next)) {
      tau = next;
      out.converged = true;
      break;
    }
    tau = next;
  }
  out.tau = tau;
  out.value = tau;
  return out;
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InvalidInput("quadrature needs at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  // Newton iteration on the Legendre polynomial P_n over [-1, 1].
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Map from [-1, 1] to [0, 1].
    nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
    weights[static_cast<std::size_t>(n - 1 - i)] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

// diag(mu) - mu mu' for the winner distribution of one subset at theta.
Eigen::MatrixXd softmax_curvature(const Eigen::MatrixXd& features, const Eigen::VectorXd& theta) {
  Eigen::VectorXd utilities = features.transpose() * theta;
  const double m = utilities.maxCoeff();
  Eigen::VectorXd probs = (utilities.array() - m).exp();
  probs /= probs.sum();
  Eigen::MatrixXd curv = -probs * probs.transpose();
  curv.diagonal() += probs;
  return curv;
}

}  // namespace

double empirical_kappa(const Instance& instance, const History& history, double alpha_ball,
                       int n_theta_samples, int quadrature_nodes, Rng& rng, double ridge) {
  if (history.empty()) throw InvalidInput("empty history");
  if (n_theta_samples < 1) throw InvalidInput("need at least one theta sample");
  if (!(alpha_ball >= 0.0)) throw InvalidInput("alpha_ball must be >= 0");
  if (!(ridge > 0.0)) throw InvalidInput("ridge must be positive");
  const int d = instance.dim();

  // Group repeated actions; F and V only depend on the played subsets.
  SuffStats stats(d);
  stats.add_history(instance.arms, history);

  Eigen::MatrixXd v = ridge * Eigen::MatrixXd::Identity(d, d);
  for (const auto& g : stats.groups())
    v.noalias() += g.total * (g.features * g.features.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v);
  if (es.info() != Eigen::Success) throw InternalError("eigendecomposition failed");
  const Eigen::VectorXd inv_sqrt = es.eigenvalues().array().max(0.0).sqrt().inverse();
  const Eigen::MatrixXd v_inv_sqrt =
      es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();

  std::vector<double> nodes, weights;
  gauss_legendre_01(quadrature_nodes, nodes, weights);

  double kappa_min = std::numeric_limits<double>::infinity();
  for (int sample = 0; sample < n_theta_samples; ++sample) {
    // Uniform draw in the alpha_ball around theta*.
    Eigen::VectorXd direction(d);
    for (int c = 0; c < d; ++c) direction[c] = rng.normal();
    const double norm = direction.norm();
    if (norm > 0.0) direction /= norm;
    const double radius =
        alpha_ball * std::pow(rng.uniform01(), 1.0 / static_cast<double>(d));
    const Eigen::VectorXd theta = instance.theta_star + radius * direction;

    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(d, d);
    for (const auto& g : stats.groups()) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(g.features.cols(), g.features.cols());
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        const Eigen::VectorXd blend =
            nodes[q] * theta + (1.0 - nodes[q]) * instance.theta_star;
        m.noalias() += weights[q] * softmax_curvature(g.features, blend);
      }
      f.noalias() += g.total * (g.features * m * g.features.transpose());
    }
    f = 0.5 * (f + f.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pencil(v_inv_sqrt * f * v_inv_sqrt);
    if (pencil.info() != Eigen::Success) throw InternalError("eigendecomposition failed");
    kappa_min = std::min(kappa_min, pencil.eigenvalues().minCoeff());
  }
  return kappa_min;
}

std::string PerturbationReport::to_json() const {
  nlohmann::json j;
  j["j"] = this->j;
  j["epsilon"] = epsilon;
  j["gap_1j"] = gap_1j;
  j["residual_span"] = residual_span;
  j["residual_gap"] = residual_gap;
  j["delta_j"] = std::vector<double>(delta_j.data(), delta_j.data() + delta_j.size());
  j["theta_j"] = std::vector<double>(theta_j.data(), theta_j.data() + theta_j.size());
  return j.dump();
}

std::string LowerBoundReport::to_json() const {
  nlohmann::json j;
  j["per_j_terms"] = per_j_terms;
  j["kl_caps"] = kl_caps;
  j["total"] = total;
  j["warnings"] = warnings;
  return j.dump();
}

}  // namespace mnl
