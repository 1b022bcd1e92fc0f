#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mnl/model.hpp"
#include "mnl/rng.hpp"

namespace mnl {

// Perturbed instance theta^j = theta* - delta^j making arm j beat the best
// arm by exactly epsilon while leaving every other arm's utility unchanged.
struct PerturbationReport {
  int j = -1;
  Eigen::VectorXd delta_j;
  Eigen::VectorXd theta_j;
  double epsilon = 0.0;
  double gap_1j = 0.0;          // <theta*, a_best - a_j>
  double residual_span = 0.0;   // max_i |<a_i, delta_j>| over i != j
  double residual_gap = 0.0;    // |<a_best - a_j, delta_j> - (epsilon + gap)|

  std::string to_json() const;
};

struct LowerBoundReport {
  std::vector<double> per_j_terms;  // 1 / (gap_1j + epsilon)^2, one per j != best
  std::vector<double> kl_caps;      // f_{gap+eps}(e / (K - 1)) per j
  double total = 0.0;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

struct UpperBoundValue {
  double value = 0.0;
  double tau = 0.0;
  bool converged = true;
  int iterations = 0;
};

// f_alpha(x) = log(1 + x (e^alpha - 1)) - alpha x for alpha > 0, x in [0, 1].
double f_alpha(double alpha, double x);

// Location of f_alpha's maximum on [0, 1]: 1/alpha - 1/(e^alpha - 1).
double f_alpha_maximizer(double alpha);

// sum_i p_i log(p_i / q_i) with 0 log 0 = 0; requires q > 0 wherever p > 0.
double kl_categorical(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// KL divergence between the winner distributions of `action` under theta1
// and theta2.
double kl_mnl_subset(const Eigen::MatrixXd& arms, const SubsetAction& action,
                     const Eigen::VectorXd& theta1, const Eigen::VectorXd& theta2);

// Closed-form solution of the perturbation program for target arm j != best.
// Requires the N = d linearly-independent-arms regime.
PerturbationReport make_perturbation(const Instance& instance, int j, double epsilon);

// Theorem value (1 - 1/K)/e * sum_{j != best} (gap_1j + eps)^{-2} * log(1/(2.4 delta)),
// with hypothesis warnings attached instead of raised.
LowerBoundReport lower_bound_value(const Instance& instance, double epsilon, double delta);

// 512 (1 + beta) / (kappa^2 delta_min^2) * (d + log(3 N^2 tau^2 / delta)) * d / K
// evaluated at tau = tau_guess.
double upper_bound_value(int d, int k, int n, double delta, double kappa_alpha,
                         double delta_min, double beta, double tau_guess);

// Iterates tau <- bound(tau) from tau_guess until the relative change drops
// below 1e-6 or 100 iterations pass.
UpperBoundValue upper_bound_fixed_point(int d, int k, int n, double delta,
                                        double kappa_alpha, double delta_min, double beta,
                                        double tau_guess);

// Sampled diagnostic estimate of the curvature constant kappa_alpha: the
// minimum over sampled theta in the ball ||theta - theta*|| <= alpha_ball of
// lambda_min(V^{-1/2} F(theta, theta*) V^{-1/2}), with F assembled by
// Gauss-Legendre quadrature and V ridged. A lower estimate, not a certificate.
double empirical_kappa(const Instance& instance, const History& history, double alpha_ball,
                       int n_theta_samples, int quadrature_nodes, Rng& rng,
                       double ridge = 1e-4);

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace mnl
