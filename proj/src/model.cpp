#include "mnl/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mnl/errors.hpp"
#include "nlohmann/json.hpp"

namespace mnl {

namespace {

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

void Instance::validate() const {
  const int n = num_arms();
  const int d = dim();
  if (n < 2) throw InvalidInput("instance needs at least 2 arms");
  if (d < 1) throw InvalidInput("instance needs dimension >= 1");
  if (subset_size < 2) throw InvalidInput("subset size K must be >= 2");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
  if (theta_star.size() != d) throw InvalidInput("theta_star dimension mismatch");
  if (!arms.allFinite() || !theta_star.allFinite())
    throw InvalidInput("instance contains non-finite entries");
  for (int i = 0; i < n; ++i) {
    if (arms.row(i).norm() > 1.0 + 1e-12)
      throw InvalidInput("arm norm exceeds 1 (arm " + std::to_string(i) + ")");
  }
  Eigen::VectorXd utilities = arms * theta_star;
  double best = -std::numeric_limits<double>::infinity();
  double second = best;
  for (int i = 0; i < n; ++i) {
    const double u = utilities[i];
    if (u > best) {
      second = best;
      best = u;
    } else if (u > second) {
      second = u;
    }
  }
  if (!(best - second > 0.0)) throw InvalidInput("best arm is not unique");
}

Instance Instance::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Instance out;
  const auto& arms = j.at("arms");
  if (!arms.is_array() || arms.empty()) throw InvalidInput("\"arms\" must be a non-empty array");
  const std::size_t n = arms.size();
  const std::size_t d = arms.at(0).size();
  out.arms.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = arms.at(i);
    if (row.size() != d) throw InvalidInput("ragged \"arms\" rows");
    for (std::size_t c = 0; c < d; ++c) out.arms(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row.at(c).get<double>();
  }
  const auto& theta = j.at("theta_star");
  out.theta_star.resize(static_cast<Eigen::Index>(theta.size()));
  for (std::size_t c = 0; c < theta.size(); ++c) out.theta_star[static_cast<Eigen::Index>(c)] = theta.at(c).get<double>();
  out.subset_size = j.at("K").get<int>();
  out.delta = j.at("delta").get<double>();
  out.validate();
  return out;
}

std::string Instance::to_json() const {
  nlohmann::json j;
  auto arms_json = nlohmann::json::array();
  for (int i = 0; i < num_arms(); ++i) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < dim(); ++c) row.push_back(arms(i, c));
    arms_json.push_back(std::move(row));
  }
  j["arms"] = std::move(arms_json);
  auto theta = nlohmann::json::array();
  for (int c = 0; c < dim(); ++c) theta.push_back(theta_star[c]);
  j["theta_star"] = std::move(theta);
  j["K"] = subset_size;
  j["delta"] = delta;
  return j.dump();
}

SubsetAction::SubsetAction(std::vector<int> indices, int num_arms)
    : indices_(std::move(indices)) {
  if (indices_.empty()) throw InvalidInput("action must contain at least one index");
  bool all_same = true;
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] < 0 || indices_[k] >= num_arms)
      throw InvalidInput("action index out of range");
    if (indices_[k] != indices_[0]) all_same = false;
  }
  if (all_same && indices_.size() >= 2)
    throw InvalidInput("all-identical subset is uninformative");
}

void History::add(SubsetAction action, int winner) {
  if (winner < 0 || winner >= action.size())
    throw InvalidInput("winner index outside action");
  samples.push_back(FeedbackSample{std::move(action), winner});
}

Eigen::VectorXd mnl_probs(const Eigen::MatrixXd& arms, const Eigen::VectorXd& theta,
                          const SubsetAction& action) {
  if (theta.size() != arms.cols()) throw InvalidInput("theta dimension mismatch");
  if (!all_finite(theta)) throw InvalidInput("theta must be finite");
  const int k = action.size();
  Eigen::VectorXd utilities(k);
  for (int i = 0; i < k; ++i) utilities[i] = arms.row(action[i]).dot(theta);
  if (!all_finite(utilities)) throw InvalidInput("non-finite utilities");
  const double m = utilities.maxCoeff();
  Eigen::VectorXd probs = (utilities.array() - m).exp();
  probs /= probs.sum();
  return probs;
}

int sample_winner(const Eigen::VectorXd& probs, Rng& rng) {
  const int k = static_cast<int>(probs.size());
  if (k == 0) throw InvalidInput("empty probability vector");
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0 + 1e-12))
      throw InvalidInput("probability outside [0, 1]");
    sum += probs[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidInput("probabilities do not sum to 1");
  const double u = rng.uniform01() * sum;
  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return k - 1;  // guards rounding at u ~ sum
}

int sample_rum_winner(const Eigen::MatrixXd& arms, const Eigen::VectorXd& theta,
                      double sigma, const SubsetAction& action, Rng& rng) {
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  const int k = action.size();
  int argmax = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    const double value = arms.row(action[i]).dot(theta) + sigma * rng.normal();
    if (value > best) {
      best = value;
      argmax = i;
    }
  }
  return argmax;
}

int best_arm(const Instance& instance) {
  Eigen::VectorXd utilities = instance.arms * instance.theta_star;
  int argmax = 0;
  for (int i = 1; i < instance.num_arms(); ++i) {
    if (utilities[i] > utilities[argmax]) argmax = i;
  }
  return argmax;
}

}  // namespace mnl
