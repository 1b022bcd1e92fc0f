#include "mnl/design.hpp"

#include <cmath>
#include <limits>

#include "mnl/errors.hpp"

namespace mnl {

GapSet GapSet::over(const std::vector<int>& active_arms) {
  GapSet out;
  const std::size_t n = active_arms.size();
  out.pairs.reserve(n * (n - 1) / 2);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const int i = active_arms[a];
      const int j = active_arms[b];
      if (i == j) throw InvalidInput("duplicate arm index in active set");
      out.pairs.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  return out;
}

DesignState::DesignState(int dim, double ridge) : dim_(dim), ridge_(ridge) {
  if (dim < 1) throw InvalidInput("dimension must be >= 1");
  if (!(ridge > 0.0)) throw InvalidInput("ridge must be positive");
  v_ = ridge * Eigen::MatrixXd::Identity(dim, dim);
  v_inv_ = (1.0 / ridge) * Eigen::MatrixXd::Identity(dim, dim);
}

namespace {

void symmetrize(Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  for (int r = 0; r < n; ++r) {
    for (int c = r + 1; c < n; ++c) {
      const double avg = 0.5 * (m(r, c) + m(c, r));
      m(r, c) = avg;
      m(c, r) = avg;
    }
  }
}

}  // namespace

void DesignState::rank_one(const Eigen::VectorXd& x) {
  v_.noalias() += x * x.transpose();
  const Eigen::VectorXd w = v_inv_ * x;
  const double denom = 1.0 + x.dot(w);
  v_inv_.noalias() -= (w * w.transpose()) / denom;
  ++updates_;
  if (updates_ % kRefreshInterval == 0) {
    refresh_inverse();
  } else {
    symmetrize(v_inv_);
  }
  symmetrize(v_);
}

void DesignState::refresh_inverse() {
  Eigen::LLT<Eigen::MatrixXd> llt(v_);
  if (llt.info() != Eigen::Success)
    throw InternalError("information matrix lost positive definiteness");
  v_inv_ = llt.solve(Eigen::MatrixXd::Identity(dim_, dim_));
  symmetrize(v_inv_);
}

void DesignState::add_action(const Eigen::MatrixXd& arms, const SubsetAction& action) {
  for (int k = 0; k < action.size(); ++k) rank_one(arms.row(action[k]).transpose());
  ++t_;
}

double DesignState::mahalanobis(const Eigen::VectorXd& g) const {
  if (g.size() != dim_) throw InvalidInput("gap vector dimension mismatch");
  return g.dot(v_inv_ * g);
}

double rho(const DesignState& state, const GapSet& gaps, const Eigen::MatrixXd& arms) {
  if (gaps.empty()) throw InvalidInput("empty gap set");
  // Quadratic forms of all arm differences come from the arm Gram matrix
  // B = A V^{-1} A'.
  const Eigen::MatrixXd b = arms * state.V_inv() * arms.transpose();
  double worst = 0.0;
  for (const auto& [i, j] : gaps.pairs)
    worst = std::max(worst, b(i, i) + b(j, j) - 2.0 * b(i, j));
  return worst;
}

namespace {

// Shared greedy loop over difference directions (i, j) or single-arm
// directions (i, -1). All quadratic forms reduce to entries of
// B = A W A', and committing a slot is a rank-one update of B.
//
// The slot objective is the worst-case direction value after the trial
// update. That max is frequently tied exactly (on orthogonal arm sets a
// candidate leaves every direction it does not touch bit-identical), and
// index tie-breaking then starves whole directions. Near-ties on the max are
// therefore resolved by the total over directions, then by lowest index.
SubsetAction greedy_select(const DesignState& state, const Eigen::MatrixXd& arms,
                           const std::vector<std::pair<int, int>>& directions,
                           int subset_size) {
  const int n = static_cast<int>(arms.rows());
  if (n < 2) throw InvalidInput("greedy selection needs at least 2 arms");
  if (subset_size < 1) throw InvalidInput("subset size must be >= 1");
  if (directions.empty()) throw InvalidInput("empty direction set");

  Eigen::MatrixXd b = arms * state.V_inv() * arms.transpose();
  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(subset_size));
  std::vector<double> scores(static_cast<std::size_t>(n));
  std::vector<double> last_slot_scores;

  const auto nearly_equal = [](double x, double y) {
    return std::abs(x - y) <= 1e-9 * std::max({1.0, std::abs(x), std::abs(y)});
  };

  for (int slot = 0; slot < subset_size; ++slot) {
    int best_arm = 0;
    double best_score = std::numeric_limits<double>::infinity();
    double best_total = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a) {
      const double denom = 1.0 + b(a, a);
      double worst = 0.0;
      double total = 0.0;
      for (const auto& [i, j] : directions) {
        double base, cross;
        if (j >= 0) {
          base = b(i, i) + b(j, j) - 2.0 * b(i, j);
          cross = b(i, a) - b(j, a);
        } else {
          base = b(i, i);
          cross = b(i, a);
        }
        const double value = base - cross * cross / denom;
        worst = std::max(worst, value);
        total += value;
      }
      scores[static_cast<std::size_t>(a)] = worst;
      if (worst < best_score && !nearly_equal(worst, best_score)) {
        best_score = worst;
        best_total = total;
        best_arm = a;
      } else if (nearly_equal(worst, best_score) && total < best_total &&
                 !nearly_equal(total, best_total)) {
        best_total = total;
        best_arm = a;
      }
    }
    chosen.push_back(best_arm);
    if (slot == subset_size - 1) last_slot_scores = scores;

    const Eigen::VectorXd col = b.col(best_arm);
    b.noalias() -= col * col.transpose() / (1.0 + col[best_arm]);
  }

  // Degenerate all-identical subsets carry no information; swap the final
  // slot for its runner-up candidate.
  bool all_same = subset_size >= 2;
  for (int k = 1; k < subset_size; ++k)
    all_same = all_same && chosen[static_cast<std::size_t>(k)] == chosen[0];
  if (all_same) {
    int runner_up = -1;
    double runner_score = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a) {
      if (a == chosen[0]) continue;
      if (last_slot_scores[static_cast<std::size_t>(a)] < runner_score) {
        runner_score = last_slot_scores[static_cast<std::size_t>(a)];
        runner_up = a;
      }
    }
    chosen.back() = runner_up;
  }
  return SubsetAction(std::move(chosen), n);
}

}  // namespace

SubsetAction greedy_select_subset(const DesignState& state, const Eigen::MatrixXd& arms,
                                  const GapSet& gaps, int subset_size) {
  if (gaps.empty()) throw InvalidInput("empty gap set");
  return greedy_select(state, arms, gaps.pairs, subset_size);
}

SubsetAction greedy_select_subset_alt(const DesignState& state, const Eigen::MatrixXd& arms,
                                      int subset_size) {
  std::vector<std::pair<int, int>> directions;
  directions.reserve(static_cast<std::size_t>(arms.rows()));
  for (int i = 0; i < arms.rows(); ++i) directions.emplace_back(i, -1);
  return greedy_select(state, arms, directions, subset_size);
}

SubsetAction random_action(int num_arms, int subset_size, Rng& rng) {
  if (num_arms < 2) throw InvalidInput("random action needs at least 2 arms");
  if (subset_size < 2) throw InvalidInput("subset size must be >= 2");
  for (;;) {
    std::vector<int> indices(static_cast<std::size_t>(subset_size));
    bool all_same = true;
    for (int k = 0; k < subset_size; ++k) {
      indices[static_cast<std::size_t>(k)] =
          static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(num_arms)));
      all_same = all_same && indices[static_cast<std::size_t>(k)] == indices[0];
    }
    if (!all_same) return SubsetAction(std::move(indices), num_arms);
  }
}

}  // namespace mnl
