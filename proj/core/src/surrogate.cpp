#include "tiletuner/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tiletuner/rng.hpp"

namespace tiletuner {

double Tree::predict(std::span<const double> x) const {
  int node = 0;
  while (nodes[node].feature >= 0) {
    const TreeNode& nd = nodes[node];
    node = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
  return nodes[node].value;
}

namespace {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double sse = std::numeric_limits<double>::infinity();
};

double subset_mean(const std::vector<double>& y, const std::vector<int>& idx) {
  double s = 0.0;
  for (int i : idx) s += y[i];
  return s / static_cast<double>(idx.size());
}

// Best variance-reduction split over all features; midpoints of consecutive
// distinct sorted values as thresholds. Ties keep the first (lowest feature,
// lowest threshold) candidate, which makes fits fully deterministic.
SplitChoice best_split(const FeatureMatrix& x, const std::vector<double>& y,
                       const std::vector<int>& idx, int dims) {
  SplitChoice best;
  const int n = static_cast<int>(idx.size());
  std::vector<int> order(idx);
  for (int f = 0; f < dims; ++f) {
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (x[a][f] != x[b][f]) return x[a][f] < x[b][f];
      return a < b;
    });
    // Prefix sums over the sorted order make each threshold O(1).
    double left_sum = 0.0, left_sq = 0.0;
    double total_sum = 0.0, total_sq = 0.0;
    for (int i : order) {
      total_sum += y[i];
      total_sq += y[i] * y[i];
    }
    for (int row = 0; row < n - 1; ++row) {
      const int i = order[row];
      left_sum += y[i];
      left_sq += y[i] * y[i];
      if (x[i][f] == x[order[row + 1]][f]) continue;  // not a boundary
      const int nl = row + 1;
      const int nr = n - nl;
      const double right_sum = total_sum - left_sum;
      const double right_sq = total_sq - left_sq;
      const double sse = (left_sq - left_sum * left_sum / nl) +
                         (right_sq - right_sum * right_sum / nr);
      if (sse < best.sse) {
        best.feature = f;
        best.threshold = 0.5 * (x[i][f] + x[order[row + 1]][f]);
        best.sse = sse;
      }
    }
  }
  return best;
}

int grow(Tree& tree, const FeatureMatrix& x, const std::vector<double>& y,
         std::vector<int> idx, int depth, int max_depth, int min_samples_split,
         int dims) {
  const int node_id = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  tree.nodes[node_id].value = subset_mean(y, idx);
  if (depth >= max_depth || static_cast<int>(idx.size()) < min_samples_split) {
    return node_id;
  }
  SplitChoice split = best_split(x, y, idx, dims);
  if (split.feature < 0) return node_id;  // all points identical
  std::vector<int> left_idx, right_idx;
  for (int i : idx) {
    (x[i][split.feature] <= split.threshold ? left_idx : right_idx).push_back(i);
  }
  if (left_idx.empty() || right_idx.empty()) return node_id;
  idx.clear();
  idx.shrink_to_fit();
  const int left = grow(tree, x, y, std::move(left_idx), depth + 1, max_depth,
                        min_samples_split, dims);
  const int right = grow(tree, x, y, std::move(right_idx), depth + 1, max_depth,
                         min_samples_split, dims);
  tree.nodes[node_id].feature = split.feature;
  tree.nodes[node_id].threshold = split.threshold;
  tree.nodes[node_id].left = left;
  tree.nodes[node_id].right = right;
  return node_id;
}

Tree fit_tree(const FeatureMatrix& x, const std::vector<double>& y,
              std::vector<int> idx, int max_depth, int min_samples_split,
              int dims) {
  Tree tree;
  grow(tree, x, y, std::move(idx), 0, max_depth, min_samples_split, dims);
  return tree;
}

int check_training_data(const FeatureMatrix& x, const std::vector<double>& y,
                        const char* who) {
  if (x.empty() || x.size() != y.size()) {
    throw std::invalid_argument(std::string(who) +
                                ": need matching, non-empty X and y");
  }
  const int dims = static_cast<int>(x.front().size());
  for (const auto& row : x) {
    if (static_cast<int>(row.size()) != dims) {
      throw std::invalid_argument(std::string(who) +
                                  ": inconsistent feature dimensionality");
    }
  }
  return dims;
}

}  // namespace

Forest fit_forest(const FeatureMatrix& x, const std::vector<double>& y,
                  const ForestParams& params, std::uint64_t seed) {
  const int dims = check_training_data(x, y, "fit_forest");
  if (params.n_trees < 1) {
    throw std::invalid_argument("fit_forest: n_trees must be >= 1");
  }
  Forest forest{{}, params, seed, dims};
  Rng rng(seed);
  const int n = static_cast<int>(x.size());
  for (int t = 0; t < params.n_trees; ++t) {
    std::vector<int> idx(n);
    if (params.bootstrap) {
      for (int& i : idx) i = static_cast<int>(rng.next_index(n));
    } else {
      std::iota(idx.begin(), idx.end(), 0);
    }
    forest.trees.push_back(fit_tree(x, y, std::move(idx), params.max_depth,
                                    params.min_samples_split, dims));
  }
  return forest;
}

Prediction predict_forest(const Forest& forest, std::span<const double> x) {
  if (static_cast<int>(x.size()) != forest.dims) {
    throw std::invalid_argument("predict_forest: feature dimensionality mismatch");
  }
  std::vector<double> preds;
  preds.reserve(forest.trees.size());
  for (const Tree& tree : forest.trees) preds.push_back(tree.predict(x));
  bool all_equal = true;
  double sum = 0.0;
  for (double p : preds) {
    all_equal &= p == preds.front();
    sum += p;
  }
  // Identical trees (bootstrap off, or unanimous leaves) carry exactly zero
  // uncertainty; the two-pass form keeps the general case stable.
  if (all_equal) return {preds.front(), 0.0};
  const double n = static_cast<double>(preds.size());
  const double mean = sum / n;
  double var = 0.0;
  for (double p : preds) var += (p - mean) * (p - mean);
  return {mean, std::sqrt(var / n)};
}

BoostedEnsemble fit_boosted(const FeatureMatrix& x, const std::vector<double>& y,
                            const BoostParams& params, std::uint64_t /*seed*/) {
  const int dims = check_training_data(x, y, "fit_boosted");
  BoostedEnsemble ens{0.0, {}, params, dims};
  const int n = static_cast<int>(x.size());
  ens.base_score = std::accumulate(y.begin(), y.end(), 0.0) / n;
  std::vector<double> residual(y);
  for (double& r : residual) r -= ens.base_score;
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (int round = 0; round < params.n_rounds; ++round) {
    Tree tree = fit_tree(x, residual, all, params.max_depth,
                         params.min_samples_split, dims);
    for (int i = 0; i < n; ++i) {
      residual[i] -= params.learning_rate * tree.predict(x[i]);
    }
    ens.trees.push_back(std::move(tree));
  }
  return ens;
}

double predict_boosted(const BoostedEnsemble& ensemble, std::span<const double> x) {
  if (static_cast<int>(x.size()) != ensemble.dims) {
    throw std::invalid_argument("predict_boosted: feature dimensionality mismatch");
  }
  double out = ensemble.base_score;
  for (const Tree& tree : ensemble.trees) {
    out += ensemble.params.learning_rate * tree.predict(x);
  }
  return out;
}

double lcb(double mean, double std_dev, double kappa) {
  if (std_dev < 0.0 || kappa < 0.0) {
    throw std::invalid_argument("lcb: std_dev and kappa must be non-negative");
  }
  return mean - kappa * std_dev;
}

}  // namespace tiletuner
