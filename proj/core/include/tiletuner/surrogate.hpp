#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tiletuner {

// Axis-aligned regression tree stored as a flat node pool. feature < 0 marks
// a leaf; interior nodes route x[feature] <= threshold to the left child.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> x) const;
};

using FeatureMatrix = std::vector<std::vector<double>>;

struct ForestParams {
  int n_trees = 25;
  int max_depth = 12;
  int min_samples_split = 2;
  bool bootstrap = true;
};

// Bagged ensemble; per-tree spread doubles as the uncertainty estimate.
struct Forest {
  std::vector<Tree> trees;
  ForestParams params;
  std::uint64_t seed = 0;
  int dims = 0;
};

struct Prediction {
  double mean = 0.0;
  double std_dev = 0.0;
};

// Trees grown by recursive variance-reduction splitting: best split over all
// features, thresholds at midpoints of consecutive distinct values.
// Deterministic for a fixed seed.
Forest fit_forest(const FeatureMatrix& x, const std::vector<double>& y,
                  const ForestParams& params, std::uint64_t seed);

// Mean and population standard deviation of the per-tree predictions.
Prediction predict_forest(const Forest& forest, std::span<const double> x);

struct BoostParams {
  int n_rounds = 50;
  int max_depth = 4;
  double learning_rate = 0.3;
  int min_samples_split = 2;
};

// prediction = base_score + learning_rate * sum of tree outputs.
struct BoostedEnsemble {
  double base_score = 0.0;
  std::vector<Tree> trees;
  BoostParams params;
  int dims = 0;
};

// Least-squares gradient boosting: each round fits a depth-limited tree to
// the current residuals.
BoostedEnsemble fit_boosted(const FeatureMatrix& x, const std::vector<double>& y,
                            const BoostParams& params, std::uint64_t seed);

double predict_boosted(const BoostedEnsemble& ensemble, std::span<const double> x);

// Lower confidence bound, minimization convention: smaller is more promising.
double lcb(double mean, double std_dev, double kappa);

}  // namespace tiletuner
