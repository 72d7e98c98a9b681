#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pttseize/eval.hpp"
#include "pttseize/features.hpp"

namespace pttseize {

struct ForestHyperparams {
  std::size_t n_trees = 1600;
  std::size_t max_depth = 20;
  std::size_t min_samples_split = 10;  // smallest node still eligible for a split
  std::size_t features_per_split = 0;  // 0: floor(sqrt(n_features))
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t resolved_features_per_split(std::size_t n_features) const;

  friend bool operator==(const ForestHyperparams&, const ForestHyperparams&) = default;
};

/// Internal nodes send x[feature] <= threshold to `left`. Leaves have
/// feature == -1. Class counts are the in-bag counts that reached the node.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::array<std::size_t, 2> class_counts{};

  bool is_leaf() const noexcept { return feature < 0; }
};

class DecisionTree {
 public:
  explicit DecisionTree(std::vector<TreeNode> nodes);

  /// Majority class of the reached leaf; ties go to class 1.
  int predict(std::span<const double> x) const;
  std::size_t depth() const;
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }

 private:
  std::vector<TreeNode> nodes_;
};

struct TrainedForest {
  std::vector<DecisionTree> trees;
  std::size_t feature_count = 0;
  ForestHyperparams hyperparams;
  std::size_t n_train = 0;
  std::size_t splits_checked = 0;  // splits verified to not raise weighted Gini
};

double gini_impurity(const std::array<std::size_t, 2>& counts) noexcept;

/// Seed used for tree `index` of a forest.
std::uint64_t tree_seed(const ForestHyperparams& hp, std::size_t index) noexcept;

/// Bootstrap resample (n draws with replacement) used for a tree seed.
std::vector<std::size_t> bootstrap_indices(std::uint64_t seed, std::size_t n);

/// Bagged CART with Gini splits at midpoints between consecutive distinct
/// values. Feature draws are seeded per node path, so a deeper max_depth only
/// extends the shallower tree. Throws Error(DegenerateLabels) for single-class
/// input and Error(ShapeMismatch) for ragged feature vectors.
TrainedForest fit(std::span<const Sample> samples, const ForestHyperparams& hp, unsigned threads = 1);

/// Fraction of trees voting class 1.
double predict_proba(const TrainedForest& forest, std::span<const double> features);

/// proba >= 0.5.
int predict(const TrainedForest& forest, std::span<const double> features);

std::string forest_to_json(const TrainedForest& forest);
TrainedForest forest_from_json(std::string_view text);
void save_forest(const std::filesystem::path& path, const TrainedForest& forest);
TrainedForest load_forest(const std::filesystem::path& path);

struct CrossValidationResult {
  std::vector<ConfusionMetrics> folds;
  MetricSummary mean;
  MetricSummary stddev;  // sample standard deviation across folds
  std::vector<double> oof_proba;  // held-out probability per input sample
  std::vector<int> fold_of;
};

/// Stratified assignment: each class is shuffled with `seed`, then dealt
/// round-robin over the folds with one counter shared across classes.
std::vector<int> stratified_folds(std::span<const int> labels, std::size_t n_folds, std::uint64_t seed);

/// Throws Error(TooFewPerClass) when a class has fewer than n_folds members.
CrossValidationResult cross_validate(std::span<const Sample> samples, const ForestHyperparams& hp,
                                     std::size_t n_folds, std::uint64_t seed, unsigned threads = 1);

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

struct SearchRanges {
  IntRange n_trees{100, 2000};
  IntRange max_depth{2, 30};
  IntRange min_samples_split{2, 20};
};

struct SearchDraw {
  ForestHyperparams hp;
  MetricSummary mean;
  MetricSummary stddev;
};

struct SearchResult {
  ForestHyperparams best;
  std::size_t best_index = 0;
  std::vector<SearchDraw> draws;
};

/// Uniform draws (with replacement) from the integer ranges, each scored by
/// cross-validated mean F1; the first draw with the best score wins. `base`
/// supplies features_per_split and the forest seed. Throws Error(EmptyRange).
SearchResult random_search(std::span<const Sample> samples, std::size_t n_draws, const SearchRanges& ranges,
                           std::uint64_t seed, std::size_t n_folds = 5, const ForestHyperparams& base = {},
                           unsigned threads = 1);

}  // namespace pttseize
