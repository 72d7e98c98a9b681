#include "pttseize/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "pttseize/error.hpp"
#include "pttseize/io.hpp"
#include "pttseize/parallel.hpp"
#include "pttseize/synthgen.hpp"

namespace pttseize {

using nlohmann::json;

void ForestHyperparams::validate() const {
  if (n_trees < 1) throw Error(Errc::InvalidArgument, "forest.n_trees must be >= 1");
  if (max_depth < 1) throw Error(Errc::InvalidArgument, "forest.max_depth must be >= 1");
  if (min_samples_split < 2) throw Error(Errc::InvalidArgument, "forest.min_samples_split must be >= 2");
}

std::size_t ForestHyperparams::resolved_features_per_split(std::size_t n_features) const {
  std::size_t m = features_per_split;
  if (m == 0) m = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_features))));
  return std::clamp<std::size_t>(m, 1, std::max<std::size_t>(n_features, 1));
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error(Errc::InvalidArgument, "tree without nodes");
  const auto n = static_cast<std::int32_t>(nodes_.size());
  for (std::int32_t i = 0; i < n; ++i) {
    const auto& node = nodes_[static_cast<std::size_t>(i)];
    if (node.is_leaf()) continue;
    if (node.left <= i || node.right <= i || node.left >= n || node.right >= n) {
      throw Error(Errc::InvalidArgument, "tree child index out of order");
    }
  }
}

int DecisionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& node = nodes_[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right);
  }
  return nodes_[i].class_counts[1] >= nodes_[i].class_counts[0] ? 1 : 0;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

double gini_impurity(const std::array<std::size_t, 2>& counts) noexcept {
  const double n = static_cast<double>(counts[0] + counts[1]);
  if (n == 0.0) return 0.0;
  const double p = static_cast<double>(counts[1]) / n;
  return 2.0 * p * (1.0 - p);
}

std::uint64_t tree_seed(const ForestHyperparams& hp, std::size_t index) noexcept {
  return mix_seed(hp.seed, index);
}

std::vector<std::size_t> bootstrap_indices(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

namespace {

struct Matrix {
  std::vector<double> values;
  std::vector<int> labels;
  std::size_t cols = 0;

  double at(std::size_t row, std::size_t col) const { return values[row * cols + col]; }
};

Matrix to_matrix(std::span<const Sample> samples) {
  Matrix m;
  if (samples.empty()) throw Error(Errc::DegenerateLabels, "no samples");
  m.cols = samples.front().features.size();
  m.values.reserve(samples.size() * m.cols);
  for (const auto& s : samples) {
    if (s.features.size() != m.cols) throw Error(Errc::ShapeMismatch, "samples differ in feature count");
    m.values.insert(m.values.end(), s.features.begin(), s.features.end());
    m.labels.push_back(s.label != 0 ? 1 : 0);
  }
  const auto pos = std::count(m.labels.begin(), m.labels.end(), 1);
  if (pos == 0 || static_cast<std::size_t>(pos) == m.labels.size()) {
    throw Error(Errc::DegenerateLabels, "training data needs both classes");
  }
  return m;
}

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted child Gini
  bool valid = false;
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& data, const ForestHyperparams& hp, std::size_t mtry)
      : data_(data), hp_(hp), mtry_(mtry) {}

  DecisionTree build(std::vector<std::size_t> rows, std::uint64_t seed) {
    rows_ = std::move(rows);
    nodes_.clear();
    grow(0, rows_.size(), 0, seed);
    return DecisionTree(std::move(nodes_));
  }

  std::size_t splits_checked() const noexcept { return splits_checked_; }

 private:
  std::int32_t grow(std::size_t begin, std::size_t end, std::size_t depth, std::uint64_t seed) {
    std::array<std::size_t, 2> counts{};
    for (std::size_t k = begin; k < end; ++k) ++counts[static_cast<std::size_t>(data_.labels[rows_[k]])];
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(TreeNode{-1, 0.0, -1, -1, counts});

    const std::size_t n = end - begin;
    if (counts[0] == 0 || counts[1] == 0 || depth >= hp_.max_depth || n < hp_.min_samples_split) return id;

    const Split split = best_split(begin, end, counts, seed);
    if (!split.valid) return id;
    const double parent = gini_impurity(counts);
    if (split.impurity > parent + 1e-12) {
      throw std::logic_error("split increased Gini impurity");
    }
    ++splits_checked_;

    const auto mid = std::stable_partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                           rows_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t r) {
                                             return data_.at(r, split.feature) <= split.threshold;
                                           });
    const auto mid_index = static_cast<std::size_t>(mid - rows_.begin());
    const std::int32_t left = grow(begin, mid_index, depth + 1, mix_seed(seed, 1));
    const std::int32_t right = grow(mid_index, end, depth + 1, mix_seed(seed, 2));
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = static_cast<int>(split.feature);
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  // Visits features in a seeded random order until mtry non-constant ones
  // have been scored.
  Split best_split(std::size_t begin, std::size_t end, const std::array<std::size_t, 2>& counts,
                   std::uint64_t seed) {
    std::vector<std::size_t> order(data_.cols);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const double n = static_cast<double>(end - begin);
    Split best;
    std::size_t scored = 0;
    for (std::size_t f : order) {
      if (scored == mtry_) break;
      column_.clear();
      for (std::size_t k = begin; k < end; ++k) column_.push_back({data_.at(rows_[k], f), data_.labels[rows_[k]]});
      std::sort(column_.begin(), column_.end());
      if (column_.front().first == column_.back().first) continue;
      ++scored;

      std::array<std::size_t, 2> left{};
      for (std::size_t k = 0; k + 1 < column_.size(); ++k) {
        ++left[static_cast<std::size_t>(column_[k].second)];
        if (column_[k].first == column_[k + 1].first) continue;
        const std::array<std::size_t, 2> right{counts[0] - left[0], counts[1] - left[1]};
        const double nl = static_cast<double>(k + 1);
        const double impurity = (nl * gini_impurity(left) + (n - nl) * gini_impurity(right)) / n;
        if (!best.valid || impurity < best.impurity) {
          double thr = column_[k].first + (column_[k + 1].first - column_[k].first) / 2.0;
          if (!(thr < column_[k + 1].first)) thr = column_[k].first;
          best = {f, thr, impurity, true};
        }
      }
    }
    return best;
  }

  const Matrix& data_;
  const ForestHyperparams& hp_;
  std::size_t mtry_;
  std::vector<std::size_t> rows_;
  std::vector<TreeNode> nodes_;
  std::vector<std::pair<double, int>> column_;
  std::size_t splits_checked_ = 0;
};

}  // namespace

TrainedForest fit(std::span<const Sample> samples, const ForestHyperparams& hp, unsigned threads) {
  hp.validate();
  const Matrix data = to_matrix(samples);
  const std::size_t mtry = hp.resolved_features_per_split(data.cols);

  std::vector<std::optional<DecisionTree>> trees(hp.n_trees);
  std::vector<std::size_t> checked(hp.n_trees, 0);
  parallel_for(hp.n_trees, threads, [&](std::size_t t) {
    const std::uint64_t seed = tree_seed(hp, t);
    TreeBuilder builder(data, hp, mtry);
    trees[t] = builder.build(bootstrap_indices(seed, data.labels.size()), mix_seed(seed, 0xB007));
    checked[t] = builder.splits_checked();
  });

  TrainedForest forest;
  forest.feature_count = data.cols;
  forest.hyperparams = hp;
  forest.n_train = samples.size();
  forest.trees.reserve(hp.n_trees);
  for (auto& t : trees) forest.trees.push_back(std::move(*t));
  forest.splits_checked = std::accumulate(checked.begin(), checked.end(), std::size_t{0});
  return forest;
}

double predict_proba(const TrainedForest& forest, std::span<const double> features) {
  if (features.size() != forest.feature_count) {
    throw Error(Errc::ShapeMismatch, "expected " + std::to_string(forest.feature_count) + " features, got " +
                                         std::to_string(features.size()));
  }
  if (forest.trees.empty()) throw Error(Errc::InvalidArgument, "forest has no trees");
  std::size_t votes = 0;
  for (const auto& tree : forest.trees) votes += static_cast<std::size_t>(tree.predict(features));
  return static_cast<double>(votes) / static_cast<double>(forest.trees.size());
}

int predict(const TrainedForest& forest, std::span<const double> features) {
  return predict_proba(forest, features) >= 0.5 ? 1 : 0;
}

namespace {

constexpr const char* kForestFormat = "pttseize-forest";
constexpr int kForestVersion = 1;

json hyperparams_json(const ForestHyperparams& hp) {
  return {{"n_trees", hp.n_trees},
          {"max_depth", hp.max_depth},
          {"min_samples_split", hp.min_samples_split},
          {"features_per_split", hp.features_per_split},
          {"seed", hp.seed}};
}

}  // namespace

std::string forest_to_json(const TrainedForest& forest) {
  json trees = json::array();
  for (const auto& tree : forest.trees) {
    json nodes = json::array();
    for (const auto& node : tree.nodes()) {
      if (node.is_leaf()) {
        nodes.push_back({{"leaf", true}, {"class_counts", node.class_counts}});
      } else {
        nodes.push_back(
            {{"feature", node.feature}, {"threshold", node.threshold}, {"left", node.left}, {"right", node.right}});
      }
    }
    trees.push_back(std::move(nodes));
  }
  const json j = {{"format", kForestFormat},
                  {"version", kForestVersion},
                  {"feature_count", forest.feature_count},
                  {"n_train", forest.n_train},
                  {"hyperparams", hyperparams_json(forest.hyperparams)},
                  {"trees", std::move(trees)}};
  return j.dump() + "\n";
}

TrainedForest forest_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != kForestFormat || j.at("version").get<int>() != kForestVersion) {
      throw Error(Errc::Parse, "unsupported model format/version");
    }
    TrainedForest forest;
    forest.feature_count = j.at("feature_count").get<std::size_t>();
    forest.n_train = j.at("n_train").get<std::size_t>();
    const auto& hp = j.at("hyperparams");
    forest.hyperparams.n_trees = hp.at("n_trees").get<std::size_t>();
    forest.hyperparams.max_depth = hp.at("max_depth").get<std::size_t>();
    forest.hyperparams.min_samples_split = hp.at("min_samples_split").get<std::size_t>();
    forest.hyperparams.features_per_split = hp.at("features_per_split").get<std::size_t>();
    forest.hyperparams.seed = hp.at("seed").get<std::uint64_t>();
    for (const auto& tj : j.at("trees")) {
      std::vector<TreeNode> nodes;
      for (const auto& nj : tj) {
        TreeNode node;
        if (nj.value("leaf", false)) {
          node.class_counts = nj.at("class_counts").get<std::array<std::size_t, 2>>();
        } else {
          node.feature = nj.at("feature").get<int>();
          if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= forest.feature_count) {
            throw Error(Errc::Parse, "node feature index out of range");
          }
          node.threshold = nj.at("threshold").get<double>();
          node.left = nj.at("left").get<std::int32_t>();
          node.right = nj.at("right").get<std::int32_t>();
        }
        nodes.push_back(node);
      }
      forest.trees.emplace_back(std::move(nodes));
    }
    return forest;
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, std::string("model: ") + e.what());
  }
}

void save_forest(const std::filesystem::path& path, const TrainedForest& forest) {
  write_text_file(path, forest_to_json(forest));
}

TrainedForest load_forest(const std::filesystem::path& path) { return forest_from_json(read_text_file(path)); }

std::vector<int> stratified_folds(std::span<const int> labels, std::size_t n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw Error(Errc::InvalidArgument, "need at least 2 folds");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] != 0 ? 1 : 0].push_back(i);
  std::vector<int> fold(labels.size(), 0);
  std::size_t counter = 0;
  for (int cls : {1, 0}) {
    auto& members = by_class[static_cast<std::size_t>(cls)];
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(cls)));
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t i : members) fold[i] = static_cast<int>(counter++ % n_folds);
  }
  return fold;
}

namespace {

MetricSummary summary_of(const std::vector<ConfusionMetrics>& folds, bool stddev, const MetricSummary& mean) {
  MetricSummary s;
  const double n = static_cast<double>(folds.size());
  auto acc = [&](auto field, double centre) {
    double v = 0.0;
    for (const auto& f : folds) {
      const double x = f.*field;
      v += stddev ? (x - centre) * (x - centre) : x;
    }
    if (!stddev) return v / n;
    return folds.size() > 1 ? std::sqrt(v / (n - 1.0)) : 0.0;
  };
  s.sensitivity = acc(&ConfusionMetrics::sensitivity, mean.sensitivity);
  s.specificity = acc(&ConfusionMetrics::specificity, mean.specificity);
  s.precision = acc(&ConfusionMetrics::precision, mean.precision);
  s.f1 = acc(&ConfusionMetrics::f1, mean.f1);
  return s;
}

}  // namespace

CrossValidationResult cross_validate(std::span<const Sample> samples, const ForestHyperparams& hp,
                                     std::size_t n_folds, std::uint64_t seed, unsigned threads) {
  std::vector<int> labels;
  labels.reserve(samples.size());
  for (const auto& s : samples) labels.push_back(s.label != 0 ? 1 : 0);
  const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (pos < n_folds || labels.size() - pos < n_folds) {
    throw Error(Errc::TooFewPerClass, "each class needs at least " + std::to_string(n_folds) + " samples");
  }

  CrossValidationResult cv;
  cv.fold_of = stratified_folds(labels, n_folds, seed);
  cv.oof_proba.assign(samples.size(), 0.0);
  for (std::size_t f = 0; f < n_folds; ++f) {
    std::vector<Sample> train;
    std::vector<std::size_t> held;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (cv.fold_of[i] == static_cast<int>(f)) held.push_back(i);
      else train.push_back(samples[i]);
    }
    const TrainedForest forest = fit(train, hp, threads);
    std::vector<int> truth, pred;
    for (std::size_t i : held) {
      cv.oof_proba[i] = predict_proba(forest, samples[i].features);
      truth.push_back(labels[i]);
      pred.push_back(cv.oof_proba[i] >= 0.5 ? 1 : 0);
    }
    cv.folds.push_back(confusion_metrics(truth, pred));
  }
  cv.mean = summary_of(cv.folds, false, {});
  cv.stddev = summary_of(cv.folds, true, cv.mean);
  return cv;
}

SearchResult random_search(std::span<const Sample> samples, std::size_t n_draws, const SearchRanges& ranges,
                           std::uint64_t seed, std::size_t n_folds, const ForestHyperparams& base,
                           unsigned threads) {
  if (n_draws < 1) throw Error(Errc::InvalidArgument, "search needs at least one draw");
  for (const IntRange* r : {&ranges.n_trees, &ranges.max_depth, &ranges.min_samples_split}) {
    if (r->lo > r->hi) throw Error(Errc::EmptyRange, "search range is empty");
  }
  std::mt19937_64 rng(seed);
  auto draw = [&](const IntRange& r) {
    return static_cast<std::size_t>(std::uniform_int_distribution<std::int64_t>(r.lo, r.hi)(rng));
  };

  SearchResult result;
  for (std::size_t d = 0; d < n_draws; ++d) {
    ForestHyperparams hp = base;
    hp.n_trees = draw(ranges.n_trees);
    hp.max_depth = draw(ranges.max_depth);
    hp.min_samples_split = draw(ranges.min_samples_split);
    hp.validate();
    const auto cv = cross_validate(samples, hp, n_folds, seed, threads);
    result.draws.push_back({hp, cv.mean, cv.stddev});
    if (d == 0 || cv.mean.f1 > result.draws[result.best_index].mean.f1) result.best_index = d;
  }
  result.best = result.draws[result.best_index].hp;
  return result;
}

}  // namespace pttseize
