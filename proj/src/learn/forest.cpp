#include "agrisense/learn/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "agrisense/rng.hpp"

namespace agrisense::learn {

namespace {

struct Builder {
  const Matrix& x;
  const std::vector<int>& y;
  int n_classes;
  int n_features_per_split;
  int max_depth;
  Rng rng;
  std::vector<TreeNode> nodes;

  int build(std::vector<std::size_t>& indices, int depth) {
    std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
    for (std::size_t i : indices) ++counts[static_cast<std::size_t>(y[i])];
    const bool pure =
        std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) <= 1;

    if (pure || indices.size() < 2 || (max_depth >= 0 && depth >= max_depth))
      return make_leaf(std::move(counts));

    // Sample candidate features without replacement.
    const int d = static_cast<int>(x.front().size());
    std::vector<int> features(static_cast<std::size_t>(d));
    std::iota(features.begin(), features.end(), 0);
    for (int i = 0; i < n_features_per_split; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) +
          static_cast<std::size_t>(rng.bounded(static_cast<std::uint64_t>(d - i)));
      std::swap(features[static_cast<std::size_t>(i)], features[j]);
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, int>> column(indices.size());

    for (int fi = 0; fi < n_features_per_split; ++fi) {
      const int f = features[static_cast<std::size_t>(fi)];
      for (std::size_t i = 0; i < indices.size(); ++i)
        column[i] = {x[indices[i]][static_cast<std::size_t>(f)], y[indices[i]]};
      std::sort(column.begin(), column.end());

      std::vector<int> left_counts(static_cast<std::size_t>(n_classes), 0);
      std::vector<int> right_counts = counts;
      const double total = static_cast<double>(indices.size());
      std::size_t n_left = 0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        ++left_counts[static_cast<std::size_t>(column[i].second)];
        --right_counts[static_cast<std::size_t>(column[i].second)];
        ++n_left;
        if (column[i].first == column[i + 1].first) continue;  // no distinct midpoint

        const double gini_l = gini(left_counts, n_left);
        const double gini_r = gini(right_counts, indices.size() - n_left);
        const double impurity = (static_cast<double>(n_left) * gini_l +
                                 static_cast<double>(indices.size() - n_left) * gini_r) /
                                total;
        if (impurity < best_impurity - 1e-15) {
          best_impurity = impurity;
          best_feature = f;
          best_threshold = column[i].first + 0.5 * (column[i + 1].first - column[i].first);
        }
      }
    }

    if (best_feature < 0) return make_leaf(std::move(counts));  // all candidates constant

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : indices) {
      if (x[i][static_cast<std::size_t>(best_feature)] < best_threshold)
        left_idx.push_back(i);
      else
        right_idx.push_back(i);
    }
    if (left_idx.empty() || right_idx.empty()) return make_leaf(std::move(counts));

    const int node_index = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[static_cast<std::size_t>(node_index)].feature = best_feature;
    nodes[static_cast<std::size_t>(node_index)].threshold = best_threshold;
    const int left = build(left_idx, depth + 1);
    const int right = build(right_idx, depth + 1);
    nodes[static_cast<std::size_t>(node_index)].left = left;
    nodes[static_cast<std::size_t>(node_index)].right = right;
    return node_index;
  }

  int make_leaf(std::vector<int> counts) {
    const int node_index = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[static_cast<std::size_t>(node_index)].class_counts = std::move(counts);
    return node_index;
  }

  static double gini(const std::vector<int>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double sum_sq = 0.0;
    for (int c : counts) {
      const double p = static_cast<double>(c) / static_cast<double>(total);
      sum_sq += p * p;
    }
    return 1.0 - sum_sq;
  }
};

}  // namespace

int DecisionTree::predict(const std::vector<double>& x) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const TreeNode& n = nodes[static_cast<std::size_t>(node)];
    node = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
  }
  const auto& counts = nodes[static_cast<std::size_t>(node)].class_counts;
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  return best;
}

ForestModel fit_forest(const Matrix& x, const std::vector<int>& y, const ForestHyper& hyper) {
  if (x.empty() || x.size() != y.size())
    throw std::invalid_argument("fit_forest: empty or misaligned training data");
  if (hyper.n_trees < 1) throw std::invalid_argument("fit_forest: n_trees must be >= 1");
  int n_classes = 0;
  for (int label : y) {
    if (label < 0) throw std::invalid_argument("fit_forest: labels must be non-negative");
    n_classes = std::max(n_classes, label + 1);
  }

  ForestModel model;
  model.n_classes = n_classes;
  model.dim = static_cast<int>(x.front().size());
  model.hyper = hyper;
  model.trees.resize(static_cast<std::size_t>(hyper.n_trees));

  const int m = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(model.dim))));
  for (int t = 0; t < hyper.n_trees; ++t) {
    Rng rng(mix_seed(hyper.seed, static_cast<std::uint64_t>(t)));
    std::vector<std::size_t> indices(x.size());
    if (hyper.bootstrap) {
      for (auto& i : indices) i = static_cast<std::size_t>(rng.bounded(x.size()));
    } else {
      std::iota(indices.begin(), indices.end(), 0);
    }
    Builder builder{x, y, n_classes, m, hyper.max_depth, rng, {}};
    builder.build(indices, 0);
    model.trees[static_cast<std::size_t>(t)].nodes = std::move(builder.nodes);
  }
  return model;
}

int predict_forest(const ForestModel& model, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != model.dim)
    throw std::invalid_argument("predict_forest: dimension mismatch");
  std::vector<int> votes(static_cast<std::size_t>(model.n_classes), 0);
  for (const auto& tree : model.trees) ++votes[static_cast<std::size_t>(tree.predict(x))];
  int best = 0;
  for (int c = 1; c < model.n_classes; ++c)
    if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
  return best;
}

std::vector<int> predict_forest(const ForestModel& model, const Matrix& x) {
  std::vector<int> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(predict_forest(model, row));
  return out;
}

}  // namespace agrisense::learn
