#pragma once

#include <cstdint>
#include <vector>

#include "agrisense/learn/linear.hpp"  // Matrix

namespace agrisense::learn {

struct ForestHyper {
  int n_trees = 100;
  int max_depth = -1;  // -1 = unlimited
  bool bootstrap = true;
  std::uint64_t seed = 1;
};

struct TreeNode {
  int feature = -1;       // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<int> class_counts;  // leaf only
};

struct DecisionTree {
  std::vector<TreeNode> nodes;
  int predict(const std::vector<double>& x) const;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  int n_classes = 0;
  int dim = 0;
  ForestHyper hyper;
};

// Bagged Gini trees: bootstrap resample per tree, ceil(sqrt(d)) random
// candidate features per node, best midpoint split, grown until pure /
// max_depth / fewer than 2 samples. Per-tree RNG streams derive from
// (seed, tree index), so results do not depend on build order.
ForestModel fit_forest(const Matrix& x, const std::vector<int>& y, const ForestHyper& hyper = {});

// Majority vote over trees, ties to the lowest class index.
int predict_forest(const ForestModel& model, const std::vector<double>& x);
std::vector<int> predict_forest(const ForestModel& model, const Matrix& x);

}  // namespace agrisense::learn
