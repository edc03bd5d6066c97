#pragma once

#include <cstdint>
#include <vector>

#include "agrisense/learn/linear.hpp"  // Matrix

namespace agrisense::learn {

struct KnnModel {
  Matrix train_x;
  std::vector<int> train_y;
  int k = 5;
  int n_classes = 0;
};

KnnModel fit_knn(const Matrix& x, const std::vector<int>& y, int k = 5);

// Majority vote of the k Euclidean-nearest training points; vote ties break
// by smallest mean distance, then lowest class index. Equal distances rank
// by training index, so predictions are fully deterministic.
int predict_knn(const KnnModel& model, const std::vector<double>& x);
std::vector<int> predict_knn(const KnnModel& model, const Matrix& x);

}  // namespace agrisense::learn
