#include "agrisense/learn/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace agrisense::learn {

KnnModel fit_knn(const Matrix& x, const std::vector<int>& y, int k) {
  if (x.empty() || x.size() != y.size())
    throw std::invalid_argument("fit_knn: empty or misaligned training data");
  if (k < 1 || static_cast<std::size_t>(k) > x.size())
    throw std::invalid_argument("fit_knn: k must be in [1, n_train]");
  KnnModel model;
  model.train_x = x;
  model.train_y = y;
  model.k = k;
  int n_classes = 0;
  for (int label : y) {
    if (label < 0) throw std::invalid_argument("fit_knn: labels must be non-negative");
    n_classes = std::max(n_classes, label + 1);
  }
  model.n_classes = n_classes;
  return model;
}

int predict_knn(const KnnModel& model, const std::vector<double>& x) {
  const std::size_t n = model.train_x.size();
  if (x.size() != model.train_x.front().size())
    throw std::invalid_argument("predict_knn: dimension mismatch");

  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d2 = 0.0;
    const auto& t = model.train_x[i];
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = x[j] - t[j];
      d2 += diff * diff;
    }
    dist[i] = {d2, i};
  }
  const std::size_t k = static_cast<std::size_t>(model.k);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

  std::vector<int> votes(static_cast<std::size_t>(model.n_classes), 0);
  std::vector<double> dist_sum(static_cast<std::size_t>(model.n_classes), 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const int label = model.train_y[dist[i].second];
    ++votes[static_cast<std::size_t>(label)];
    dist_sum[static_cast<std::size_t>(label)] += std::sqrt(dist[i].first);
  }

  int best = -1;
  double best_mean = std::numeric_limits<double>::infinity();
  int max_votes = 0;
  for (int c = 0; c < model.n_classes; ++c) max_votes = std::max(max_votes, votes[static_cast<std::size_t>(c)]);
  for (int c = 0; c < model.n_classes; ++c) {
    if (votes[static_cast<std::size_t>(c)] != max_votes) continue;
    const double mean = dist_sum[static_cast<std::size_t>(c)] / max_votes;
    if (mean < best_mean - 1e-12 || best < 0) {
      best_mean = mean;
      best = c;
    }
  }
  return best;
}

std::vector<int> predict_knn(const KnnModel& model, const Matrix& x) {
  std::vector<int> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(predict_knn(model, row));
  return out;
}

}  // namespace agrisense::learn
