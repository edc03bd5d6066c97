#include "agrisense/learn/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "agrisense/rng.hpp"

namespace agrisense::learn {

namespace {

int class_count(const std::vector<int>& y) {
  int n_classes = 0;
  for (int label : y) {
    if (label < 0) throw std::invalid_argument("labels must be non-negative");
    n_classes = std::max(n_classes, label + 1);
  }
  std::vector<bool> seen(static_cast<std::size_t>(n_classes), false);
  for (int label : y) seen[static_cast<std::size_t>(label)] = true;
  int distinct = 0;
  for (bool s : seen) distinct += s;
  if (distinct < 2) throw std::invalid_argument("fit requires at least 2 classes present");
  return n_classes;
}

void check_matrix(const Matrix& x, const std::vector<int>& y) {
  if (x.empty() || x.size() != y.size())
    throw std::invalid_argument("feature matrix and labels must be non-empty and aligned");
  for (const auto& row : x)
    if (row.size() != x.front().size()) throw std::invalid_argument("ragged feature matrix");
}

}  // namespace

double LinearModel::score(int c, const std::vector<double>& x) const {
  const double* w = weights.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(dim);
  double s = bias[static_cast<std::size_t>(c)];
  for (int j = 0; j < dim; ++j) s += w[j] * x[static_cast<std::size_t>(j)];
  return s;
}

LinearModel fit_svm(const Matrix& x, const std::vector<int>& y, const LinearHyper& hyper) {
  check_matrix(x, y);
  const int n_classes = class_count(y);
  const int d = static_cast<int>(x.front().size());
  const std::size_t n = x.size();

  LinearModel model;
  model.kind = "svm";
  model.n_classes = n_classes;
  model.dim = d;
  model.hyper = hyper;
  model.weights.assign(static_cast<std::size_t>(n_classes) * static_cast<std::size_t>(d), 0.0);
  model.bias.assign(static_cast<std::size_t>(n_classes), 0.0);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int c = 0; c < n_classes; ++c) {
    double* w = model.weights.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(d);
    double& b = model.bias[static_cast<std::size_t>(c)];
    Rng rng(mix_seed(hyper.seed, static_cast<std::uint64_t>(c)));
    long t = 0;
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
      rng.shuffle(order);
      for (std::size_t idx : order) {
        ++t;
        const double eta = 1.0 / (hyper.lambda * static_cast<double>(t));
        const double target = y[idx] == c ? 1.0 : -1.0;
        const auto& xi = x[idx];
        double margin = b;
        for (int j = 0; j < d; ++j) margin += w[j] * xi[static_cast<std::size_t>(j)];
        margin *= target;
        const double shrink = 1.0 - eta * hyper.lambda;
        for (int j = 0; j < d; ++j) w[j] *= shrink;
        if (margin < 1.0) {
          for (int j = 0; j < d; ++j) w[j] += eta * target * xi[static_cast<std::size_t>(j)];
          b += eta * target;  // bias unregularized
        }
      }
    }
  }
  return model;
}

double logistic_loss_grad(const Matrix& x, const std::vector<int>& y, int n_classes,
                          double lambda, const std::vector<double>& params,
                          std::vector<double>* grad) {
  const std::size_t n = x.size();
  const int d = static_cast<int>(x.front().size());
  const std::size_t w_size = static_cast<std::size_t>(n_classes) * static_cast<std::size_t>(d);
  if (params.size() != w_size + static_cast<std::size_t>(n_classes))
    throw std::invalid_argument("logistic_loss_grad: parameter size mismatch");

  if (grad) grad->assign(params.size(), 0.0);
  double loss = 0.0;
  std::vector<double> logits(static_cast<std::size_t>(n_classes));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& xi = x[i];
    double max_logit = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < n_classes; ++c) {
      const double* w = params.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(d);
      double s = params[w_size + static_cast<std::size_t>(c)];
      for (int j = 0; j < d; ++j) s += w[j] * xi[static_cast<std::size_t>(j)];
      logits[static_cast<std::size_t>(c)] = s;
      max_logit = std::max(max_logit, s);
    }
    double denom = 0.0;
    for (int c = 0; c < n_classes; ++c)
      denom += std::exp(logits[static_cast<std::size_t>(c)] - max_logit);
    const double log_denom = std::log(denom) + max_logit;
    loss += log_denom - logits[static_cast<std::size_t>(y[i])];

    if (grad) {
      for (int c = 0; c < n_classes; ++c) {
        const double p = std::exp(logits[static_cast<std::size_t>(c)] - log_denom);
        const double delta = (p - (y[i] == c ? 1.0 : 0.0)) / static_cast<double>(n);
        double* gw = grad->data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(d);
        for (int j = 0; j < d; ++j) gw[j] += delta * xi[static_cast<std::size_t>(j)];
        (*grad)[w_size + static_cast<std::size_t>(c)] += delta;
      }
    }
  }
  loss /= static_cast<double>(n);

  double reg = 0.0;
  for (std::size_t j = 0; j < w_size; ++j) reg += params[j] * params[j];
  loss += 0.5 * lambda * reg;
  if (grad)
    for (std::size_t j = 0; j < w_size; ++j) (*grad)[j] += lambda * params[j];
  return loss;
}

LinearModel fit_logistic(const Matrix& x, const std::vector<int>& y, const LinearHyper& hyper) {
  check_matrix(x, y);
  const int n_classes = class_count(y);
  const int d = static_cast<int>(x.front().size());

  LinearModel model;
  model.kind = "logistic";
  model.n_classes = n_classes;
  model.dim = d;
  model.hyper = hyper;

  std::vector<double> params(
      static_cast<std::size_t>(n_classes) * static_cast<std::size_t>(d) +
          static_cast<std::size_t>(n_classes),
      0.0);
  std::vector<double> grad;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    logistic_loss_grad(x, y, n_classes, hyper.lambda, params, &grad);
    for (std::size_t j = 0; j < params.size(); ++j) params[j] -= hyper.lr * grad[j];
  }

  const std::size_t w_size = static_cast<std::size_t>(n_classes) * static_cast<std::size_t>(d);
  model.weights.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(w_size));
  model.bias.assign(params.begin() + static_cast<std::ptrdiff_t>(w_size), params.end());
  return model;
}

int predict_linear(const LinearModel& model, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != model.dim)
    throw std::invalid_argument("predict_linear: dimension mismatch");
  int best = 0;
  double best_score = model.score(0, x);
  for (int c = 1; c < model.n_classes; ++c) {
    const double s = model.score(c, x);
    if (s > best_score) {
      best_score = s;
      best = c;
    }
  }
  return best;
}

std::vector<int> predict_linear(const LinearModel& model, const Matrix& x) {
  std::vector<int> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(predict_linear(model, row));
  return out;
}

}  // namespace agrisense::learn
