#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace agrisense::learn {

using Matrix = std::vector<std::vector<double>>;

struct LinearHyper {
  double lambda = 1e-3;   // L2 regularization
  int epochs = 100;
  double lr = 0.5;        // logistic only; Pegasos uses 1/(lambda t)
  std::uint64_t seed = 1;
};

// One-vs-rest linear scorer: score_c = w_c . x + b_c; argmax prediction,
// ties to the lowest class index.
struct LinearModel {
  std::string kind;        // "svm" or "logistic"
  int n_classes = 0;
  int dim = 0;
  std::vector<double> weights;  // n_classes * dim, row-major
  std::vector<double> bias;     // n_classes
  LinearHyper hyper;

  double score(int c, const std::vector<double>& x) const;
};

// L2-regularized hinge loss minimized by the Pegasos stochastic
// subgradient schedule (step 1/(lambda t)), one binary problem per class.
LinearModel fit_svm(const Matrix& x, const std::vector<int>& y, const LinearHyper& hyper = {});

// Multinomial softmax cross-entropy by seeded full-batch gradient descent.
LinearModel fit_logistic(const Matrix& x, const std::vector<int>& y,
                         const LinearHyper& hyper = {});

int predict_linear(const LinearModel& model, const std::vector<double>& x);
std::vector<int> predict_linear(const LinearModel& model, const Matrix& x);

// Mean cross-entropy (plus L2 term) and its analytic gradient with respect
// to the flattened (weights, bias) vector; used directly by training and by
// the finite-difference oracle in tests.
double logistic_loss_grad(const Matrix& x, const std::vector<int>& y, int n_classes,
                          double lambda, const std::vector<double>& params,
                          std::vector<double>* grad);

}  // namespace agrisense::learn
