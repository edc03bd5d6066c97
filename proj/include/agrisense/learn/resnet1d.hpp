#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "agrisense/domain.hpp"
#include "agrisense/learn/linear.hpp"  // Matrix

namespace agrisense::learn {

// Small 1-D residual network: `blocks` residual units, each
// conv(k) -> ReLU -> conv(k) summed with an identity or 1x1-projected skip,
// then ReLU; global average pooling; linear softmax head. No batch
// normalization, so analytic gradients stay finite-difference checkable.
struct ResNet1dConfig {
  int in_channels = 2;
  int length = 48;
  int blocks = 3;
  int filters = 16;
  int kernel = 5;
  int n_classes = 2;

  int epochs = 12;
  int batch_size = 32;
  double lr = 0.01;
  double momentum = 0.9;
  std::uint64_t seed = 1;
};

// Core network over flat (channel-major, channels * length) inputs. All
// parameters live in one flat vector so optimizer and finite-difference
// checks share the same layout.
class ResNet1d {
 public:
  explicit ResNet1d(const ResNet1dConfig& cfg);

  const ResNet1dConfig& config() const { return cfg_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // Softmax probabilities for one input (size in_channels * length).
  std::vector<double> forward_probs(const double* x) const;
  int predict_one(const double* x) const;

  // Mean cross-entropy over a batch and its gradient w.r.t. params.
  double loss_and_grad(const std::vector<const double*>& batch, const std::vector<int>& labels,
                       std::vector<double>* grad) const;

  // Seeded minibatch SGD with momentum; records the mean loss per epoch.
  void fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y);
  const std::vector<double>& epoch_losses() const { return losses_; }

 private:
  struct Workspace;
  double forward_backward(const double* x, int label, Workspace& ws, std::vector<double>* grad) const;

  ResNet1dConfig cfg_;
  std::vector<double> params_;
  std::vector<double> losses_;

  // Parameter layout offsets per block: conv1 w/b, conv2 w/b, optional proj w.
  struct BlockOffsets {
    std::size_t conv1_w, conv1_b, conv2_w, conv2_b, proj_w;
    bool has_proj;
    int in_ch;
  };
  std::vector<BlockOffsets> block_offsets_;
  std::size_t head_w_ = 0, head_b_ = 0;
};

// Window-level wrapper holding the trained net plus the per-channel z-score
// statistics computed on the training set.
struct ResNet1dModel {
  ResNet1dConfig config;
  std::vector<double> params;
  std::array<double, kWindowChannels> channel_mean{};
  std::array<double, kWindowChannels> channel_std{};
  std::vector<double> epoch_losses;
};

// Trains on 48x2 daily windows with integer labels (any >= 2 classes).
ResNet1dModel fit_resnet1d(const std::vector<DailyWindow>& windows, const std::vector<int>& y,
                           const ResNet1dConfig& cfg = {});

int predict_resnet1d(const ResNet1dModel& model, const DailyWindow& w);
std::vector<int> predict_resnet1d(const ResNet1dModel& model,
                                  const std::vector<DailyWindow>& windows);
std::vector<double> resnet1d_probs(const ResNet1dModel& model, const DailyWindow& w);

// Channel-major standardized tensor for one window.
std::vector<double> standardize_window(const DailyWindow& w,
                                       const std::array<double, kWindowChannels>& mean,
                                       const std::array<double, kWindowChannels>& stddev);

}  // namespace agrisense::learn
