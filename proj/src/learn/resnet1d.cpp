#include "agrisense/learn/resnet1d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "agrisense/rng.hpp"

namespace agrisense::learn {

namespace {

// out[f, i] += sum_{c,k} w[f,c,k] * in[c, i + k - pad]
void conv_forward(const double* in, int in_ch, int len, const double* w, const double* b,
                  int out_ch, int kernel, double* out) {
  const int pad = kernel / 2;
  for (int f = 0; f < out_ch; ++f) {
    for (int i = 0; i < len; ++i) out[f * len + i] = b[f];
    for (int c = 0; c < in_ch; ++c) {
      const double* in_c = in + c * len;
      const double* w_fc = w + (f * in_ch + c) * kernel;
      double* out_f = out + f * len;
      for (int k = 0; k < kernel; ++k) {
        const double wk = w_fc[k];
        const int shift = k - pad;
        const int lo = std::max(0, -shift);
        const int hi = std::min(len, len - shift);
        for (int i = lo; i < hi; ++i) out_f[i] += wk * in_c[i + shift];
      }
    }
  }
}

// Accumulates dW, dB and (optionally) dIn for the convolution above.
void conv_backward(const double* in, int in_ch, int len, const double* w, int out_ch, int kernel,
                   const double* d_out, double* d_w, double* d_b, double* d_in) {
  const int pad = kernel / 2;
  for (int f = 0; f < out_ch; ++f) {
    const double* d_out_f = d_out + f * len;
    for (int i = 0; i < len; ++i) d_b[f] += d_out_f[i];
    for (int c = 0; c < in_ch; ++c) {
      const double* in_c = in + c * len;
      double* d_w_fc = d_w + (f * in_ch + c) * kernel;
      for (int k = 0; k < kernel; ++k) {
        const int shift = k - pad;
        const int lo = std::max(0, -shift);
        const int hi = std::min(len, len - shift);
        double acc = 0.0;
        for (int i = lo; i < hi; ++i) acc += d_out_f[i] * in_c[i + shift];
        d_w_fc[k] += acc;
      }
      if (d_in) {
        const double* w_fc = w + (f * in_ch + c) * kernel;
        double* d_in_c = d_in + c * len;
        for (int k = 0; k < kernel; ++k) {
          const double wk = w_fc[k];
          const int shift = k - pad;
          const int lo = std::max(0, -shift);
          const int hi = std::min(len, len - shift);
          for (int i = lo; i < hi; ++i) d_in_c[i + shift] += wk * d_out_f[i];
        }
      }
    }
  }
}

}  // namespace

struct ResNet1d::Workspace {
  // Per block: input, pre-ReLU conv1, post-ReLU conv1, conv2 output,
  // skip output, pre-ReLU sum. Sized lazily.
  std::vector<std::vector<double>> block_in, conv1_pre, conv1_post, conv2_out, skip_out, sum_pre;
  std::vector<double> pooled, logits, probs;
  std::vector<double> d_a, d_b;  // scratch activation gradients
};

ResNet1d::ResNet1d(const ResNet1dConfig& cfg) : cfg_(cfg) {
  if (cfg.in_channels < 1 || cfg.length < 1 || cfg.blocks < 1 || cfg.filters < 1 ||
      cfg.kernel < 1 || cfg.kernel % 2 == 0 || cfg.n_classes < 2)
    throw std::invalid_argument("resnet1d: invalid architecture configuration");

  std::size_t offset = 0;
  const int kf = cfg.filters;
  for (int b = 0; b < cfg.blocks; ++b) {
    BlockOffsets bo{};
    bo.in_ch = b == 0 ? cfg.in_channels : kf;
    bo.conv1_w = offset;
    offset += static_cast<std::size_t>(kf * bo.in_ch * cfg.kernel);
    bo.conv1_b = offset;
    offset += static_cast<std::size_t>(kf);
    bo.conv2_w = offset;
    offset += static_cast<std::size_t>(kf * kf * cfg.kernel);
    bo.conv2_b = offset;
    offset += static_cast<std::size_t>(kf);
    bo.has_proj = bo.in_ch != kf;
    bo.proj_w = offset;
    if (bo.has_proj) offset += static_cast<std::size_t>(kf * bo.in_ch);
    block_offsets_.push_back(bo);
  }
  head_w_ = offset;
  offset += static_cast<std::size_t>(cfg.n_classes * kf);
  head_b_ = offset;
  offset += static_cast<std::size_t>(cfg.n_classes);

  params_.assign(offset, 0.0);
  Rng rng(mix_seed(cfg.seed, "resnet1d/init"));
  for (const auto& bo : block_offsets_) {
    const double s1 = std::sqrt(2.0 / (bo.in_ch * cfg.kernel));
    for (int i = 0; i < kf * bo.in_ch * cfg.kernel; ++i)
      params_[bo.conv1_w + static_cast<std::size_t>(i)] = s1 * rng.next_normal();
    const double s2 = std::sqrt(2.0 / (kf * cfg.kernel));
    for (int i = 0; i < kf * kf * cfg.kernel; ++i)
      params_[bo.conv2_w + static_cast<std::size_t>(i)] = s2 * rng.next_normal();
    if (bo.has_proj) {
      const double sp = std::sqrt(1.0 / bo.in_ch);
      for (int i = 0; i < kf * bo.in_ch; ++i)
        params_[bo.proj_w + static_cast<std::size_t>(i)] = sp * rng.next_normal();
    }
  }
  const double sh = std::sqrt(1.0 / kf);
  for (int i = 0; i < cfg.n_classes * kf; ++i)
    params_[head_w_ + static_cast<std::size_t>(i)] = sh * rng.next_normal();
  // All biases stay zero, so an all-zero input yields uniform softmax.
}

double ResNet1d::forward_backward(const double* x, int label, Workspace& ws,
                                  std::vector<double>* grad) const {
  const int len = cfg_.length;
  const int kf = cfg_.filters;
  const int nb = cfg_.blocks;

  ws.block_in.resize(static_cast<std::size_t>(nb));
  ws.conv1_pre.resize(static_cast<std::size_t>(nb));
  ws.conv1_post.resize(static_cast<std::size_t>(nb));
  ws.conv2_out.resize(static_cast<std::size_t>(nb));
  ws.skip_out.resize(static_cast<std::size_t>(nb));
  ws.sum_pre.resize(static_cast<std::size_t>(nb));

  const double* current = x;
  int current_ch = cfg_.in_channels;
  std::vector<double> act;  // ReLU(sum) of the previous block
  for (int b = 0; b < nb; ++b) {
    const auto& bo = block_offsets_[static_cast<std::size_t>(b)];
    auto& in_buf = ws.block_in[static_cast<std::size_t>(b)];
    in_buf.assign(current, current + current_ch * len);

    auto& c1 = ws.conv1_pre[static_cast<std::size_t>(b)];
    c1.assign(static_cast<std::size_t>(kf * len), 0.0);
    conv_forward(in_buf.data(), current_ch, len, params_.data() + bo.conv1_w,
                 params_.data() + bo.conv1_b, kf, cfg_.kernel, c1.data());

    auto& c1r = ws.conv1_post[static_cast<std::size_t>(b)];
    c1r.resize(c1.size());
    for (std::size_t i = 0; i < c1.size(); ++i) c1r[i] = std::max(0.0, c1[i]);

    auto& c2 = ws.conv2_out[static_cast<std::size_t>(b)];
    c2.assign(static_cast<std::size_t>(kf * len), 0.0);
    conv_forward(c1r.data(), kf, len, params_.data() + bo.conv2_w, params_.data() + bo.conv2_b,
                 kf, cfg_.kernel, c2.data());

    auto& skip = ws.skip_out[static_cast<std::size_t>(b)];
    if (bo.has_proj) {
      skip.assign(static_cast<std::size_t>(kf * len), 0.0);
      const double* pw = params_.data() + bo.proj_w;
      for (int f = 0; f < kf; ++f)
        for (int c = 0; c < current_ch; ++c) {
          const double w = pw[f * current_ch + c];
          const double* in_c = in_buf.data() + c * len;
          double* out_f = skip.data() + f * len;
          for (int i = 0; i < len; ++i) out_f[i] += w * in_c[i];
        }
    } else {
      skip = in_buf;
    }

    auto& sum = ws.sum_pre[static_cast<std::size_t>(b)];
    sum.resize(c2.size());
    for (std::size_t i = 0; i < c2.size(); ++i) sum[i] = c2[i] + skip[i];

    act.resize(sum.size());
    for (std::size_t i = 0; i < sum.size(); ++i) act[i] = std::max(0.0, sum[i]);
    current = act.data();
    current_ch = kf;
  }

  ws.pooled.assign(static_cast<std::size_t>(kf), 0.0);
  const auto& last = ws.sum_pre[static_cast<std::size_t>(nb - 1)];
  for (int f = 0; f < kf; ++f) {
    double acc = 0.0;
    for (int i = 0; i < len; ++i) acc += std::max(0.0, last[static_cast<std::size_t>(f * len + i)]);
    ws.pooled[static_cast<std::size_t>(f)] = acc / len;
  }

  ws.logits.assign(static_cast<std::size_t>(cfg_.n_classes), 0.0);
  for (int c = 0; c < cfg_.n_classes; ++c) {
    double s = params_[head_b_ + static_cast<std::size_t>(c)];
    for (int f = 0; f < kf; ++f)
      s += params_[head_w_ + static_cast<std::size_t>(c * kf + f)] *
           ws.pooled[static_cast<std::size_t>(f)];
    ws.logits[static_cast<std::size_t>(c)] = s;
  }

  double max_logit = ws.logits[0];
  for (double v : ws.logits) max_logit = std::max(max_logit, v);
  double denom = 0.0;
  ws.probs.assign(ws.logits.size(), 0.0);
  for (std::size_t c = 0; c < ws.logits.size(); ++c) {
    ws.probs[c] = std::exp(ws.logits[c] - max_logit);
    denom += ws.probs[c];
  }
  for (auto& p : ws.probs) p /= denom;
  const double loss = -std::log(std::max(ws.probs[static_cast<std::size_t>(label)], 1e-300));

  if (!grad) return loss;

  // ---- backward ----
  std::vector<double>& g = *grad;
  ws.d_a.assign(static_cast<std::size_t>(kf * len), 0.0);

  // Head.
  std::vector<double> d_pooled(static_cast<std::size_t>(kf), 0.0);
  for (int c = 0; c < cfg_.n_classes; ++c) {
    const double d_logit = ws.probs[static_cast<std::size_t>(c)] - (c == label ? 1.0 : 0.0);
    g[head_b_ + static_cast<std::size_t>(c)] += d_logit;
    for (int f = 0; f < kf; ++f) {
      g[head_w_ + static_cast<std::size_t>(c * kf + f)] +=
          d_logit * ws.pooled[static_cast<std::size_t>(f)];
      d_pooled[static_cast<std::size_t>(f)] +=
          d_logit * params_[head_w_ + static_cast<std::size_t>(c * kf + f)];
    }
  }

  // GAP + final ReLU.
  for (int f = 0; f < kf; ++f) {
    const double dv = d_pooled[static_cast<std::size_t>(f)] / len;
    for (int i = 0; i < len; ++i) {
      const std::size_t idx = static_cast<std::size_t>(f * len + i);
      ws.d_a[idx] = last[idx] > 0.0 ? dv : 0.0;
    }
  }

  // Blocks, last to first. d_a holds dLoss/d(sum_pre[b]) on entry.
  for (int b = nb - 1; b >= 0; --b) {
    const auto& bo = block_offsets_[static_cast<std::size_t>(b)];
    const int in_ch = bo.in_ch;
    const auto& in_buf = ws.block_in[static_cast<std::size_t>(b)];

    // conv2 path.
    std::vector<double> d_c1r(static_cast<std::size_t>(kf * len), 0.0);
    conv_backward(ws.conv1_post[static_cast<std::size_t>(b)].data(), kf, len,
                  params_.data() + bo.conv2_w, kf, cfg_.kernel, ws.d_a.data(),
                  g.data() + bo.conv2_w, g.data() + bo.conv2_b, d_c1r.data());

    // ReLU after conv1.
    const auto& c1 = ws.conv1_pre[static_cast<std::size_t>(b)];
    for (std::size_t i = 0; i < d_c1r.size(); ++i)
      if (c1[i] <= 0.0) d_c1r[i] = 0.0;

    // conv1 path -> gradient w.r.t. block input.
    std::vector<double> d_in(static_cast<std::size_t>(in_ch * len), 0.0);
    conv_backward(in_buf.data(), in_ch, len, params_.data() + bo.conv1_w, kf, cfg_.kernel,
                  d_c1r.data(), g.data() + bo.conv1_w, g.data() + bo.conv1_b, d_in.data());

    // Skip path.
    if (bo.has_proj) {
      const double* pw = params_.data() + bo.proj_w;
      double* gp = g.data() + bo.proj_w;
      for (int f = 0; f < kf; ++f) {
        const double* d_out_f = ws.d_a.data() + f * len;
        for (int c = 0; c < in_ch; ++c) {
          const double* in_c = in_buf.data() + c * len;
          double* d_in_c = d_in.data() + c * len;
          double acc = 0.0;
          const double w = pw[f * in_ch + c];
          for (int i = 0; i < len; ++i) {
            acc += d_out_f[i] * in_c[i];
            d_in_c[i] += w * d_out_f[i];
          }
          gp[f * in_ch + c] += acc;
        }
      }
    } else {
      for (std::size_t i = 0; i < d_in.size(); ++i) d_in[i] += ws.d_a[i];
    }

    if (b > 0) {
      // Through the previous block's post-sum ReLU.
      const auto& prev_sum = ws.sum_pre[static_cast<std::size_t>(b - 1)];
      ws.d_a.assign(static_cast<std::size_t>(kf * len), 0.0);
      for (std::size_t i = 0; i < d_in.size(); ++i)
        ws.d_a[i] = prev_sum[i] > 0.0 ? d_in[i] : 0.0;
    }
  }
  return loss;
}

std::vector<double> ResNet1d::forward_probs(const double* x) const {
  Workspace ws;
  forward_backward(x, 0, ws, nullptr);
  return ws.probs;
}

int ResNet1d::predict_one(const double* x) const {
  const auto probs = forward_probs(x);
  int best = 0;
  for (std::size_t c = 1; c < probs.size(); ++c)
    if (probs[c] > probs[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  return best;
}

double ResNet1d::loss_and_grad(const std::vector<const double*>& batch,
                               const std::vector<int>& labels, std::vector<double>* grad) const {
  if (batch.empty() || batch.size() != labels.size())
    throw std::invalid_argument("resnet1d: empty or misaligned batch");
  if (grad) grad->assign(params_.size(), 0.0);
  Workspace ws;
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i)
    loss += forward_backward(batch[i], labels[i], ws, grad);
  loss /= static_cast<double>(batch.size());
  if (grad)
    for (auto& v : *grad) v /= static_cast<double>(batch.size());
  return loss;
}

void ResNet1d::fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
  if (x.empty() || x.size() != y.size())
    throw std::invalid_argument("resnet1d: empty or misaligned training data");
  const std::size_t expected = static_cast<std::size_t>(cfg_.in_channels * cfg_.length);
  for (const auto& row : x)
    if (row.size() != expected) throw std::invalid_argument("resnet1d: input shape mismatch");

  Rng rng(mix_seed(cfg_.seed, "resnet1d/batches"));
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> velocity(params_.size(), 0.0);
  std::vector<double> grad;
  losses_.clear();

  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t n_batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg_.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(cfg_.batch_size));
      std::vector<const double*> batch;
      std::vector<int> labels;
      batch.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(x[order[i]].data());
        labels.push_back(y[order[i]]);
      }
      epoch_loss += loss_and_grad(batch, labels, &grad);
      ++n_batches;
      for (std::size_t j = 0; j < params_.size(); ++j) {
        velocity[j] = cfg_.momentum * velocity[j] - cfg_.lr * grad[j];
        params_[j] += velocity[j];
      }
    }
    losses_.push_back(epoch_loss / static_cast<double>(n_batches));
  }
}

std::vector<double> standardize_window(const DailyWindow& w,
                                       const std::array<double, kWindowChannels>& mean,
                                       const std::array<double, kWindowChannels>& stddev) {
  std::vector<double> x(static_cast<std::size_t>(kWindowChannels * kWindowSlots));
  for (int c = 0; c < kWindowChannels; ++c)
    for (int s = 0; s < kWindowSlots; ++s)
      x[static_cast<std::size_t>(c * kWindowSlots + s)] =
          (w.at(s, c) - mean[static_cast<std::size_t>(c)]) / stddev[static_cast<std::size_t>(c)];
  return x;
}

ResNet1dModel fit_resnet1d(const std::vector<DailyWindow>& windows, const std::vector<int>& y,
                           const ResNet1dConfig& cfg) {
  if (windows.empty() || windows.size() != y.size())
    throw std::invalid_argument("fit_resnet1d: empty or misaligned training data");
  int n_classes = 0;
  for (int label : y) n_classes = std::max(n_classes, label + 1);
  if (n_classes < 2) throw std::invalid_argument("fit_resnet1d: need at least 2 classes");

  ResNet1dModel model;
  model.config = cfg;
  model.config.in_channels = kWindowChannels;
  model.config.length = kWindowSlots;
  model.config.n_classes = n_classes;

  for (int c = 0; c < kWindowChannels; ++c) {
    double mean = 0.0;
    for (const auto& w : windows)
      for (int s = 0; s < kWindowSlots; ++s) mean += w.at(s, c);
    mean /= static_cast<double>(windows.size() * kWindowSlots);
    double var = 0.0;
    for (const auto& w : windows)
      for (int s = 0; s < kWindowSlots; ++s) {
        const double d = w.at(s, c) - mean;
        var += d * d;
      }
    var /= static_cast<double>(windows.size() * kWindowSlots);
    model.channel_mean[static_cast<std::size_t>(c)] = mean;
    model.channel_std[static_cast<std::size_t>(c)] = std::max(std::sqrt(var), 1e-9);
  }

  std::vector<std::vector<double>> x;
  x.reserve(windows.size());
  for (const auto& w : windows)
    x.push_back(standardize_window(w, model.channel_mean, model.channel_std));

  ResNet1d net(model.config);
  net.fit(x, y);
  model.params = net.params();
  model.epoch_losses = net.epoch_losses();
  return model;
}

namespace {
ResNet1d net_from_model(const ResNet1dModel& model) {
  ResNet1d net(model.config);
  if (net.params().size() != model.params.size())
    throw std::invalid_argument("resnet1d: stored parameters do not match configuration");
  net.params() = model.params;
  return net;
}
}  // namespace

int predict_resnet1d(const ResNet1dModel& model, const DailyWindow& w) {
  const ResNet1d net = net_from_model(model);
  const auto x = standardize_window(w, model.channel_mean, model.channel_std);
  return net.predict_one(x.data());
}

std::vector<int> predict_resnet1d(const ResNet1dModel& model,
                                  const std::vector<DailyWindow>& windows) {
  const ResNet1d net = net_from_model(model);
  std::vector<int> out;
  out.reserve(windows.size());
  for (const auto& w : windows) {
    const auto x = standardize_window(w, model.channel_mean, model.channel_std);
    out.push_back(net.predict_one(x.data()));
  }
  return out;
}

std::vector<double> resnet1d_probs(const ResNet1dModel& model, const DailyWindow& w) {
  const ResNet1d net = net_from_model(model);
  const auto x = standardize_window(w, model.channel_mean, model.channel_std);
  return net.forward_probs(x.data());
}

}  // namespace agrisense::learn
