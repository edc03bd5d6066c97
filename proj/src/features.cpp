#include "agrisense/features.hpp"

#include <cmath>
#include <stdexcept>

namespace agrisense {

std::string to_string(FeatureSetId id) { return id == FeatureSetId::F4 ? "F4" : "F2"; }

FeatureSetId parse_feature_set(const std::string& s) {
  if (s == "F4" || s == "f4") return FeatureSetId::F4;
  if (s == "F2" || s == "f2") return FeatureSetId::F2;
  throw std::invalid_argument("unknown feature set: " + s);
}

int feature_dim(FeatureSetId id) { return id == FeatureSetId::F4 ? 8 : 4; }

std::vector<std::string> feature_names(FeatureSetId id) {
  const char* channels[] = {"moisture", "ec"};
  std::vector<std::string> names;
  for (const char* ch : channels) {
    if (id == FeatureSetId::F4) {
      names.push_back(std::string(ch) + "_mean");
      names.push_back(std::string(ch) + "_std");
    }
    names.push_back(std::string(ch) + "_skew");
    names.push_back(std::string(ch) + "_kurt");
  }
  return names;
}

Moments moments(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("moments: need at least 2 samples");

  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);

  Moments out;
  out.mean = mean;
  out.stddev = std::sqrt(m2);
  if (m2 < 1e-12 * (1.0 + mean * mean)) {
    out.skewness = 0.0;
    out.excess_kurtosis = 0.0;
    out.degenerate = true;
  } else {
    out.skewness = m3 / (m2 * std::sqrt(m2));
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return out;
}

FeatureVector feature_vector(const DailyWindow& w, FeatureSetId set) {
  FeatureVector fv;
  fv.plant_id = w.plant_id;
  fv.date = w.date;
  fv.values.reserve(static_cast<std::size_t>(feature_dim(set)));
  for (int c = 0; c < kWindowChannels; ++c) {
    double channel[kWindowSlots];
    for (int s = 0; s < kWindowSlots; ++s) channel[s] = w.at(s, c);
    const Moments m = moments(std::span<const double>(channel, kWindowSlots));
    if (set == FeatureSetId::F4) {
      fv.values.push_back(m.mean);
      fv.values.push_back(m.stddev);
    }
    fv.values.push_back(m.skewness);
    fv.values.push_back(m.excess_kurtosis);
    fv.degenerate = fv.degenerate || m.degenerate;
  }
  return fv;
}

std::vector<FeatureVector> feature_matrix(const std::vector<DailyWindow>& windows,
                                          FeatureSetId set) {
  std::vector<FeatureVector> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back(feature_vector(w, set));
  return out;
}

}  // namespace agrisense
