#pragma once

#include <span>
#include <string>
#include <vector>

#include "agrisense/domain.hpp"

namespace agrisense {

// F4 = {mean, std, skewness, kurtosis} per channel (8 dims);
// F2 = {skewness, kurtosis} per channel (4 dims).
enum class FeatureSetId : std::uint8_t { F4 = 0, F2 = 1 };

std::string to_string(FeatureSetId id);
FeatureSetId parse_feature_set(const std::string& s);
int feature_dim(FeatureSetId id);
std::vector<std::string> feature_names(FeatureSetId id);

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  bool degenerate = false;
};

// Population moments: m_k = (1/n) sum (x - mean)^k, std = sqrt(m2),
// skew = m3 / m2^(3/2), excess kurtosis = m4 / m2^2 - 3. A channel with
// m2 < 1e-12 * (1 + mean^2) is degenerate: shape moments are defined as 0.
// Throws std::invalid_argument for fewer than 2 samples.
Moments moments(std::span<const double> samples);

struct FeatureVector {
  std::string plant_id;
  Date date;
  std::vector<double> values;  // channel-major: moisture block, then EC block
  bool degenerate = false;
};

FeatureVector feature_vector(const DailyWindow& w, FeatureSetId set);

std::vector<FeatureVector> feature_matrix(const std::vector<DailyWindow>& windows,
                                          FeatureSetId set);

}  // namespace agrisense
