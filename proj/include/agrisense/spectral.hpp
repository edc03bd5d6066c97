#pragma once

#include <span>
#include <vector>

#include "agrisense/domain.hpp"

namespace agrisense {

// 288 channels spanning 340-850 nm: lambda_i = 340 + i * 510/287.
struct WavelengthGrid {
  static constexpr int n_channels = kSpectralChannels;
  static constexpr double lambda_min = 340.0;
  static constexpr double lambda_max = 850.0;

  double wavelength(int channel) const {
    return lambda_min + channel * (lambda_max - lambda_min) / (n_channels - 1);
  }
};

// Nearest grid channel; exact midpoints round down. Out-of-band wavelengths
// are a domain error.
int channel_of(double lambda_nm);

// Normalized-difference indices. Each is (R_a - R_b) / (R_a + R_b) for its
// wavelength pair; a zero denominator is a domain error.
double ndsi(const SpectralSample& s);  // 665 / 842 nm
double ni(const SpectralSample& s);    // 705 / 750 nm
double n1(const SpectralSample& s);    // 600 / 800 nm

// Classical one-way ANOVA F statistic. Requires >= 2 groups with >= 2
// values each; zero within-group variance (with unequal means) and zero
// total variance are domain errors.
double anova_f(const std::vector<std::vector<double>>& groups);

enum class PValueMode { Permutation, Analytic };

// Permutation mode shuffles group membership n_perm times (seeded) and
// reports (1 + #{F_perm >= F_obs}) / (1 + n_perm). Analytic mode evaluates
// the F distribution tail through the regularized incomplete beta.
double anova_p(const std::vector<std::vector<double>>& groups,
               PValueMode mode = PValueMode::Permutation, int n_perm = 2000,
               std::uint64_t seed = 1);

// Regularized incomplete beta I_x(a, b); exposed for tests.
double regularized_incomplete_beta(double a, double b, double x);

struct SwScanResult {
  std::vector<double> p_values;       // one per channel; degenerate -> 1
  std::vector<bool> degenerate;       // channels where ANOVA was undefined
  double adjusted_min_p = 1.0;        // Bonferroni: min(1, 288 * min p)
  int argmin_channel = -1;
};

// Single-wavelength ANOVA over all 288 channels for samples grouped by
// treatment. Analytic p-values by default: a permutation floor of
// 1/(n_perm+1) would make the Bonferroni-adjusted minimum saturate.
SwScanResult sw_scan(const std::vector<std::vector<const SpectralSample*>>& groups,
                     PValueMode mode = PValueMode::Analytic, int n_perm = 2000,
                     std::uint64_t seed = 1);

struct PcaModel {
  std::vector<double> mean;                 // d
  std::vector<std::vector<double>> components;  // k rows, each d, orthonormal
  std::vector<double> explained_variance;   // non-increasing

  int dim() const { return static_cast<int>(mean.size()); }
  int k() const { return static_cast<int>(components.size()); }
};

// Top-k principal directions of the centered data (SVD). Deterministic sign
// convention: each component's largest-magnitude entry is positive.
PcaModel pca_fit(const std::vector<std::vector<double>>& rows, int k);
std::vector<std::vector<double>> pca_transform(const PcaModel& model,
                                               const std::vector<std::vector<double>>& rows);

}  // namespace agrisense
