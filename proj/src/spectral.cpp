#include "agrisense/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "agrisense/rng.hpp"

namespace agrisense {

int channel_of(double lambda_nm) {
  const WavelengthGrid grid;
  if (lambda_nm < grid.lambda_min || lambda_nm > grid.lambda_max)
    throw std::domain_error("channel_of: wavelength outside 340-850 nm");
  const double x =
      (lambda_nm - grid.lambda_min) * (grid.n_channels - 1) / (grid.lambda_max - grid.lambda_min);
  const double lo = std::floor(x);
  const int i = static_cast<int>(lo);
  return (x - lo > 0.5) ? i + 1 : i;  // midpoint ties round down
}

namespace {

double normalized_difference(const SpectralSample& s, double lambda_a, double lambda_b) {
  if (s.reflectance.size() != static_cast<std::size_t>(kSpectralChannels))
    throw std::invalid_argument("spectral sample must have 288 channels");
  const double ra = s.reflectance[static_cast<std::size_t>(channel_of(lambda_a))];
  const double rb = s.reflectance[static_cast<std::size_t>(channel_of(lambda_b))];
  const double denom = ra + rb;
  if (denom <= 0.0) throw std::domain_error("spectral index: zero denominator");
  return (ra - rb) / denom;
}

struct AnovaLayout {
  double f = 0.0;
  int k = 0;
  std::size_t n = 0;
};

AnovaLayout compute_f(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw std::domain_error("anova: need at least 2 groups");
  std::size_t n = 0;
  double grand = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw std::domain_error("anova: each group needs at least 2 values");
    for (double v : g) grand += v;
    n += g.size();
  }
  grand /= static_cast<double>(n);

  double ss_between = 0.0, ss_within = 0.0;
  for (const auto& g : groups) {
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    ss_between += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
    for (double v : g) ss_within += (v - mean) * (v - mean);
  }
  if (ss_between + ss_within <= 0.0) throw std::domain_error("anova: zero total variance");
  const int k = static_cast<int>(groups.size());
  const double ms_between = ss_between / (k - 1);
  const double ms_within = ss_within / static_cast<double>(n - static_cast<std::size_t>(k));
  if (ms_within <= 0.0) throw std::domain_error("anova: zero within-group variance");
  return {ms_between / ms_within, k, n};
}

}  // namespace

double ndsi(const SpectralSample& s) { return normalized_difference(s, 665.0, 842.0); }
double ni(const SpectralSample& s) { return normalized_difference(s, 705.0, 750.0); }
double n1(const SpectralSample& s) { return normalized_difference(s, 600.0, 800.0); }

double anova_f(const std::vector<std::vector<double>>& groups) { return compute_f(groups).f; }

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // Continued fraction (Lentz), converges quickly for x < (a+1)/(a+b+2).
  const auto contfrac = [](double aa, double bb, double xx) {
    constexpr double tiny = 1e-300;
    constexpr int max_iter = 300;
    double c = 1.0;
    double d = 1.0 - (aa + bb) * xx / (aa + 1.0);
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
      const double m2 = 2.0 * m;
      double num = m * (bb - m) * xx / ((aa + m2 - 1.0) * (aa + m2));
      d = 1.0 + num * d;
      if (std::abs(d) < tiny) d = tiny;
      c = 1.0 + num / c;
      if (std::abs(c) < tiny) c = tiny;
      d = 1.0 / d;
      h *= d * c;
      num = -(aa + m) * (aa + bb + m) * xx / ((aa + m2) * (aa + m2 + 1.0));
      d = 1.0 + num * d;
      if (std::abs(d) < tiny) d = tiny;
      c = 1.0 + num / c;
      if (std::abs(c) < tiny) c = tiny;
      d = 1.0 / d;
      const double delta = d * c;
      h *= delta;
      if (std::abs(delta - 1.0) < 1e-14) break;
    }
    return h;
  };
  const double ln_front = a * std::log(x) + b * std::log1p(-x) + std::lgamma(a + b) -
                          std::lgamma(a) - std::lgamma(b);
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(ln_front) * contfrac(a, b, x) / a;
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) + std::lgamma(a + b) -
                        std::lgamma(a) - std::lgamma(b)) *
                   contfrac(b, a, 1.0 - x) / b;
}

double anova_p(const std::vector<std::vector<double>>& groups, PValueMode mode, int n_perm,
               std::uint64_t seed) {
  const AnovaLayout obs = compute_f(groups);
  if (mode == PValueMode::Analytic) {
    const double df1 = obs.k - 1;
    const double df2 = static_cast<double>(obs.n) - obs.k;
    // P(F >= f) = I_{df2/(df2 + df1 f)}(df2/2, df1/2)
    return regularized_incomplete_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * obs.f));
  }

  if (n_perm < 1) throw std::invalid_argument("anova_p: n_perm must be >= 1");
  std::vector<double> pooled;
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) {
    pooled.insert(pooled.end(), g.begin(), g.end());
    sizes.push_back(g.size());
  }
  Rng rng(seed);
  int exceed = 0;
  std::vector<std::vector<double>> shuffled(groups.size());
  for (int p = 0; p < n_perm; ++p) {
    rng.shuffle(pooled);
    std::size_t offset = 0;
    for (std::size_t g = 0; g < sizes.size(); ++g) {
      shuffled[g].assign(pooled.begin() + static_cast<std::ptrdiff_t>(offset),
                         pooled.begin() + static_cast<std::ptrdiff_t>(offset + sizes[g]));
      offset += sizes[g];
    }
    double f_perm;
    try {
      f_perm = compute_f(shuffled).f;
    } catch (const std::domain_error&) {
      f_perm = std::numeric_limits<double>::infinity();  // degenerate split, count as extreme
    }
    if (f_perm >= obs.f) ++exceed;
  }
  return (1.0 + exceed) / (1.0 + n_perm);
}

SwScanResult sw_scan(const std::vector<std::vector<const SpectralSample*>>& groups,
                     PValueMode mode, int n_perm, std::uint64_t seed) {
  if (groups.size() < 2) throw std::domain_error("sw_scan: need at least 2 groups");
  for (const auto& g : groups)
    if (g.size() < 2) throw std::domain_error("sw_scan: each group needs at least 2 samples");

  SwScanResult result;
  result.p_values.assign(kSpectralChannels, 1.0);
  result.degenerate.assign(kSpectralChannels, false);
  double min_p = 2.0;
  for (int c = 0; c < kSpectralChannels; ++c) {
    std::vector<std::vector<double>> values(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      values[g].reserve(groups[g].size());
      for (const SpectralSample* s : groups[g])
        values[g].push_back(s->reflectance.at(static_cast<std::size_t>(c)));
    }
    double p;
    try {
      p = anova_p(values, mode, n_perm, mix_seed(seed, static_cast<std::uint64_t>(c)));
    } catch (const std::domain_error&) {
      result.degenerate[static_cast<std::size_t>(c)] = true;
      p = 1.0;
    }
    result.p_values[static_cast<std::size_t>(c)] = p;
    if (p < min_p && !result.degenerate[static_cast<std::size_t>(c)]) {
      min_p = p;
      result.argmin_channel = c;
    }
  }
  result.adjusted_min_p = result.argmin_channel < 0 ? 1.0 : std::min(1.0, kSpectralChannels * min_p);
  return result;
}

PcaModel pca_fit(const std::vector<std::vector<double>>& rows, int k) {
  const int n = static_cast<int>(rows.size());
  if (n < 2) throw std::invalid_argument("pca_fit: need at least 2 rows");
  const int d = static_cast<int>(rows.front().size());
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != d) throw std::invalid_argument("pca_fit: ragged matrix");
  if (k < 1 || k > std::min(n - 1, d))
    throw std::invalid_argument("pca_fit: k must be in [1, min(n-1, d)]");

  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  const auto& singular = svd.singularValues();
  const auto& v = svd.matrixV();  // d x min(n,d)

  PcaModel model;
  model.mean.assign(mean.data(), mean.data() + d);
  model.components.resize(static_cast<std::size_t>(k));
  model.explained_variance.resize(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd comp = v.col(c);
    int arg = 0;
    comp.cwiseAbs().maxCoeff(&arg);
    if (comp(arg) < 0.0) comp = -comp;
    model.components[static_cast<std::size_t>(c)].assign(comp.data(), comp.data() + d);
    model.explained_variance[static_cast<std::size_t>(c)] =
        singular(c) * singular(c) / static_cast<double>(n - 1);
  }
  return model;
}

std::vector<std::vector<double>> pca_transform(const PcaModel& model,
                                               const std::vector<std::vector<double>>& rows) {
  const int d = model.dim();
  std::vector<std::vector<double>> scores;
  scores.reserve(rows.size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != d)
      throw std::invalid_argument("pca_transform: row dimension mismatch");
    std::vector<double> s(static_cast<std::size_t>(model.k()), 0.0);
    for (int c = 0; c < model.k(); ++c) {
      double acc = 0.0;
      const auto& comp = model.components[static_cast<std::size_t>(c)];
      for (int j = 0; j < d; ++j)
        acc += (r[static_cast<std::size_t>(j)] - model.mean[static_cast<std::size_t>(j)]) *
               comp[static_cast<std::size_t>(j)];
      s[static_cast<std::size_t>(c)] = acc;
    }
    scores.push_back(std::move(s));
  }
  return scores;
}

}  // namespace agrisense
