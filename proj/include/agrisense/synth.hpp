#pragma once

#include <map>
#include <utility>
#include <vector>

#include "agrisense/domain.hpp"

namespace agrisense {

// Seeded greenhouse stand-in. Planted structure: salinity raises the EC
// baseline (large, visible to raw-window classifiers but invisible to
// shape-only features) and adds a post-watering EC pulse (a weak skewness
// marker); root rot slows the moisture decay and adds a mid-day EC bump,
// shifting distribution shape (skew/kurtosis) by the same amount in both
// treatment pairs. Rootstock attenuation scales every effect.
struct SynthConfig {
  int n_plants_per_cell = 6;
  std::vector<Rootstock> rootstocks = {Rootstock::Thomas};
  Date start_date{2024, 1, 1};
  Date end_date{2024, 3, 11};  // exclusive

  double salinity_ec_shift = 400.0;        // uS/cm added to the EC baseline
  double salinity_skew_shift = 1.0;        // scales the post-watering EC pulse
  double prr_kurtosis_shift = 1.0;         // scales the mid-day EC bump
  double prr_moisture_decay_factor = 0.55; // (0,1], 1 = no effect

  std::map<Rootstock, double> rootstock_attenuation = {
      {Rootstock::Thomas, 1.0}, {Rootstock::PP40, 0.5}, {Rootstock::PP45, 0.05}};

  double noise_sigma = 0.05;  // relative to channel scale
  double missing_rate = 0.0;  // fraction of grid slots dropped
  std::uint64_t seed = 1;

  // Leaf-session plumbing for gen_spectral.
  int spectral_session_interval_days = 7;
  int leaves_per_plant = 3;

  void validate() const;
};

// Channel scales the relative noise_sigma refers to.
inline constexpr double kMoistureScale = 30.0;   // percent
inline constexpr double kEcScale = 1500.0;       // uS/cm
inline constexpr double kSpectralNoiseScale = 0.35;  // reflectance units

struct SoilDataset {
  std::vector<SoilReading> readings;  // sorted by (plant_id, timestamp)
  std::vector<PlantMeta> metas;
};

// One reading per plant per 30-minute slot, minus slots dropped at
// missing_rate. Deterministic given cfg; per-plant streams are derived from
// (seed, plant_id), so output is independent of generation order.
SoilDataset gen_soil(const SynthConfig& cfg);

// One sample per (plant, session date, leaf). The group difference is a
// fixed +/- signature over n_signal_channels channels, each shifted by
// `amplitude` noise-sigmas, so single-channel effects stay small while the
// multivariate effect is large. Channels used by the named spectral indices
// are excluded from the signature support.
std::vector<SpectralSample> gen_spectral(const SynthConfig& cfg, double amplitude = 0.06,
                                         int n_signal_channels = 120);

}  // namespace agrisense
