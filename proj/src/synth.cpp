#include "agrisense/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "agrisense/rng.hpp"
#include "agrisense/spectral.hpp"

namespace agrisense {

namespace {

constexpr double kMoistureBase = 22.0;       // percent, post-decay floor
constexpr double kMoistureAmplitude = 28.0;  // watering spike height
constexpr double kDecayRate = 2.2;           // per day
constexpr double kEcBase = 1500.0;           // uS/cm
constexpr double kPulseScale = 60.0;         // uS/cm, salinity skew pulse
constexpr double kBumpScale = 90.0;          // uS/cm, root-rot kurtosis bump

std::string plant_code(Rootstock r) {
  switch (r) {
    case Rootstock::Thomas: return "T";
    case Rootstock::PP40: return "P40";
    case Rootstock::PP45: return "P45";
  }
  return "?";
}

struct PlantEffects {
  double ec_shift = 0.0;     // salinity baseline shift, uS/cm
  double pulse_amp = 0.0;    // salinity post-watering pulse, uS/cm
  double bump_amp = 0.0;     // PRR mid-day bump, uS/cm
  double decay_factor = 1.0; // PRR moisture decay multiplier
};

PlantEffects effects_for(const SynthConfig& cfg, Rootstock r, Treatment t) {
  const double att = cfg.rootstock_attenuation.at(r);
  const bool salinity = t == Treatment::Salinity || t == Treatment::SalinityPRR;
  const bool prr = t == Treatment::PRR || t == Treatment::SalinityPRR;
  PlantEffects e;
  if (salinity) {
    e.ec_shift = cfg.salinity_ec_shift * att;
    e.pulse_amp = cfg.salinity_skew_shift * att * kPulseScale;
  }
  if (prr) {
    e.bump_amp = cfg.prr_kurtosis_shift * att * kBumpScale;
    e.decay_factor = 1.0 - att * (1.0 - cfg.prr_moisture_decay_factor);
  }
  return e;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_plants_per_cell < 1) throw ConfigError("synth: n_plants_per_cell must be >= 1");
  if (rootstocks.empty()) throw ConfigError("synth: at least one rootstock required");
  if (!(start_date < end_date)) throw ConfigError("synth: end_date must be after start_date");
  if (!(prr_moisture_decay_factor > 0.0) || prr_moisture_decay_factor > 1.0)
    throw ConfigError("synth: prr_moisture_decay_factor must be in (0,1]");
  if (missing_rate < 0.0 || missing_rate >= 1.0)
    throw ConfigError("synth: missing_rate must be in [0,1)");
  if (noise_sigma < 0.0) throw ConfigError("synth: noise_sigma must be >= 0");
  if (salinity_ec_shift < 0.0 || salinity_skew_shift < 0.0 || prr_kurtosis_shift < 0.0)
    throw ConfigError("synth: effect shifts must be >= 0");
  for (Rootstock r : rootstocks)
    if (!rootstock_attenuation.count(r))
      throw ConfigError("synth: missing attenuation for rootstock " + to_string(r));
  if (spectral_session_interval_days < 1 || leaves_per_plant < 1)
    throw ConfigError("synth: spectral session/leaf settings must be >= 1");
}

SoilDataset gen_soil(const SynthConfig& cfg) {
  cfg.validate();
  const std::int64_t n_days = days_from_civil(cfg.end_date) - days_from_civil(cfg.start_date);
  const std::int64_t t0 = timestamp_of_date(cfg.start_date);
  const double sigma_m = cfg.noise_sigma * kMoistureScale;
  const double sigma_ec = cfg.noise_sigma * kEcScale;

  SoilDataset out;
  for (Rootstock r : cfg.rootstocks) {
    int index = 0;
    for (Treatment t : kAllTreatments) {
      for (int j = 0; j < cfg.n_plants_per_cell; ++j) {
        char id[32];
        std::snprintf(id, sizeof(id), "%s-%02d", plant_code(r).c_str(), ++index);
        const std::string plant_id = id;
        out.metas.push_back(PlantMeta{plant_id, r, t});

        const PlantEffects fx = effects_for(cfg, r, t);
        Rng rng(mix_seed(cfg.seed, "soil/" + plant_id));
        const double plant_ec_level = 1.0 + 0.05 * rng.next_normal();

        for (std::int64_t day = 0; day < n_days; ++day) {
          // Per-day variation; drawn unconditionally so the stream layout
          // does not depend on treatment.
          const double amp = kMoistureAmplitude * (1.0 + 0.15 * rng.next_normal());
          const double decay = kDecayRate * fx.decay_factor * (1.0 + 0.10 * rng.next_normal());
          const double day_ec_level = 1.0 + 0.03 * rng.next_normal();
          const double pulse = fx.pulse_amp * (1.0 + 0.25 * rng.next_normal());
          const double bump = fx.bump_amp * (1.0 + 0.25 * rng.next_normal());

          for (int slot = 0; slot < kWindowSlots; ++slot) {
            const double noise_m = sigma_m * rng.next_normal();
            const double noise_ec = sigma_ec * rng.next_normal();
            const double u_miss = rng.next_double();

            const double phase = static_cast<double>(slot) / kWindowSlots;
            double moisture = kMoistureBase + amp * std::exp(-decay * phase) + noise_m;
            const double mid = (static_cast<double>(slot) - 24.0) / 5.0;
            double ec = kEcBase * plant_ec_level * day_ec_level + fx.ec_shift +
                        pulse * std::exp(-static_cast<double>(slot) / 5.0) +
                        bump * std::exp(-mid * mid) + noise_ec;

            if (u_miss < cfg.missing_rate) continue;
            moisture = std::clamp(moisture, 0.0, 100.0);
            ec = std::max(ec, 0.0);
            out.readings.push_back(
                SoilReading{t0 + day * 86400 + slot * 1800, plant_id, moisture, ec});
          }
        }
      }
    }
  }
  std::sort(out.readings.begin(), out.readings.end(),
            [](const SoilReading& a, const SoilReading& b) {
              if (a.plant_id != b.plant_id) return a.plant_id < b.plant_id;
              return a.timestamp < b.timestamp;
            });
  std::sort(out.metas.begin(), out.metas.end(),
            [](const PlantMeta& a, const PlantMeta& b) { return a.plant_id < b.plant_id; });
  return out;
}

std::vector<SpectralSample> gen_spectral(const SynthConfig& cfg, double amplitude,
                                         int n_signal_channels) {
  cfg.validate();
  if (amplitude < 0.0) throw ConfigError("gen_spectral: amplitude must be >= 0");
  if (n_signal_channels < 1 || n_signal_channels > kSpectralChannels)
    throw ConfigError("gen_spectral: n_signal_channels must be in [1,288]");

  // Keep the wavelengths used by NDSI/NI/N1 (and their grid neighbours) out
  // of the signature support so the index analyses face a pure null.
  std::set<int> reserved;
  for (double lambda : {665.0, 842.0, 705.0, 750.0, 600.0, 800.0}) {
    const int c = channel_of(lambda);
    for (int dc = -1; dc <= 1; ++dc)
      if (c + dc >= 0 && c + dc < kSpectralChannels) reserved.insert(c + dc);
  }

  std::vector<int> candidates;
  for (int c = 0; c < kSpectralChannels; ++c)
    if (!reserved.count(c)) candidates.push_back(c);
  if (n_signal_channels > static_cast<int>(candidates.size()))
    throw ConfigError("gen_spectral: n_signal_channels exceeds available channels");

  Rng support_rng(mix_seed(cfg.seed, "spectral/support"));
  support_rng.shuffle(candidates);
  std::vector<double> signature(kSpectralChannels, 0.0);
  for (int i = 0; i < n_signal_channels; ++i)
    signature[static_cast<std::size_t>(candidates[static_cast<std::size_t>(i)])] =
        support_rng.next_double() < 0.5 ? -1.0 : 1.0;

  // Smooth leaf-like base curve: green bump plus near-infrared red edge.
  const WavelengthGrid grid;
  std::vector<double> base(kSpectralChannels);
  for (int c = 0; c < kSpectralChannels; ++c) {
    const double lambda = grid.wavelength(c);
    const double green = (lambda - 550.0) / 40.0;
    base[static_cast<std::size_t>(c)] = 0.08 + 0.07 * std::exp(-green * green) +
                                        0.45 / (1.0 + std::exp(-(lambda - 715.0) / 18.0));
  }

  const double sigma = cfg.noise_sigma * kSpectralNoiseScale;
  const std::int64_t n_days = days_from_civil(cfg.end_date) - days_from_civil(cfg.start_date);

  std::vector<SpectralSample> samples;
  for (Rootstock r : cfg.rootstocks) {
    const double att = cfg.rootstock_attenuation.at(r);
    int index = 0;
    for (Treatment t : kAllTreatments) {
      double coeff = 0.0;
      switch (t) {
        case Treatment::Control: coeff = 0.0; break;
        case Treatment::Salinity: coeff = 1.0; break;
        case Treatment::PRR: coeff = 0.6; break;
        case Treatment::SalinityPRR: coeff = 1.3; break;
      }
      coeff *= att;
      for (int j = 0; j < cfg.n_plants_per_cell; ++j) {
        char id[32];
        std::snprintf(id, sizeof(id), "%s-%02d", plant_code(r).c_str(), ++index);
        const std::string plant_id = id;
        Rng rng(mix_seed(cfg.seed, "spectral/" + plant_id));

        for (std::int64_t day = 0; day < n_days; day += cfg.spectral_session_interval_days) {
          const Date session = civil_from_days(days_from_civil(cfg.start_date) + day);
          for (int leaf = 0; leaf < cfg.leaves_per_plant; ++leaf) {
            SpectralSample s;
            s.plant_id = plant_id;
            s.session_date = session;
            s.leaf_id = leaf;
            s.reflectance.resize(kSpectralChannels);
            for (int c = 0; c < kSpectralChannels; ++c) {
              const double v = base[static_cast<std::size_t>(c)] +
                               coeff * amplitude * sigma * signature[static_cast<std::size_t>(c)] +
                               sigma * rng.next_normal();
              s.reflectance[static_cast<std::size_t>(c)] = std::max(v, 0.0);
            }
            samples.push_back(std::move(s));
          }
        }
      }
    }
  }
  std::sort(samples.begin(), samples.end(), [](const SpectralSample& a, const SpectralSample& b) {
    if (a.session_date != b.session_date) return a.session_date < b.session_date;
    if (a.plant_id != b.plant_id) return a.plant_id < b.plant_id;
    return a.leaf_id < b.leaf_id;
  });
  return samples;
}

}  // namespace agrisense
