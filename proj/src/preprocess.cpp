#include "agrisense/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>

namespace agrisense {

void PreprocessConfig::validate() const {
  if (grid_step <= 0 || 86400 % grid_step != 0 || 86400 / grid_step != kWindowSlots)
    throw ConfigError("preprocess: grid_step must split a day into 48 slots");
  if (smoothing_window < 1) throw ConfigError("preprocess: smoothing_window must be >= 1");
  if (max_missing_fraction_per_day < 0.0 || max_missing_fraction_per_day > 1.0)
    throw ConfigError("preprocess: max_missing_fraction_per_day must be in [0,1]");
}

PlantSeries regrid_interpolate(std::span<const SoilReading> readings,
                               const PreprocessConfig& cfg) {
  cfg.validate();
  if (readings.size() < 2)
    throw std::invalid_argument("regrid_interpolate: plant has fewer than 2 readings");

  const std::int64_t step = cfg.grid_step;
  const auto slot_of = [step](std::int64_t ts) { return (ts + step / 2) / step; };

  PlantSeries s;
  s.plant_id = readings.front().plant_id;
  s.first_slot = slot_of(readings.front().timestamp);
  const std::int64_t last_slot = slot_of(readings.back().timestamp);
  const std::size_t n = static_cast<std::size_t>(last_slot - s.first_slot + 1);
  s.values.assign(n * 2, 0.0);
  s.was_missing.assign(n, true);

  for (const auto& r : readings) {
    const std::size_t i = static_cast<std::size_t>(slot_of(r.timestamp) - s.first_slot);
    if (!s.was_missing[i]) continue;  // first reading snapped to a slot wins
    s.values[i * 2 + 0] = r.moisture;
    s.values[i * 2 + 1] = r.ec;
    s.was_missing[i] = false;
  }

  for (int c = 0; c < kWindowChannels; ++c) {
    std::ptrdiff_t prev = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (s.was_missing[i]) continue;
      if (prev < 0) {
        for (std::size_t j = 0; j < i; ++j) s.values[j * 2 + c] = s.values[i * 2 + c];
      } else if (static_cast<std::size_t>(prev) + 1 < i) {
        const double v0 = s.values[static_cast<std::size_t>(prev) * 2 + c];
        const double v1 = s.values[i * 2 + c];
        const double span = static_cast<double>(i - static_cast<std::size_t>(prev));
        for (std::size_t j = static_cast<std::size_t>(prev) + 1; j < i; ++j)
          s.values[j * 2 + c] =
              v0 + (v1 - v0) * (static_cast<double>(j - static_cast<std::size_t>(prev)) / span);
      }
      prev = static_cast<std::ptrdiff_t>(i);
    }
    for (std::size_t j = static_cast<std::size_t>(prev) + 1; j < n; ++j)
      s.values[j * 2 + c] = s.values[static_cast<std::size_t>(prev) * 2 + c];
  }
  return s;
}

std::vector<double> moving_average(std::span<const double> series, int w) {
  if (w < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  std::vector<double> out(series.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    acc += series[i];
    if (i >= static_cast<std::size_t>(w)) acc -= series[i - static_cast<std::size_t>(w)];
    const std::size_t len = std::min<std::size_t>(i + 1, static_cast<std::size_t>(w));
    out[i] = acc / static_cast<double>(len);
  }
  return out;
}

std::vector<DailyWindow> windowize(const PlantSeries& series, const PreprocessConfig& cfg,
                                   DropReport* report) {
  cfg.validate();
  const std::int64_t step = cfg.grid_step;
  const std::int64_t slots_per_day = kWindowSlots;
  const std::int64_t offset_slots = cfg.utc_offset_seconds / step;

  std::vector<DailyWindow> windows;
  if (series.slots() == 0) return windows;

  const std::int64_t last_slot = series.first_slot + static_cast<std::int64_t>(series.slots()) - 1;
  // First day whose 48 slots are fully covered by the grid.
  auto day_of_slot = [&](std::int64_t slot) {
    std::int64_t shifted = slot + offset_slots;
    return shifted >= 0 ? shifted / slots_per_day : (shifted - slots_per_day + 1) / slots_per_day;
  };
  for (std::int64_t day = day_of_slot(series.first_slot + slots_per_day - 1);
       day <= day_of_slot(last_slot); ++day) {
    const std::int64_t day_start = day * slots_per_day - offset_slots;
    if (day_start < series.first_slot || day_start + slots_per_day - 1 > last_slot) continue;

    int missing = 0;
    for (std::int64_t k = 0; k < slots_per_day; ++k)
      if (series.was_missing[static_cast<std::size_t>(day_start - series.first_slot + k)])
        ++missing;
    const double frac = static_cast<double>(missing) / static_cast<double>(slots_per_day);
    const Date date = date_of_timestamp(day_start * step, cfg.utc_offset_seconds);
    if (frac > cfg.max_missing_fraction_per_day) {
      if (report) report->dropped_days.push_back({series.plant_id, date, frac});
      continue;
    }

    DailyWindow w;
    w.plant_id = series.plant_id;
    w.date = date;
    for (int c = 0; c < kWindowChannels; ++c) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::int64_t k = 0; k < slots_per_day; ++k) {
        const double v =
            series.values[static_cast<std::size_t>(day_start - series.first_slot + k) * 2 + c];
        w.at(static_cast<int>(k), c) = v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      w.degenerate_flags[c] = (hi - lo) <= 1e-12 * (1.0 + std::abs(hi));
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

std::vector<DailyWindow> preprocess(const std::vector<SoilReading>& readings,
                                    const PreprocessConfig& cfg, DropReport* report) {
  cfg.validate();
  std::vector<DailyWindow> windows;
  std::size_t begin = 0;
  while (begin < readings.size()) {
    std::size_t end = begin;
    while (end < readings.size() && readings[end].plant_id == readings[begin].plant_id) ++end;
    const std::span<const SoilReading> plant(readings.data() + begin, end - begin);
    if (plant.size() < 2) {
      if (report) report->skipped_plants.push_back(plant.front().plant_id);
      begin = end;
      continue;
    }
    PlantSeries series = regrid_interpolate(plant, cfg);
    for (int c = 0; c < kWindowChannels; ++c) {
      std::vector<double> channel(series.slots());
      for (std::size_t i = 0; i < series.slots(); ++i) channel[i] = series.values[i * 2 + c];
      const std::vector<double> smooth = moving_average(channel, cfg.smoothing_window);
      for (std::size_t i = 0; i < series.slots(); ++i) series.values[i * 2 + c] = smooth[i];
    }
    auto plant_windows = windowize(series, cfg, report);
    windows.insert(windows.end(), std::make_move_iterator(plant_windows.begin()),
                   std::make_move_iterator(plant_windows.end()));
    begin = end;
  }
  std::sort(windows.begin(), windows.end(), [](const DailyWindow& a, const DailyWindow& b) {
    if (a.plant_id != b.plant_id) return a.plant_id < b.plant_id;
    return a.date < b.date;
  });
  return windows;
}

}  // namespace agrisense
