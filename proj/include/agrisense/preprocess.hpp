#pragma once

#include <span>
#include <string>
#include <vector>

#include "agrisense/domain.hpp"

namespace agrisense {

struct PreprocessConfig {
  std::int64_t grid_step = 1800;  // seconds; 48 slots per day
  int smoothing_window = 20;
  double max_missing_fraction_per_day = 0.5;
  std::int64_t utc_offset_seconds = 0;

  void validate() const;
};

// One plant's readings aligned to the 30-minute grid, gaps filled. Slot i
// holds the values for UTC time (first_slot + i) * grid_step.
struct PlantSeries {
  std::string plant_id;
  std::int64_t first_slot = 0;
  std::vector<double> values;      // n * 2, row-major (moisture, ec)
  std::vector<bool> was_missing;   // n, pre-interpolation occupancy

  std::size_t slots() const { return was_missing.size(); }
};

struct DropReport {
  struct DroppedDay {
    std::string plant_id;
    Date date;
    double missing_fraction = 0.0;
  };
  std::vector<DroppedDay> dropped_days;
  std::vector<std::string> skipped_plants;  // fewer than 2 readings
};

// Aligns one plant's sorted, deduplicated readings to the grid. Interior
// gaps are linearly interpolated between the nearest real neighbours;
// leading/trailing gaps hold the nearest real value. Throws
// std::invalid_argument when the plant has fewer than 2 readings.
PlantSeries regrid_interpolate(std::span<const SoilReading> readings,
                               const PreprocessConfig& cfg);

// Trailing mean over the last w samples (window shrinks at the start);
// output length equals input length. w = 0 is an argument error.
std::vector<double> moving_average(std::span<const double> series, int w);

// Cuts a smoothed series into complete calendar days of 48 slots. Days whose
// pre-interpolation missing fraction exceeds the config threshold are
// dropped and recorded.
std::vector<DailyWindow> windowize(const PlantSeries& series, const PreprocessConfig& cfg,
                                   DropReport* report = nullptr);

// Full pipeline over a labeled set: group by plant, regrid, smooth both
// channels, windowize; result sorted by (plant_id, date).
std::vector<DailyWindow> preprocess(const std::vector<SoilReading>& readings,
                                    const PreprocessConfig& cfg, DropReport* report = nullptr);

}  // namespace agrisense
