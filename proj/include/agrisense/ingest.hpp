#pragma once

#include <istream>
#include <map>
#include <utility>
#include <vector>

#include "agrisense/domain.hpp"

namespace agrisense {

struct IngestReport {
  std::size_t accepted = 0;
  std::size_t rejected_out_of_range = 0;
  std::size_t rejected_malformed = 0;
  std::size_t duplicates_dropped = 0;

  std::size_t total() const {
    return accepted + rejected_out_of_range + rejected_malformed + duplicates_dropped;
  }
};

// Nominal per-channel bounds, inclusive. The paper names the range check but
// not the bounds; these defaults cover plausible potted-soil values and are
// overridable from config.
struct RangeSpec {
  double moisture_min = 0.0;
  double moisture_max = 100.0;
  double ec_min = 0.0;
  double ec_max = 20000.0;

  void validate() const;
  bool contains(const SoilReading& r) const {
    return r.moisture >= moisture_min && r.moisture <= moisture_max && r.ec >= ec_min &&
           r.ec <= ec_max;
  }
};

// Header must be exactly `timestamp,plant_id,moisture,ec`; rows that fail to
// parse are counted, not fatal. Output sorted by (plant_id, timestamp).
std::pair<std::vector<SoilReading>, IngestReport> parse_soil_csv(std::istream& in);

// Keeps the first occurrence of each (plant_id, timestamp). Input must be
// sorted by that key.
std::pair<std::vector<SoilReading>, std::size_t> dedup(std::vector<SoilReading> readings);

std::pair<std::vector<SoilReading>, std::size_t> range_filter(std::vector<SoilReading> readings,
                                                              const RangeSpec& spec);

// Assigns reading -> period i iff boundaries[i] <= date < boundaries[i+1]
// (half-open); readings outside [first, last) are excluded.
std::vector<std::vector<SoilReading>> slice_periods(const std::vector<SoilReading>& readings,
                                                    const std::vector<Date>& boundaries,
                                                    std::int64_t utc_offset_seconds = 0);

// Header `session_date,plant_id,leaf_id,r0,...,r287`.
std::pair<std::vector<SpectralSample>, IngestReport> parse_spectral_csv(std::istream& in);

// Labels CSV: `plant_id,rootstock,treatment`.
std::vector<PlantMeta> parse_labels_csv(std::istream& in);
void write_labels_csv(std::ostream& out, const std::vector<PlantMeta>& metas);

struct LabeledSoil {
  std::vector<SoilReading> readings;  // only readings with a known plant
  std::map<std::string, PlantMeta> metas;
  std::size_t dropped_unknown_plant = 0;
};

struct LabeledSpectra {
  std::vector<SpectralSample> samples;
  std::map<std::string, PlantMeta> metas;
  std::size_t dropped_unknown_plant = 0;
};

// Duplicate plant_id among metas is fatal; records without a meta are
// dropped and counted.
LabeledSoil join_labels(std::vector<SoilReading> readings, const std::vector<PlantMeta>& metas);
LabeledSpectra join_labels(std::vector<SpectralSample> samples,
                           const std::vector<PlantMeta>& metas);

// Full soil ingest: parse, dedup, range-filter, with one combined report.
std::pair<std::vector<SoilReading>, IngestReport> ingest_soil(std::istream& in,
                                                              const RangeSpec& spec);

void write_soil_csv(std::ostream& out, const std::vector<SoilReading>& readings);
void write_spectral_csv(std::ostream& out, const std::vector<SpectralSample>& samples);

}  // namespace agrisense
