#include "agrisense/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "agrisense/csv.hpp"

namespace agrisense {

namespace {

bool finite(double v) { return std::isfinite(v); }

void sort_readings(std::vector<SoilReading>& readings) {
  std::sort(readings.begin(), readings.end(), [](const SoilReading& a, const SoilReading& b) {
    if (a.plant_id != b.plant_id) return a.plant_id < b.plant_id;
    return a.timestamp < b.timestamp;
  });
}

}  // namespace

void RangeSpec::validate() const {
  if (!(moisture_min < moisture_max) || !(ec_min < ec_max))
    throw ConfigError("range spec: min must be < max per channel");
}

std::pair<std::vector<SoilReading>, IngestReport> parse_soil_csv(std::istream& in) {
  auto header = csv::next_line(in);
  if (!header || csv::split(*header) != std::vector<std::string>{"timestamp", "plant_id",
                                                                 "moisture", "ec"})
    throw FormatError("soil csv: expected header `timestamp,plant_id,moisture,ec`");

  std::vector<SoilReading> readings;
  IngestReport report;
  while (auto line = csv::next_line(in)) {
    const auto fields = csv::split(*line);
    if (fields.size() != 4) {
      ++report.rejected_malformed;
      continue;
    }
    std::int64_t ts = 0;
    try {
      ts = parse_timestamp(fields[0]);
    } catch (const std::invalid_argument&) {
      ++report.rejected_malformed;
      continue;
    }
    const auto moisture = csv::parse_double(fields[2]);
    const auto ec = csv::parse_double(fields[3]);
    if (ts <= 0 || fields[1].empty() || !moisture || !ec || !finite(*moisture) || !finite(*ec)) {
      ++report.rejected_malformed;
      continue;
    }
    readings.push_back(SoilReading{ts, fields[1], *moisture, *ec});
    ++report.accepted;
  }
  sort_readings(readings);
  return {std::move(readings), report};
}

std::pair<std::vector<SoilReading>, std::size_t> dedup(std::vector<SoilReading> readings) {
  std::size_t dropped = 0;
  std::vector<SoilReading> out;
  out.reserve(readings.size());
  for (auto& r : readings) {
    if (!out.empty() && out.back().plant_id == r.plant_id && out.back().timestamp == r.timestamp)
      ++dropped;
    else
      out.push_back(std::move(r));
  }
  return {std::move(out), dropped};
}

std::pair<std::vector<SoilReading>, std::size_t> range_filter(std::vector<SoilReading> readings,
                                                              const RangeSpec& spec) {
  spec.validate();
  std::size_t rejected = 0;
  std::vector<SoilReading> out;
  out.reserve(readings.size());
  for (auto& r : readings) {
    if (spec.contains(r))
      out.push_back(std::move(r));
    else
      ++rejected;
  }
  return {std::move(out), rejected};
}

std::vector<std::vector<SoilReading>> slice_periods(const std::vector<SoilReading>& readings,
                                                    const std::vector<Date>& boundaries,
                                                    std::int64_t utc_offset_seconds) {
  if (boundaries.size() < 2) throw std::invalid_argument("slice_periods: need >= 2 boundaries");
  for (std::size_t i = 1; i < boundaries.size(); ++i)
    if (!(boundaries[i - 1] < boundaries[i]))
      throw std::invalid_argument("slice_periods: boundaries must be strictly increasing");

  std::vector<std::vector<SoilReading>> periods(boundaries.size() - 1);
  for (const auto& r : readings) {
    const Date d = date_of_timestamp(r.timestamp, utc_offset_seconds);
    if (d < boundaries.front() || !(d < boundaries.back())) continue;
    const auto it = std::upper_bound(boundaries.begin(), boundaries.end(), d);
    periods[static_cast<std::size_t>(it - boundaries.begin()) - 1].push_back(r);
  }
  return periods;
}

std::pair<std::vector<SpectralSample>, IngestReport> parse_spectral_csv(std::istream& in) {
  auto header = csv::next_line(in);
  bool header_ok = false;
  if (header) {
    const auto fields = csv::split(*header);
    header_ok = fields.size() == 3 + kSpectralChannels && fields[0] == "session_date" &&
                fields[1] == "plant_id" && fields[2] == "leaf_id" && fields[3] == "r0" &&
                fields.back() == "r287";
  }
  if (!header_ok)
    throw FormatError("spectral csv: expected header `session_date,plant_id,leaf_id,r0,...,r287`");

  std::vector<SpectralSample> samples;
  IngestReport report;
  while (auto line = csv::next_line(in)) {
    const auto fields = csv::split(*line);
    if (fields.size() != 3 + kSpectralChannels) {
      ++report.rejected_malformed;
      continue;
    }
    SpectralSample s;
    try {
      s.session_date = parse_date(fields[0]);
    } catch (const std::invalid_argument&) {
      ++report.rejected_malformed;
      continue;
    }
    const auto leaf = csv::parse_int(fields[2]);
    if (fields[1].empty() || !leaf) {
      ++report.rejected_malformed;
      continue;
    }
    s.plant_id = fields[1];
    s.leaf_id = static_cast<int>(*leaf);
    s.reflectance.reserve(kSpectralChannels);
    bool malformed = false, out_of_range = false;
    for (int c = 0; c < kSpectralChannels; ++c) {
      const auto v = csv::parse_double(fields[3 + c]);
      if (!v || !finite(*v)) {
        malformed = true;
        break;
      }
      if (*v < 0.0) {
        out_of_range = true;
        break;
      }
      s.reflectance.push_back(*v);
    }
    if (malformed)
      ++report.rejected_malformed;
    else if (out_of_range)
      ++report.rejected_out_of_range;
    else {
      samples.push_back(std::move(s));
      ++report.accepted;
    }
  }
  std::sort(samples.begin(), samples.end(), [](const SpectralSample& a, const SpectralSample& b) {
    if (a.session_date != b.session_date) return a.session_date < b.session_date;
    if (a.plant_id != b.plant_id) return a.plant_id < b.plant_id;
    return a.leaf_id < b.leaf_id;
  });
  return {std::move(samples), report};
}

std::vector<PlantMeta> parse_labels_csv(std::istream& in) {
  auto header = csv::next_line(in);
  if (!header ||
      csv::split(*header) != std::vector<std::string>{"plant_id", "rootstock", "treatment"})
    throw FormatError("labels csv: expected header `plant_id,rootstock,treatment`");
  std::vector<PlantMeta> metas;
  while (auto line = csv::next_line(in)) {
    const auto fields = csv::split(*line);
    if (fields.size() != 3 || fields[0].empty())
      throw FormatError("labels csv: malformed row: " + *line);
    metas.push_back(PlantMeta{fields[0], parse_rootstock(fields[1]), parse_treatment(fields[2])});
  }
  return metas;
}

void write_labels_csv(std::ostream& out, const std::vector<PlantMeta>& metas) {
  out << "plant_id,rootstock,treatment\n";
  for (const auto& m : metas)
    out << m.plant_id << ',' << to_string(m.rootstock) << ',' << to_string(m.treatment) << '\n';
}

namespace {
std::map<std::string, PlantMeta> meta_map(const std::vector<PlantMeta>& metas) {
  std::map<std::string, PlantMeta> by_id;
  for (const auto& m : metas) {
    if (!by_id.emplace(m.plant_id, m).second)
      throw std::invalid_argument("duplicate plant_id in metadata: " + m.plant_id);
  }
  return by_id;
}
}  // namespace

LabeledSoil join_labels(std::vector<SoilReading> readings, const std::vector<PlantMeta>& metas) {
  LabeledSoil out;
  out.metas = meta_map(metas);
  out.readings.reserve(readings.size());
  for (auto& r : readings) {
    if (out.metas.count(r.plant_id))
      out.readings.push_back(std::move(r));
    else
      ++out.dropped_unknown_plant;
  }
  return out;
}

LabeledSpectra join_labels(std::vector<SpectralSample> samples,
                           const std::vector<PlantMeta>& metas) {
  LabeledSpectra out;
  out.metas = meta_map(metas);
  out.samples.reserve(samples.size());
  for (auto& s : samples) {
    if (out.metas.count(s.plant_id))
      out.samples.push_back(std::move(s));
    else
      ++out.dropped_unknown_plant;
  }
  return out;
}

std::pair<std::vector<SoilReading>, IngestReport> ingest_soil(std::istream& in,
                                                              const RangeSpec& spec) {
  auto [readings, report] = parse_soil_csv(in);
  auto [unique, dropped] = dedup(std::move(readings));
  report.duplicates_dropped = dropped;
  auto [kept, rejected] = range_filter(std::move(unique), spec);
  report.rejected_out_of_range = rejected;
  report.accepted = kept.size();
  return {std::move(kept), report};
}

void write_soil_csv(std::ostream& out, const std::vector<SoilReading>& readings) {
  out << "timestamp,plant_id,moisture,ec\n";
  for (const auto& r : readings)
    out << format_timestamp(r.timestamp) << ',' << r.plant_id << ','
        << csv::format_double(r.moisture) << ',' << csv::format_double(r.ec) << '\n';
}

void write_spectral_csv(std::ostream& out, const std::vector<SpectralSample>& samples) {
  out << "session_date,plant_id,leaf_id";
  for (int c = 0; c < kSpectralChannels; ++c) out << ",r" << c;
  out << '\n';
  for (const auto& s : samples) {
    out << format_date(s.session_date) << ',' << s.plant_id << ',' << s.leaf_id;
    for (double v : s.reflectance) out << ',' << csv::format_double(v);
    out << '\n';
  }
}

}  // namespace agrisense
