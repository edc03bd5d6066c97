#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "agrisense/dates.hpp"

namespace agrisense {

// Thrown when a file or stream violates its declared format (bad header,
// wrong column count). Distinct from std::invalid_argument / domain_error so
// the CLI can map error categories to exit codes.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Rootstock : std::uint8_t { Thomas = 0, PP40 = 1, PP45 = 2 };
enum class Treatment : std::uint8_t { Control = 0, Salinity = 1, PRR = 2, SalinityPRR = 3 };
enum class PairLabel : std::uint8_t { PairA = 0, PairB = 1 };

constexpr std::array<Rootstock, 3> kAllRootstocks = {Rootstock::Thomas, Rootstock::PP40,
                                                     Rootstock::PP45};
constexpr std::array<Treatment, 4> kAllTreatments = {Treatment::Control, Treatment::Salinity,
                                                     Treatment::PRR, Treatment::SalinityPRR};

std::string to_string(Rootstock r);
std::string to_string(Treatment t);
std::string to_string(PairLabel p);
Rootstock parse_rootstock(const std::string& s);
Treatment parse_treatment(const std::string& s);
PairLabel parse_pair(const std::string& s);

// {Control, PRR} -> PairA, {Salinity, SalinityPRR} -> PairB.
PairLabel treatment_to_pair(Treatment t);

struct PlantMeta {
  std::string plant_id;
  Rootstock rootstock = Rootstock::Thomas;
  Treatment treatment = Treatment::Control;
};

struct SoilReading {
  std::int64_t timestamp = 0;  // UTC seconds since epoch, > 0
  std::string plant_id;
  double moisture = 0.0;  // percent
  double ec = 0.0;        // microsiemens per centimeter
};

// 288-channel reflectance vector on the 340-850 nm grid.
struct SpectralSample {
  std::string plant_id;
  Date session_date;
  int leaf_id = 0;
  std::vector<double> reflectance;  // length 288, finite, >= 0
};

inline constexpr int kWindowSlots = 48;
inline constexpr int kWindowChannels = 2;  // 0 = moisture, 1 = EC
inline constexpr int kSpectralChannels = 288;

// One complete, preprocessed day of soil data; the classifier input unit.
struct DailyWindow {
  std::string plant_id;
  Date date;
  // Row-major 48x2: values[slot * 2 + channel].
  std::array<double, kWindowSlots * kWindowChannels> values{};
  std::array<bool, kWindowChannels> degenerate_flags{false, false};

  double at(int slot, int channel) const { return values[slot * kWindowChannels + channel]; }
  double& at(int slot, int channel) { return values[slot * kWindowChannels + channel]; }
};

// Chronological train/test periods, [start, end) each, non-overlapping.
struct SplitSpec {
  Date train_start, train_end;
  Date test_start, test_end;

  void validate() const;
  bool in_train(Date d) const { return train_start <= d && d < train_end; }
  bool in_test(Date d) const { return test_start <= d && d < test_end; }
};

// Leaf conductivity from the electrode geometry: EC = L / (R2 * A).
// With cm inputs the result is S/cm; the CLI converts to uS/cm for display.
double leaf_ec(double r2_ohms, double l_cm, double a_cm2);

}  // namespace agrisense
