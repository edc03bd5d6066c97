#include "agrisense/domain.hpp"

namespace agrisense {

std::string to_string(Rootstock r) {
  switch (r) {
    case Rootstock::Thomas: return "Thomas";
    case Rootstock::PP40: return "PP40";
    case Rootstock::PP45: return "PP45";
  }
  throw std::invalid_argument("unknown rootstock value");
}

std::string to_string(Treatment t) {
  switch (t) {
    case Treatment::Control: return "Control";
    case Treatment::Salinity: return "Salinity";
    case Treatment::PRR: return "PRR";
    case Treatment::SalinityPRR: return "SalinityPRR";
  }
  throw std::invalid_argument("unknown treatment value");
}

std::string to_string(PairLabel p) {
  return p == PairLabel::PairA ? "PairA" : "PairB";
}

Rootstock parse_rootstock(const std::string& s) {
  for (Rootstock r : kAllRootstocks)
    if (s == to_string(r)) return r;
  throw std::invalid_argument("unknown rootstock: " + s);
}

Treatment parse_treatment(const std::string& s) {
  for (Treatment t : kAllTreatments)
    if (s == to_string(t)) return t;
  throw std::invalid_argument("unknown treatment: " + s);
}

PairLabel parse_pair(const std::string& s) {
  if (s == "PairA") return PairLabel::PairA;
  if (s == "PairB") return PairLabel::PairB;
  throw std::invalid_argument("unknown pair: " + s);
}

PairLabel treatment_to_pair(Treatment t) {
  switch (t) {
    case Treatment::Control:
    case Treatment::PRR:
      return PairLabel::PairA;
    case Treatment::Salinity:
    case Treatment::SalinityPRR:
      return PairLabel::PairB;
  }
  throw std::invalid_argument("unknown treatment value");
}

void SplitSpec::validate() const {
  if (!(train_start < train_end) || !(test_start < test_end))
    throw std::invalid_argument("split periods must be non-empty");
  if (!(train_end <= test_start))
    throw std::invalid_argument("train period must end at or before test begins");
}

double leaf_ec(double r2_ohms, double l_cm, double a_cm2) {
  if (!(r2_ohms > 0.0)) throw std::domain_error("leaf_ec: r2 must be > 0");
  if (!(l_cm > 0.0)) throw std::domain_error("leaf_ec: l must be > 0");
  if (!(a_cm2 > 0.0)) throw std::domain_error("leaf_ec: a must be > 0");
  return l_cm / (r2_ohms * a_cm2);
}

}  // namespace agrisense
