#include "laststop/profile.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace laststop {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

void check_probability(double v, int index_1based) {
  if (!std::isfinite(v) || v <= 0.0 || v > 1.0) {
    std::ostringstream msg;
    msg << "probability at index " << index_1based << " is outside (0, 1]: " << v;
    throw ValidationError(msg.str());
  }
}

}  // namespace

SuccessProfile::SuccessProfile(std::vector<double> p) : p_(std::move(p)) {
  for (std::size_t i = 0; i < p_.size(); ++i) {
    check_probability(p_[i], static_cast<int>(i) + 1);
    if (p_[i] == 1.0) ++certain_count_;
  }
}

SuccessProfile SuccessProfile::from_probabilities(std::vector<double> probabilities) {
  if (probabilities.empty()) throw ValidationError("profile must contain at least one trial");
  return SuccessProfile(std::move(probabilities));
}

SuccessProfile SuccessProfile::karamata_stirling(double theta, int n) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw ValidationError("theta must be a positive real");
  if (n < 1) throw ValidationError("trial count n must be positive");
  std::vector<double> p(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) p[k - 1] = theta / (theta + (k - 1));
  return SuccessProfile(std::move(p));
}

double SuccessProfile::p(int k) const {
  if (k < 1 || k > size())
    throw ValidationError("trial index " + std::to_string(k) + " outside [1, " +
                          std::to_string(size()) + "]");
  return p_[static_cast<std::size_t>(k - 1)];
}

OddsSequence::OddsSequence(const SuccessProfile& profile) {
  r_.reserve(static_cast<std::size_t>(profile.size()));
  for (int k = 1; k <= profile.size(); ++k) {
    double p = profile.p(k);
    r_.push_back(p == 1.0 ? std::numeric_limits<double>::infinity() : p / (1.0 - p));
  }
}

double OddsSequence::r(int k) const {
  if (k < 1 || k > size())
    throw ValidationError("odds index " + std::to_string(k) + " outside [1, " +
                          std::to_string(size()) + "]");
  return r_[static_cast<std::size_t>(k - 1)];
}

bool OddsSequence::finite_at(int k) const { return std::isfinite(r(k)); }

OddsSequence odds(const SuccessProfile& profile) { return OddsSequence(profile); }

SuccessProfile load_profile(std::istream& source, ProfileFormat format) {
  std::vector<double> values;
  if (format == ProfileFormat::Csv) {
    std::string line;
    int lineno = 0;
    while (std::getline(source, line)) {
      ++lineno;
      std::string cell = trim(line);
      if (cell.empty() || cell[0] == '#') continue;
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ValidationError("line " + std::to_string(lineno) +
                              ": expected a decimal literal, got \"" + cell + "\"");
      }
      values.push_back(v);
    }
  } else {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(source);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(std::string("JSON parse failure: ") + e.what());
    }
    if (!doc.is_array()) throw ValidationError("profile JSON must be a flat numeric array");
    for (const auto& item : doc) {
      if (!item.is_number()) throw ValidationError("profile JSON must contain only numbers");
      values.push_back(item.get<double>());
    }
  }
  if (values.empty()) throw ValidationError("profile input holds no probabilities");
  return SuccessProfile::from_probabilities(std::move(values));
}

SuccessProfile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open profile file: " + path);
  bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return load_profile(in, json ? ProfileFormat::Json : ProfileFormat::Csv);
}

std::string serialize_profile(const SuccessProfile& profile, ProfileFormat format) {
  std::ostringstream out;
  if (format == ProfileFormat::Csv) {
    out.precision(std::numeric_limits<double>::max_digits10);
    for (double p : profile.probabilities()) out << p << '\n';
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (double p : profile.probabilities()) arr.push_back(p);
    out << arr.dump();
  }
  return out.str();
}

}  // namespace laststop
