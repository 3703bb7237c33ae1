#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "laststop/errors.hpp"

namespace laststop {

/// Ordered success probabilities p_1..p_n of independent Bernoulli trials.
///
/// Probabilities live in (0, 1]. A certain trial (p_k = 1) is permitted,
/// since the Karamata-Stirling family starts with one, but any operation
/// that needs its odds ratio fails with InfiniteOddsError. Immutable after
/// construction; safe to share across threads.
class SuccessProfile {
 public:
  /// Validates and takes ownership of the probabilities (1-based trial order).
  static SuccessProfile from_probabilities(std::vector<double> probabilities);

  /// Karamata-Stirling profile p_k = theta / (theta + k - 1), k = 1..n.
  /// theta = 1 recovers the classical record model p_k = 1/k.
  static SuccessProfile karamata_stirling(double theta, int n);

  int size() const noexcept { return static_cast<int>(p_.size()); }

  /// Success probability of trial k (1-based).
  double p(int k) const;

  std::span<const double> probabilities() const noexcept { return p_; }

  bool has_certain_trial() const noexcept { return certain_count_ > 0; }
  bool is_certain(int k) const { return p(k) == 1.0; }

 private:
  explicit SuccessProfile(std::vector<double> p);

  std::vector<double> p_;
  int certain_count_ = 0;
};

/// Odds ratios r_k = p_k / (1 - p_k), 1-based like the profile.
///
/// Certain trials carry r_k = +infinity; consumers that need a finite value
/// check finite_at() and raise InfiniteOddsError otherwise.
class OddsSequence {
 public:
  explicit OddsSequence(const SuccessProfile& profile);

  int size() const noexcept { return static_cast<int>(r_.size()); }
  double r(int k) const;
  bool finite_at(int k) const;

 private:
  std::vector<double> r_;
};

/// Elementwise odds of a profile.
OddsSequence odds(const SuccessProfile& profile);

enum class ProfileFormat { Csv, Json };

/// Parses a profile from a stream. CSV: one decimal literal per line,
/// '#' starts a comment line, blank lines ignored. JSON: flat numeric array.
SuccessProfile load_profile(std::istream& source, ProfileFormat format);

/// Loads from a file; ".json" extension selects JSON, anything else CSV.
SuccessProfile load_profile_file(const std::string& path);

/// Serializes at full double precision so a round-trip is elementwise exact.
std::string serialize_profile(const SuccessProfile& profile, ProfileFormat format);

}  // namespace laststop
