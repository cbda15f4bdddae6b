#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idsbed/record.hpp"

namespace idsbed {

/// What a detector is allowed to see: no ground-truth label.
struct Observation {
  std::int64_t vtime_ms = 0;
  std::string client_id;
  DataCategory category = DataCategory::Gaussian;
  Payload payload = ScalarPayload{};
};

Observation observe(const LogRecord& record);

enum class Verdict : std::uint8_t { Normal, Intrusion, Abstain };

std::string_view to_string(Verdict verdict);

class Detector {
 public:
  virtual ~Detector() = default;
  /// May throw; the server isolates failures as Abstain.
  virtual Verdict classify(const Observation& observation) = 0;
};

/// Numeric features per category:
///   generators    value
///   color         r, g, b
///   country_code  x, y
///   poi           1 if the type is a legal POI type, else 0
///   route         distance from position to target
std::vector<double> features(DataCategory category, const Payload& payload);

/// Empirical quantile with linear interpolation between order statistics
/// (h = (n - 1) p). `sorted` must be ascending and non-empty.
double empirical_quantile(std::span<const double> sorted, double p);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline constexpr double kDefaultAlpha = 0.001;
inline constexpr std::size_t kMinTrainingValues = 100;

/// Normal interval [q(alpha), q(1 - alpha)] of the training values.
/// Throws InvalidParams unless 0 < alpha < 0.5 and InsufficientData for fewer
/// than 100 values.
Interval train(std::vector<double> values, double alpha);

/// Intrusion iff the value lies outside the closed interval.
Verdict classify(const Interval& interval, double value);

/// One interval per feature per category, learned from normal records.
class IntervalDetector final : public Detector {
 public:
  IntervalDetector() = default;

  /// Trains every category that has at least 100 normal records; labels are
  /// used only to select the training records.
  static IntervalDetector fit(std::span<const LogRecord> records, double alpha = kDefaultAlpha);

  void set(DataCategory category, std::vector<Interval> bounds);
  bool trained(DataCategory category) const { return bounds_[index_of(category)].has_value(); }
  const std::vector<Interval>& bounds(DataCategory category) const;
  double alpha() const { return alpha_; }

  /// Intrusion iff any feature falls outside its interval. Throws
  /// DetectorFailure for categories without a model.
  Verdict classify(const Observation& observation) override;

  std::string to_json() const;
  static IntervalDetector from_json(std::string_view text);

 private:
  double alpha_ = kDefaultAlpha;
  std::array<std::optional<std::vector<Interval>>, kCategoryCount> bounds_{};
};

struct ScoreReport {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;
  std::uint64_t abstained = 0;

  std::uint64_t total() const { return tp + fp + tn + fn + abstained; }
  /// False when nothing was predicted positive; precision() then reports 0.
  bool precision_defined() const { return tp + fp > 0; }
  bool recall_defined() const { return tp + fn > 0; }
  double precision() const;
  double recall() const;

  void add(Verdict verdict, Label truth);
  ScoreReport& operator+=(const ScoreReport& other);
};

/// Confusion counts with intrusions as positives. Abstentions are counted
/// separately. Throws LengthMismatch for unequal lengths.
ScoreReport score(std::span<const Verdict> verdicts, std::span<const Label> labels);

}  // namespace idsbed
