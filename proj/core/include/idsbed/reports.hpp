#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "idsbed/analysis.hpp"
#include "idsbed/record.hpp"

namespace idsbed {

/// Calls `fn` for every record of a log file in order. Parse failures are
/// rethrown as MalformedRecord / CategorySchemaMismatch with the line number.
void for_each_record(const std::filesystem::path& path,
                     const std::function<void(const LogRecord&)>& fn);

std::vector<LogRecord> read_log(const std::filesystem::path& path);

struct ClassCounts {
  std::uint64_t normal = 0;
  std::uint64_t intrusion = 0;
  std::uint64_t duplicates = 0;

  std::uint64_t total() const { return normal + intrusion; }
  /// Two-class dispersion index; 0 when the group is empty.
  double dispersion() const;
  /// 2|N - I| / (N + I); 0 when the group is empty.
  double deviation() const;
  double duplicate_rate() const;
};

struct QualityReport {
  std::array<ClassCounts, kCategoryCount> categories{};
  bool vtime_monotone = true;

  ClassCounts group(CategoryGroup g) const;
  std::uint64_t total() const;

  std::string to_text() const;
  std::string to_json() const;
};

class QualityAccumulator {
 public:
  void add(const LogRecord& record);
  const QualityReport& report() const { return report_; }

 private:
  QualityReport report_;
  DuplicateCounter duplicates_;
  std::int64_t last_vtime_ = 0;
};

QualityReport analyze_log(const std::filesystem::path& path);

inline constexpr double kHistogramBin = 0.1;

/// Per-log frequency summaries compared across runs.
class Fingerprint {
 public:
  explicit Fingerprint(int width = 500, int height = 500);

  void add(const LogRecord& record);

  /// Generator value histograms over all records, and over normal records.
  std::map<std::int64_t, double> generator_histogram(DataCategory c, bool normal_only) const;
  /// Relative frequency of each POI form "type/result".
  std::map<std::string, double> poi_pairs() const;
  Heatmap heatmap() const;
  std::uint64_t count(DataCategory c) const { return counts_[index_of(c)]; }

 private:
  int width_;
  int height_;
  int cell_ = kHeatmapCell;
  std::array<std::uint64_t, kCategoryCount> counts_{};
  std::array<std::map<std::int64_t, std::uint64_t>, kGeneratorCategoryCount> all_;
  std::array<std::map<std::int64_t, std::uint64_t>, kGeneratorCategoryCount> normal_;
  std::array<std::uint64_t, kGeneratorCategoryCount> normal_total_{};
  std::map<std::string, std::uint64_t> poi_;
  std::vector<std::uint64_t> cells_;
  std::uint64_t cells_total_ = 0;
};

Fingerprint fingerprint_log(const std::filesystem::path& path, int width = 500, int height = 500);

struct ReproRow {
  std::string name;     // e.g. "gaussian", "gaussian:normal", "poi_pairs", "heatmap"
  std::string binning;  // e.g. "bin=0.1"
  std::vector<double> r_squared;  // one per candidate
};

struct ReproReport {
  std::vector<ReproRow> rows;
  std::vector<std::string> warnings;

  const ReproRow* find(std::string_view name) const;
  std::string to_text() const;
  std::string to_json() const;
};

/// R^2 of every candidate against the baseline, over the categories present
/// in the baseline and all candidates.
ReproReport compare(const Fingerprint& baseline, const std::vector<Fingerprint>& candidates);

}  // namespace idsbed
