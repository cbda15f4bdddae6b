#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idsbed/record.hpp"

namespace idsbed {

/// Population variance of the counts divided by their mean.
/// Throws EmptyInput for no classes and ZeroMean when all counts are zero.
double dispersion_index(std::span<const std::uint64_t> counts);

/// |a - b| relative to the mean class count, i.e. 2|a - b| / (a + b).
/// A deviation r corresponds to a two-class dispersion index of r^2 * mean / 4.
double relative_class_deviation(std::uint64_t a, std::uint64_t b);

/// Streaming form of duplicate_count: feed records in log order.
class DuplicateCounter {
 public:
  /// Returns true when `record` duplicates the previously fed record.
  bool feed(const LogRecord& record);
  std::uint64_t count() const { return count_; }

 private:
  std::optional<std::string> previous_;
  std::uint64_t count_ = 0;
};

/// Records equal to their immediate predecessor in client id, position, data
/// and label. Compared on the canonical line without the time field.
std::uint64_t duplicate_count(std::span<const LogRecord> log);

/// Bin index k of the half-open bin [k*w, (k+1)*w) containing v.
std::int64_t bin_index(double value, double bin_width);

/// Relative frequency per bin index. Empty input gives an empty map.
std::map<std::int64_t, double> histogram(std::span<const double> values, double bin_width);

inline constexpr int kHeatmapCell = 20;

struct Heatmap {
  int cols = 0;
  int rows = 0;
  std::vector<double> freq;  // row-major, rows = y cells

  double at(int col, int row) const { return freq[static_cast<std::size_t>(row * cols + col)]; }
  /// One CSV row per y cell, one column per x cell.
  std::string to_csv() const;
};

/// Relative frequency of unit positions in cell x cell bins over a
/// width x height environment. Only Color readings are counted: they are the
/// unit's own position reports (positional requests may carry displaced
/// coordinates).
Heatmap position_heatmap(std::span<const LogRecord> records, int width = 500, int height = 500,
                         int cell = kHeatmapCell);

/// 1 - SS_res / SS_tot with the baseline as the reference series.
/// Throws LengthMismatch for unequal sizes and DegenerateBaseline when the
/// baseline has zero variance.
double r_squared(std::span<const double> baseline, std::span<const double> candidate);

/// Aligns the two maps on the union of keys (missing bins count as 0).
template <typename Key>
double r_squared(const std::map<Key, double>& baseline, const std::map<Key, double>& candidate) {
  std::map<Key, std::pair<double, double>> joined;
  for (const auto& [k, v] : baseline) joined[k].first = v;
  for (const auto& [k, v] : candidate) joined[k].second = v;
  std::vector<double> b;
  std::vector<double> c;
  b.reserve(joined.size());
  c.reserve(joined.size());
  for (const auto& [k, v] : joined) {
    b.push_back(v.first);
    c.push_back(v.second);
  }
  return r_squared(b, c);
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double mse = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares. Throws LengthMismatch or DegenerateInput (fewer
/// than two distinct xs).
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

}  // namespace idsbed
