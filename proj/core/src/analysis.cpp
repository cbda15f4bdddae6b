#include "idsbed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace idsbed {

double dispersion_index(std::span<const std::uint64_t> counts) {
  if (counts.empty()) throw Error(ErrorKind::EmptyInput, "dispersion index of no classes");
  const double n = static_cast<double>(counts.size());
  double mean = 0.0;
  for (const auto c : counts) mean += static_cast<double>(c);
  mean /= n;
  if (mean == 0.0) throw Error(ErrorKind::ZeroMean, "dispersion index with zero mean");
  double var = 0.0;
  for (const auto c : counts) {
    const double d = static_cast<double>(c) - mean;
    var += d * d;
  }
  return var / n / mean;
}

double relative_class_deviation(std::uint64_t a, std::uint64_t b) {
  if (a + b == 0) throw Error(ErrorKind::ZeroMean, "class deviation of empty counts");
  const double diff = a > b ? static_cast<double>(a - b) : static_cast<double>(b - a);
  return 2.0 * diff / static_cast<double>(a + b);
}

bool DuplicateCounter::feed(const LogRecord& record) {
  auto key = duplicate_key(record);
  const bool dup = previous_ && *previous_ == key;
  if (dup) ++count_;
  previous_ = std::move(key);
  return dup;
}

std::uint64_t duplicate_count(std::span<const LogRecord> log) {
  DuplicateCounter counter;
  for (const auto& r : log) counter.feed(r);
  return counter.count();
}

std::int64_t bin_index(double value, double bin_width) {
  auto k = static_cast<std::int64_t>(std::floor(value / bin_width));
  // The division can round across an edge; settle on the half-open bin.
  if (static_cast<double>(k + 1) * bin_width <= value) ++k;
  if (static_cast<double>(k) * bin_width > value) --k;
  return k;
}

std::map<std::int64_t, double> histogram(std::span<const double> values, double bin_width) {
  if (!(bin_width > 0.0)) throw Error(ErrorKind::InvalidParams, "bin width must be > 0");
  std::map<std::int64_t, double> out;
  if (values.empty()) return out;
  std::map<std::int64_t, std::uint64_t> counts;
  for (const double v : values) ++counts[bin_index(v, bin_width)];
  const double n = static_cast<double>(values.size());
  for (const auto& [k, c] : counts) out.emplace(k, static_cast<double>(c) / n);
  return out;
}

std::string Heatmap::to_csv() const {
  std::ostringstream out;
  for (int row = 0; row < rows; ++row) {
    for (int col = 0; col < cols; ++col) {
      if (col) out << ',';
      out << format_double(at(col, row));
    }
    out << '\n';
  }
  return out.str();
}

Heatmap position_heatmap(std::span<const LogRecord> records, int width, int height, int cell) {
  if (width <= 0 || height <= 0 || cell <= 0) {
    throw Error(ErrorKind::InvalidParams, "heatmap dimensions must be positive");
  }
  Heatmap map;
  map.cols = (width + cell - 1) / cell;
  map.rows = (height + cell - 1) / cell;
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(map.cols * map.rows), 0);
  std::uint64_t total = 0;
  for (const auto& r : records) {
    if (r.category != DataCategory::Color) continue;
    const auto pos = position_of(r.payload);
    if (!pos) continue;
    const int col = std::clamp(static_cast<int>(std::floor(pos->x / cell)), 0, map.cols - 1);
    const int row = std::clamp(static_cast<int>(std::floor(pos->y / cell)), 0, map.rows - 1);
    ++counts[static_cast<std::size_t>(row * map.cols + col)];
    ++total;
  }
  map.freq.assign(counts.size(), 0.0);
  if (total == 0) return map;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    map.freq[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return map;
}

double r_squared(std::span<const double> baseline, std::span<const double> candidate) {
  if (baseline.size() != candidate.size()) {
    throw Error(ErrorKind::LengthMismatch, "r_squared needs equally sized series");
  }
  if (baseline.empty()) throw Error(ErrorKind::DegenerateBaseline, "empty baseline");
  const double mean =
      std::accumulate(baseline.begin(), baseline.end(), 0.0) / static_cast<double>(baseline.size());
  double ss_tot = 0.0;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    const double t = baseline[i] - mean;
    const double r = candidate[i] - baseline[i];
    ss_tot += t * t;
    ss_res += r * r;
  }
  if (ss_tot == 0.0) throw Error(ErrorKind::DegenerateBaseline, "baseline has zero variance");
  return 1.0 - ss_res / ss_tot;
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorKind::LengthMismatch, "xs and ys differ in length");
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 2) throw Error(ErrorKind::DegenerateInput, "need at least two points");
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::DegenerateInput, "all xs are equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.mse = ss_res / n;
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

}  // namespace idsbed
