#include "idsbed/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace idsbed {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

template <typename Key>
std::map<Key, double> normalize(const std::map<Key, std::uint64_t>& counts, std::uint64_t total) {
  std::map<Key, double> out;
  if (total == 0) return out;
  for (const auto& [k, c] : counts) {
    out.emplace(k, static_cast<double>(c) / static_cast<double>(total));
  }
  return out;
}

nlohmann::json counts_json(const ClassCounts& c) {
  return {{"elements", c.total()},         {"normal", c.normal},
          {"intrusion", c.intrusion},      {"dispersion_index", c.dispersion()},
          {"class_deviation", c.deviation()}, {"duplicates", c.duplicates},
          {"duplicate_rate", c.duplicate_rate()}};
}

}  // namespace

void for_each_record(const std::filesystem::path& path,
                     const std::function<void(const LogRecord&)>& fn) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open log " + path.string());
  std::string line;
  std::uint64_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    LogRecord record;
    try {
      record = parse_record(line);
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
    fn(record);
  }
}

std::vector<LogRecord> read_log(const std::filesystem::path& path) {
  std::vector<LogRecord> out;
  for_each_record(path, [&out](const LogRecord& r) { out.push_back(r); });
  return out;
}

double ClassCounts::dispersion() const {
  if (total() == 0) return 0.0;
  const std::array<std::uint64_t, 2> c{normal, intrusion};
  return dispersion_index(c);
}

double ClassCounts::deviation() const {
  return total() == 0 ? 0.0 : relative_class_deviation(normal, intrusion);
}

double ClassCounts::duplicate_rate() const {
  return total() == 0 ? 0.0 : static_cast<double>(duplicates) / static_cast<double>(total());
}

ClassCounts QualityReport::group(CategoryGroup g) const {
  ClassCounts out;
  for (const auto c : kAllCategories) {
    if (group_of(c) != g) continue;
    const auto& cc = categories[index_of(c)];
    out.normal += cc.normal;
    out.intrusion += cc.intrusion;
    out.duplicates += cc.duplicates;
  }
  return out;
}

std::uint64_t QualityReport::total() const {
  std::uint64_t n = 0;
  for (const auto& c : categories) n += c.total();
  return n;
}

std::string QualityReport::to_text() const {
  std::ostringstream out;
  out << pad_right("category", 14) << pad("elements", 12) << pad("normal", 12)
      << pad("intrusion", 12) << pad("dispersion", 14) << pad("deviation", 11)
      << pad("duplicates", 12) << '\n';
  auto row = [&out](std::string_view name, const ClassCounts& c) {
    out << pad_right(std::string(name), 14) << pad(std::to_string(c.total()), 12)
        << pad(std::to_string(c.normal), 12) << pad(std::to_string(c.intrusion), 12)
        << pad(fixed(c.dispersion(), 1), 14) << pad(fixed(100.0 * c.deviation(), 2) + "%", 11)
        << pad(fixed(100.0 * c.duplicate_rate(), 3) + "%", 12) << '\n';
  };
  for (const auto c : kAllCategories) row(to_string(c), categories[index_of(c)]);
  out << '\n';
  for (const auto g : kAllGroups) row(to_string(g), group(g));
  out << "\nrecords " << total() << ", vtime monotone: " << (vtime_monotone ? "yes" : "no")
      << '\n';
  return out.str();
}

std::string QualityReport::to_json() const {
  nlohmann::json j;
  j["records"] = total();
  j["vtime_monotone"] = vtime_monotone;
  for (const auto g : kAllGroups) j["groups"][std::string(to_string(g))] = counts_json(group(g));
  for (const auto c : kAllCategories) {
    j["categories"][std::string(to_string(c))] = counts_json(categories[index_of(c)]);
  }
  return j.dump(2);
}

void QualityAccumulator::add(const LogRecord& record) {
  auto& c = report_.categories[index_of(record.category)];
  if (record.label == Label::Normal) {
    ++c.normal;
  } else {
    ++c.intrusion;
  }
  if (duplicates_.feed(record)) ++c.duplicates;
  if (record.vtime_ms < last_vtime_) report_.vtime_monotone = false;
  last_vtime_ = record.vtime_ms;
}

QualityReport analyze_log(const std::filesystem::path& path) {
  QualityAccumulator acc;
  for_each_record(path, [&acc](const LogRecord& r) { acc.add(r); });
  return acc.report();
}

Fingerprint::Fingerprint(int width, int height)
    : width_(width),
      height_(height),
      cells_(static_cast<std::size_t>(((width + kHeatmapCell - 1) / kHeatmapCell) *
                                      ((height + kHeatmapCell - 1) / kHeatmapCell)),
             0) {}

void Fingerprint::add(const LogRecord& record) {
  ++counts_[index_of(record.category)];
  if (is_generator(record.category)) {
    const double v = std::get<ScalarPayload>(record.payload).value;
    const auto k = bin_index(v, kHistogramBin);
    const auto i = index_of(record.category);
    ++all_[i][k];
    if (record.label == Label::Normal) {
      ++normal_[i][k];
      ++normal_total_[i];
    }
    return;
  }
  if (const auto* poi = std::get_if<PoiPayload>(&record.payload)) {
    ++poi_[poi->type + "/" + poi->result];
    return;
  }
  if (const auto* color = std::get_if<ColorPayload>(&record.payload)) {
    const int cols = (width_ + cell_ - 1) / cell_;
    const int rows = (height_ + cell_ - 1) / cell_;
    const int col = std::clamp(static_cast<int>(std::floor(color->pos.x / cell_)), 0, cols - 1);
    const int row = std::clamp(static_cast<int>(std::floor(color->pos.y / cell_)), 0, rows - 1);
    ++cells_[static_cast<std::size_t>(row * cols + col)];
    ++cells_total_;
  }
}

std::map<std::int64_t, double> Fingerprint::generator_histogram(DataCategory c,
                                                                bool normal_only) const {
  const auto i = index_of(c);
  if (normal_only) return normalize(normal_[i], normal_total_[i]);
  return normalize(all_[i], counts_[i]);
}

std::map<std::string, double> Fingerprint::poi_pairs() const {
  return normalize(poi_, counts_[index_of(DataCategory::Poi)]);
}

Heatmap Fingerprint::heatmap() const {
  Heatmap map;
  map.cols = (width_ + cell_ - 1) / cell_;
  map.rows = (height_ + cell_ - 1) / cell_;
  map.freq.assign(cells_.size(), 0.0);
  if (cells_total_ == 0) return map;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    map.freq[i] = static_cast<double>(cells_[i]) / static_cast<double>(cells_total_);
  }
  return map;
}

Fingerprint fingerprint_log(const std::filesystem::path& path, int width, int height) {
  Fingerprint fp(width, height);
  for_each_record(path, [&fp](const LogRecord& r) { fp.add(r); });
  return fp;
}

const ReproRow* ReproReport::find(std::string_view name) const {
  for (const auto& row : rows) {
    if (row.name == name) return &row;
  }
  return nullptr;
}

std::string ReproReport::to_text() const {
  std::ostringstream out;
  for (const auto& w : warnings) out << "warning: " << w << '\n';
  out << pad_right("series", 20) << pad_right("binning", 14);
  const std::size_t n = rows.empty() ? 0 : rows.front().r_squared.size();
  for (std::size_t i = 0; i < n; ++i) out << pad("set " + std::to_string(i + 2), 12);
  out << '\n';
  for (const auto& row : rows) {
    out << pad_right(row.name, 20) << pad_right(row.binning, 14);
    for (const double r : row.r_squared) out << pad(fixed(r, 6), 12);
    out << '\n';
  }
  return out.str();
}

std::string ReproReport::to_json() const {
  nlohmann::json j;
  j["warnings"] = warnings;
  j["series"] = nlohmann::json::array();
  for (const auto& row : rows) {
    j["series"].push_back({{"name", row.name}, {"binning", row.binning}, {"r_squared", row.r_squared}});
  }
  return j.dump(2);
}

ReproReport compare(const Fingerprint& baseline, const std::vector<Fingerprint>& candidates) {
  ReproReport report;
  auto shared = [&](DataCategory c) {
    if (baseline.count(c) == 0) return false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (candidates[i].count(c) == 0) {
        report.warnings.push_back(std::string(to_string(c)) + " missing from set " +
                                  std::to_string(i + 2) + "; skipped");
        return false;
      }
    }
    return true;
  };
  auto add_row = [&](std::string name, std::string binning, auto&& series) {
    ReproRow row{std::move(name), std::move(binning), {}};
    try {
      for (const auto& cand : candidates) row.r_squared.push_back(series(cand));
    } catch (const Error& e) {
      report.warnings.push_back(row.name + ": " + e.what() + "; skipped");
      return;
    }
    report.rows.push_back(std::move(row));
  };

  for (std::size_t g = 0; g < kGeneratorCategoryCount; ++g) {
    const auto c = kAllCategories[g];
    if (!shared(c)) continue;
    const auto base_all = baseline.generator_histogram(c, false);
    add_row(std::string(to_string(c)), "bin=0.1", [&](const Fingerprint& f) {
      return r_squared(base_all, f.generator_histogram(c, false));
    });
    const auto base_normal = baseline.generator_histogram(c, true);
    if (base_normal.empty()) continue;
    add_row(std::string(to_string(c)) + ":normal", "bin=0.1", [&](const Fingerprint& f) {
      return r_squared(base_normal, f.generator_histogram(c, true));
    });
  }
  if (shared(DataCategory::Poi)) {
    const auto base = baseline.poi_pairs();
    add_row("poi_pairs", "type/result",
            [&](const Fingerprint& f) { return r_squared(base, f.poi_pairs()); });
  }
  if (shared(DataCategory::Color)) {
    const auto base = baseline.heatmap();
    add_row("heatmap", std::to_string(base.cols) + "x" + std::to_string(base.rows),
            [&](const Fingerprint& f) { return r_squared(base.freq, f.heatmap().freq); });
  }
  return report;
}

}  // namespace idsbed
