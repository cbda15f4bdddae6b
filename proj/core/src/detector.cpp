#include "idsbed/detector.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "idsbed/sim2d.hpp"

namespace idsbed {

Observation observe(const LogRecord& record) {
  return {record.vtime_ms, record.client_id, record.category, record.payload};
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Normal: return "normal";
    case Verdict::Intrusion: return "intrusion";
    case Verdict::Abstain: return "abstain";
  }
  return "abstain";
}

std::vector<double> features(DataCategory category, const Payload& payload) {
  if (!schema_matches(category, payload)) {
    throw Error(ErrorKind::CategorySchemaMismatch, "payload does not match category");
  }
  return std::visit(
      [](const auto& p) -> std::vector<double> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ScalarPayload>) {
          return {p.value};
        } else if constexpr (std::is_same_v<T, ColorPayload>) {
          return {static_cast<double>(p.color.r), static_cast<double>(p.color.g),
                  static_cast<double>(p.color.b)};
        } else if constexpr (std::is_same_v<T, CountryCodePayload>) {
          return {p.pos.x, p.pos.y};
        } else if constexpr (std::is_same_v<T, PoiPayload>) {
          return {is_legal_poi_type(p.type) ? 1.0 : 0.0};
        } else {
          return {std::hypot(p.target.x - p.pos.x, p.target.y - p.pos.y)};
        }
      },
      payload);
}

double empirical_quantile(std::span<const double> sorted, double p) {
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

Interval train(std::vector<double> values, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw Error(ErrorKind::InvalidParams, "alpha must lie in (0, 0.5)");
  }
  if (values.size() < kMinTrainingValues) {
    throw Error(ErrorKind::InsufficientData, "need at least " +
                                                 std::to_string(kMinTrainingValues) +
                                                 " training values, got " +
                                                 std::to_string(values.size()));
  }
  std::sort(values.begin(), values.end());
  return {empirical_quantile(values, alpha), empirical_quantile(values, 1.0 - alpha)};
}

Verdict classify(const Interval& interval, double value) {
  return interval.contains(value) ? Verdict::Normal : Verdict::Intrusion;
}

IntervalDetector IntervalDetector::fit(std::span<const LogRecord> records, double alpha) {
  IntervalDetector detector;
  detector.alpha_ = alpha;
  std::array<std::vector<std::vector<double>>, kCategoryCount> columns;
  for (const auto& r : records) {
    if (r.label != Label::Normal) continue;
    const auto f = features(r.category, r.payload);
    auto& cols = columns[index_of(r.category)];
    if (cols.empty()) cols.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) cols[i].push_back(f[i]);
  }
  for (const auto c : kAllCategories) {
    auto& cols = columns[index_of(c)];
    if (cols.empty() || cols.front().size() < kMinTrainingValues) continue;
    std::vector<Interval> bounds;
    for (auto& col : cols) bounds.push_back(train(std::move(col), alpha));
    detector.set(c, std::move(bounds));
  }
  return detector;
}

void IntervalDetector::set(DataCategory category, std::vector<Interval> bounds) {
  for (const auto& b : bounds) {
    if (!(b.lo <= b.hi)) throw Error(ErrorKind::InvalidParams, "interval with lo > hi");
  }
  bounds_[index_of(category)] = std::move(bounds);
}

const std::vector<Interval>& IntervalDetector::bounds(DataCategory category) const {
  const auto& b = bounds_[index_of(category)];
  if (!b) {
    throw Error(ErrorKind::DetectorFailure,
                "no model for category " + std::string(to_string(category)));
  }
  return *b;
}

Verdict IntervalDetector::classify(const Observation& observation) {
  const auto& b = bounds(observation.category);
  const auto f = features(observation.category, observation.payload);
  if (f.size() != b.size()) throw Error(ErrorKind::DetectorFailure, "feature arity mismatch");
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!b[i].contains(f[i])) return Verdict::Intrusion;
  }
  return Verdict::Normal;
}

std::string IntervalDetector::to_json() const {
  nlohmann::json j;
  j["alpha"] = alpha_;
  j["categories"] = nlohmann::json::object();
  for (const auto c : kAllCategories) {
    const auto& b = bounds_[index_of(c)];
    if (!b) continue;
    auto& arr = j["categories"][std::string(to_string(c))];
    arr = nlohmann::json::array();
    for (const auto& iv : *b) arr.push_back({iv.lo, iv.hi});
  }
  return j.dump(2);
}

IntervalDetector IntervalDetector::from_json(std::string_view text) {
  IntervalDetector d;
  try {
    const auto j = nlohmann::json::parse(text.begin(), text.end());
    d.alpha_ = j.at("alpha").get<double>();
    for (const auto& [name, arr] : j.at("categories").items()) {
      const auto c = parse_category(name);
      if (!c) throw Error(ErrorKind::ConfigParseError, "unknown category '" + name + "'");
      std::vector<Interval> bounds;
      for (const auto& iv : arr) bounds.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
      d.set(*c, std::move(bounds));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigParseError, std::string("detector model: ") + e.what());
  }
  return d;
}

double ScoreReport::precision() const {
  return precision_defined() ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
}

double ScoreReport::recall() const {
  return recall_defined() ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
}

void ScoreReport::add(Verdict verdict, Label truth) {
  const bool positive = truth == Label::Intrusion;
  switch (verdict) {
    case Verdict::Abstain: ++abstained; break;
    case Verdict::Intrusion: ++(positive ? tp : fp); break;
    case Verdict::Normal: ++(positive ? fn : tn); break;
  }
}

ScoreReport& ScoreReport::operator+=(const ScoreReport& o) {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  abstained += o.abstained;
  return *this;
}

ScoreReport score(std::span<const Verdict> verdicts, std::span<const Label> labels) {
  if (verdicts.size() != labels.size()) {
    throw Error(ErrorKind::LengthMismatch, "verdicts and labels differ in length");
  }
  ScoreReport report;
  for (std::size_t i = 0; i < verdicts.size(); ++i) report.add(verdicts[i], labels[i]);
  return report;
}

}  // namespace idsbed
