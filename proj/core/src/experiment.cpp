#include "idsbed/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "idsbed/orchestrator.hpp"

namespace idsbed {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

/// Indices of a uniform sample without replacement (partial Fisher-Yates).
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace

std::vector<LogRecord> generate_records(const ScenarioConfig& config) {
  std::vector<LogRecord> out;
  if (config.records) out.reserve(static_cast<std::size_t>(*config.records));
  CallbackSink sink([&out](const ClientRequest& r) {
    out.push_back(LogRecord{r.sent_ms, r.client_id, r.category, r.payload, r.label});
  });
  auto virtual_config = config;
  virtual_config.mode = RunMode::VirtualTime;
  run(virtual_config, sink);
  return out;
}

ScenarioConfig gap_scenario(DifficultyLevel level, const GapOptions& options) {
  ScenarioConfig config;
  config.seed = options.seed + static_cast<std::uint64_t>(level) * 1000;
  config.records = options.pool_size;
  for (const auto kind : kAllDistributions) {
    const std::string name(to_string(kind));
    GeneratorConfig g;
    g.spec = DistributionSpec::defaults(kind);
    g.level = level;
    config.clients.push_back({"gen-" + name + "-n", {g}});
    g.intrusion = NumericIntrusion::OffValue;
    config.clients.push_back({"gen-" + name + "-c", {g}});
  }
  for (std::size_t u = 0; u < options.sim2d_units; ++u) {
    Sim2dConfig s;
    s.level = level;
    config.clients.push_back({"sim-" + std::to_string(u) + "-n", {s}});
    s.flags = {.color_area = true, .illegal_dwell = false, .country_code = true, .poi = true,
               .route = true};
    config.clients.push_back({"sim-" + std::to_string(u) + "-c", {s}});
  }
  return config;
}

double CategoryGap::recall_gap_pp() const {
  const auto e = by_level.find(DifficultyLevel::Easy);
  const auto h = by_level.find(DifficultyLevel::Hard);
  if (e == by_level.end() || h == by_level.end()) return 0.0;
  return 100.0 * (e->second.recall - h->second.recall);
}

double CategoryGap::precision_gap_pp() const {
  const auto e = by_level.find(DifficultyLevel::Easy);
  const auto h = by_level.find(DifficultyLevel::Hard);
  if (e == by_level.end() || h == by_level.end()) return 0.0;
  return 100.0 * (e->second.precision - h->second.precision);
}

const CategoryGap* GapReport::find(DataCategory c) const {
  for (const auto& row : rows) {
    if (row.category == c) return &row;
  }
  return nullptr;
}

bool GapReport::significant(DataCategory c) const {
  const auto* row = find(c);
  if (row == nullptr) return false;
  return std::abs(row->recall_gap_pp()) >= options.threshold_pp ||
         std::abs(row->precision_gap_pp()) >= options.threshold_pp;
}

std::string GapReport::to_text() const {
  std::ostringstream out;
  out << "category      ";
  for (const auto l : options.levels) {
    out << "  " << to_string(l) << " P/R      ";
  }
  out << "  dR(pp)   dP(pp)  gap\n";
  for (const auto& row : rows) {
    std::string name(to_string(row.category));
    name.resize(14, ' ');
    out << name;
    for (const auto l : options.levels) {
      const auto it = row.by_level.find(l);
      if (it == row.by_level.end()) {
        out << "  -              ";
        continue;
      }
      out << "  " << fixed(100.0 * it->second.precision, 2) << "/"
          << fixed(100.0 * it->second.recall, 2);
    }
    out << "  " << fixed(row.recall_gap_pp(), 2) << "  " << fixed(row.precision_gap_pp(), 2)
        << "  " << (significant(row.category) ? "yes" : "no") << '\n';
  }
  return out.str();
}

std::string GapReport::to_json() const {
  nlohmann::json j;
  j["alpha"] = options.alpha;
  j["n_sets"] = options.n_sets;
  j["set_size"] = options.set_size;
  j["pool_size"] = options.pool_size;
  j["threshold_pp"] = options.threshold_pp;
  for (const auto& row : rows) {
    auto& r = j["categories"][std::string(to_string(row.category))];
    for (const auto& [level, s] : row.by_level) {
      r[std::string(to_string(level))] = {{"precision", s.precision},
                                          {"recall", s.recall},
                                          {"tp", s.totals.tp},
                                          {"fp", s.totals.fp},
                                          {"tn", s.totals.tn},
                                          {"fn", s.totals.fn},
                                          {"abstained", s.totals.abstained}};
    }
    r["recall_gap_pp"] = row.recall_gap_pp();
    r["precision_gap_pp"] = row.precision_gap_pp();
    r["significant"] = significant(row.category);
  }
  return j.dump(2);
}

GapReport difficulty_gap_experiment(const GapOptions& options) {
  GapReport report;
  report.options = options;
  for (const auto c : kAllCategories) report.rows.push_back({c, {}});

  for (const auto level : options.levels) {
    const auto pool = generate_records(gap_scenario(level, options));
    std::array<ScoreReport, kCategoryCount> totals{};
    std::array<double, kCategoryCount> precision_sum{};
    std::array<double, kCategoryCount> recall_sum{};
    std::array<std::size_t, kCategoryCount> sets_scored{};

    Rng rng(mix64(options.seed ^ (0xabcdULL + static_cast<std::uint64_t>(level))));
    for (std::size_t s = 0; s < options.n_sets; ++s) {
      const auto idx = sample_indices(pool.size(), options.set_size, rng);
      std::vector<LogRecord> set;
      set.reserve(idx.size());
      for (const auto i : idx) set.push_back(pool[i]);

      auto detector = IntervalDetector::fit(set, options.alpha);
      std::array<ScoreReport, kCategoryCount> per_set{};
      for (const auto& r : set) {
        Verdict v = Verdict::Abstain;
        try {
          v = detector.classify(observe(r));
        } catch (const Error&) {
          v = Verdict::Abstain;
        }
        per_set[index_of(r.category)].add(v, r.label);
      }
      for (std::size_t c = 0; c < kCategoryCount; ++c) {
        if (per_set[c].total() == 0) continue;
        totals[c] += per_set[c];
        precision_sum[c] += per_set[c].precision();
        recall_sum[c] += per_set[c].recall();
        ++sets_scored[c];
      }
    }
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      if (sets_scored[c] == 0) continue;
      const double n = static_cast<double>(sets_scored[c]);
      report.rows[c].by_level[level] = {precision_sum[c] / n, recall_sum[c] / n, totals[c]};
    }
  }
  return report;
}

}  // namespace idsbed
