// Acceptance runner: evaluates each criterion and prints one PASS/FAIL line.
// Exit status is 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idsbed/bench.hpp"
#include "idsbed/datagen.hpp"
#include "idsbed/experiment.hpp"
#include "idsbed/reports.hpp"
#include "idsbed/sim2d.hpp"
#include "oracles.hpp"

using namespace idsbed;

namespace {

const std::string kScenarios = IDSBED_SCENARIO_DIR;

struct Outcome {
  bool pass = true;
  std::ostringstream details;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      details << "[fail] ";
    }
    details << what << "; ";
  }
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// 1. Color construction --------------------------------------------------------

void colors(Outcome& o) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t i = 0; i < kLegalColors.size(); ++i) {
    for (std::size_t j = i + 1; j < kLegalColors.size(); ++j) {
      const double d = color_distance(kLegalColors[i], kLegalColors[j]);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      sum += d;
      ++pairs;
    }
  }
  const double mean = sum / pairs;
  o.check(lo >= 0.196 - 5e-4 && hi <= 0.498 + 5e-4,
          "legal pair distances [" + fmt(lo, 3) + ", " + fmt(hi, 3) + "]");
  o.check(std::abs(mean - 0.256) <= 0.001, "legal mean " + fmt(mean));
  const double want[] = {1.103, 0.774, 0.590};
  for (const auto level : kAllLevels) {
    const double d = average_legal_distance(erroneous_color(level));
    o.check(std::abs(d - want[static_cast<int>(level)]) <= 0.001,
            std::string(to_string(level)) + " erroneous " + fmt(d));
  }
}

// 2. Class balance -------------------------------------------------------------

void balance(Outcome& o) {
  auto config = load_scenario(kScenarios + "/default.json");
  config.records = 1'000'000;
  const auto records = generate_records(config);
  QualityAccumulator acc;
  for (const auto& r : records) acc.add(r);
  const auto& report = acc.report();
  o.check(report.total() == 1'000'000, std::to_string(report.total()) + " records");
  for (const auto g : kAllGroups) {
    const auto c = report.group(g);
    const std::string name(to_string(g));
    o.check(c.deviation() < 0.05, name + " deviation " + fmt(100.0 * c.deviation(), 2) + "%");
    if (g == CategoryGroup::Generators) {
      o.check(c.duplicates == 0, name + " duplicates " + std::to_string(c.duplicates));
    } else {
      o.check(c.duplicate_rate() < 0.001,
              name + " duplicates " + fmt(100.0 * c.duplicate_rate(), 4) + "%");
    }
  }
}

// 3. Reproducibility -----------------------------------------------------------

Fingerprint fingerprint(const ScenarioConfig& config) {
  Fingerprint fp;
  for (const auto& r : generate_records(config)) fp.add(r);
  return fp;
}

double first_r2(const ReproReport& report, const std::string& row) {
  const auto* r = report.find(row);
  return r == nullptr || r->r_squared.empty() ? std::numeric_limits<double>::quiet_NaN()
                                               : r->r_squared.front();
}

/// One normal and one off-value client of a single distribution.
ScenarioConfig generator_repro(DistributionKind kind, std::uint64_t seed) {
  ScenarioConfig config;
  config.seed = seed;
  config.records = 250'000;
  GeneratorConfig g;
  g.spec = DistributionSpec::defaults(kind);
  config.clients.push_back({"normal", {g}});
  g.intrusion = NumericIntrusion::OffValue;
  config.clients.push_back({"off", {g}});
  return config;
}

std::string serialized(const ScenarioConfig& config) {
  std::string out;
  for (const auto& r : generate_records(config)) {
    out += serialize_record(r);
    out += '\n';
  }
  return out;
}

void reproducibility(Outcome& o) {
  double worst = 1.0;
  std::string worst_name;
  for (const auto kind : kAllDistributions) {
    const auto report =
        compare(fingerprint(generator_repro(kind, 1)), {fingerprint(generator_repro(kind, 2))});
    const std::string name(to_string(category_of(kind)));
    const double r2 = first_r2(report, name);
    if (!(r2 >= worst)) {
      worst = r2;
      worst_name = name;
    }
    if (kind == DistributionKind::Gaussian) {
      const double normal = first_r2(report, name + ":normal");
      o.check(normal >= 0.999, "gaussian normal-only R2 " + fmt(normal));
    }
  }
  o.check(worst >= 0.999, "min generator R2 " + fmt(worst) + " (" + worst_name + ")");

  auto sim = load_scenario(kScenarios + "/repro_sim2d.json");
  sim.seed = 1;
  const auto base = fingerprint(sim);
  sim.seed = 2;
  const auto report = compare(base, {fingerprint(sim)});
  const double poi = first_r2(report, "poi_pairs");
  const double heat = first_r2(report, "heatmap");
  o.check(poi >= 0.999, "POI pairs R2 " + fmt(poi));
  o.check(heat >= 0.99, "heatmap R2 " + fmt(heat));

  auto demo = load_scenario(kScenarios + "/demo.json");
  demo.records = 100'000;
  o.check(serialized(demo) == serialized(demo), "identical seed gives byte-identical log");
}

// 4. Difficulty gap ------------------------------------------------------------

void difficulty_gap(Outcome& o) {
  const auto report = difficulty_gap_experiment(GapOptions{});
  for (const auto c : {DataCategory::Wald, DataCategory::Pareto, DataCategory::Rayleigh,
                       DataCategory::Uniform, DataCategory::Weibull}) {
    const auto* row = report.find(c);
    const double gap = row == nullptr ? 0.0 : row->recall_gap_pp();
    o.check(gap >= 5.0, std::string(to_string(c)) + " recall gap " + fmt(gap, 1) + "pp");
  }
  for (const auto c : {DataCategory::Poi, DataCategory::Route}) {
    const auto* row = report.find(c);
    const double gap = row == nullptr ? 0.0 : row->recall_gap_pp();
    o.check(std::abs(gap) < 5.0, std::string(to_string(c)) + " recall gap " + fmt(gap, 1) + "pp");
  }
}

// 5. Injection property suite --------------------------------------------------

void injection_properties(Outcome& o) {
  Rng gen(2024);
  int outside = 0;
  int far = 0;
  int ordered = 0;
  constexpr int kCases = 10'000;
  for (int c = 0; c < kCases; ++c) {
    const auto spec = oracle::random_spec(gen);
    const auto kind = gen.coin() ? NumericIntrusion::OffValue : NumericIntrusion::SignificantError;
    const auto seed = gen();
    const auto p = interval_profile(spec);
    bool all_outside = true;
    bool easy_far = true;
    bool monotone = true;
    double previous = std::numeric_limits<double>::infinity();
    for (const auto level : kAllLevels) {
      GeneratorComponent g({spec, 100, kind, level}, seed);
      const double v = g.next_value().value;
      const double span = v >= p.mean ? p.s_right : p.s_left;
      const double distance = std::abs(v - p.mean) / span;
      all_outside = all_outside && (v <= p.r_min || v >= p.r_max);
      if (level == DifficultyLevel::Easy) easy_far = distance >= 5.0 - 1e-9;
      monotone = monotone && distance < previous;
      previous = distance;
    }
    outside += all_outside;
    far += easy_far;
    ordered += monotone;
  }
  const auto n = std::to_string(kCases);
  o.check(outside == kCases, std::to_string(outside) + "/" + n + " outside interval");
  o.check(far == kCases, std::to_string(far) + "/" + n + " easy >= 5 spans");
  o.check(ordered == kCases, std::to_string(ordered) + "/" + n + " easy > medium > hard");
}

// 6. Metric oracles ------------------------------------------------------------

void metric_oracles(Outcome& o) {
  constexpr int kCases = 1000;
  Rng rng(99);
  int agree[5] = {};
  for (int i = 0; i < kCases; ++i) {
    const auto counts = oracle::random_counts(rng);
    agree[0] += oracle::close(dispersion_index(counts), oracle::dispersion_index(counts), 1e-9, 1e-9);

    const auto log = oracle::random_log(rng);
    agree[1] += duplicate_count(log) == oracle::duplicate_count(log);

    const auto values = oracle::random_values(rng);
    const auto got = histogram(values, 0.1);
    const auto want = oracle::histogram(values, 0.1);
    bool same = got.size() == want.size();
    for (const auto& [k, f] : want) same = same && got.count(k) && std::abs(got.at(k) - f) < 1e-12;
    agree[2] += same;

    const auto [b, c] = oracle::random_series(rng);
    agree[3] += oracle::close(r_squared(b, c), oracle::r_squared(b, c), 1e-9, 1e-9);

    const auto [xs, ys] = oracle::random_points(rng);
    const auto f = linear_fit(xs, ys);
    const auto g = oracle::linear_fit(xs, ys);
    agree[4] += oracle::close(f.slope, g.slope, 1e-8, 1e-9) &&
                oracle::close(f.intercept, g.intercept, 1e-8, 1e-7) &&
                oracle::close(f.mse, g.mse, 1e-6, 1e-12) &&
                oracle::close(f.r_squared, g.r_squared, 1e-8, 1e-9);
  }
  const char* names[] = {"dispersion_index", "duplicate_count", "histogram", "r_squared",
                         "linear_fit"};
  for (int k = 0; k < 5; ++k) {
    o.check(agree[k] == kCases, std::string(names[k]) + " " + std::to_string(agree[k]) + "/" +
                                    std::to_string(kCases));
  }
  const auto fit = linear_fit(oracle::kMemoryPlotN, oracle::kMemoryPlotPercent);
  o.check(std::abs(fit.slope - 0.149) <= 0.002 && fit.r_squared > 0.997,
          "memory plot slope " + fmt(fit.slope) + " R2 " + fmt(fit.r_squared));
}

// 7. Scaling -------------------------------------------------------------------

void scaling(Outcome& o, const std::string& host, double window_s) {
  BenchOptions options;
  options.host = host;
  options.rounds = 3;
  options.window_s = window_s;
  options.sample_hz = 2.0;
  const auto report = run_bench(options);
  o.check(report.errors.empty(), std::to_string(report.errors.size()) + " bench errors");
  o.check(report.memory.r_squared > 0.95, "memory R2 " + fmt(report.memory.r_squared) +
                                              " slope " + fmt(report.memory.slope) + " MB");
  o.check(report.startup.r_squared > 0.95, "startup R2 " + fmt(report.startup.r_squared) +
                                               " slope " + fmt(1000.0 * report.startup.slope) +
                                               " ms");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"idsbed acceptance criteria"};
  std::string host;
  double window_s = 3.0;
  std::vector<int> only;
  app.add_option("--host", host, "idsbed executable used for the scaling bench")->required();
  app.add_option("--window", window_s, "Bench sampling window per round, seconds");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<void(Outcome&)>> criteria{
      colors,          balance,        reproducibility,
      difficulty_gap,  injection_properties, metric_oracles,
      [&](Outcome& o) { scaling(o, host, window_s); }};

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), n) == only.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i](o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " (" << fmt(secs, 1)
              << " s) " << o.details.str() << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
