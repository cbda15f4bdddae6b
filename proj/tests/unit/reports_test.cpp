#include <gtest/gtest.h>

#include "idsbed/experiment.hpp"
#include "idsbed/reports.hpp"
#include "support.hpp"

using namespace idsbed;

namespace {

void write_log(const std::filesystem::path& path, const std::vector<LogRecord>& records) {
  std::string text;
  for (const auto& r : records) text += serialize_record(r) + "\n";
  test::write_text(path, text);
}

ScenarioConfig mixed(std::uint64_t seed, std::uint64_t records) {
  ScenarioConfig c;
  c.seed = seed;
  c.records = records;
  GeneratorConfig g;
  c.clients.push_back({"n", {g}});
  g.intrusion = NumericIntrusion::OffValue;
  c.clients.push_back({"o", {g}});
  Sim2dConfig s;
  s.flags.poi = true;
  c.clients.push_back({"car", {s}});
  return c;
}

}  // namespace

TEST(Quality, BalancedLog) {
  test::TempDir dir;
  std::vector<LogRecord> rs;
  for (int i = 0; i < 10; ++i) {
    rs.push_back({i, "a", DataCategory::Gaussian, ScalarPayload{i * 1.0}, Label::Normal});
    rs.push_back({i, "b", DataCategory::Gaussian, ScalarPayload{-i * 1.0}, Label::Intrusion});
  }
  write_log(dir / "log", rs);
  const auto q = analyze_log(dir / "log");
  const auto& g = q.categories[index_of(DataCategory::Gaussian)];
  EXPECT_EQ(g.normal, 10u);
  EXPECT_EQ(g.intrusion, 10u);
  EXPECT_EQ(g.dispersion(), 0.0);
  EXPECT_EQ(g.deviation(), 0.0);
  EXPECT_EQ(q.group(CategoryGroup::Generators).total(), 20u);
  EXPECT_TRUE(q.vtime_monotone);
  EXPECT_FALSE(q.to_text().empty());
  EXPECT_FALSE(q.to_json().empty());
}

TEST(Quality, OneDuplicate) {
  test::TempDir dir;
  const LogRecord r{1, "a", DataCategory::Gaussian, ScalarPayload{1.0}, Label::Normal};
  LogRecord later = r;
  later.vtime_ms = 2;
  write_log(dir / "log", {r, later});
  const auto q = analyze_log(dir / "log");
  EXPECT_EQ(q.categories[0].duplicates, 1u);
}

TEST(Quality, ReportsLineOfBadRecord) {
  test::TempDir dir;
  test::write_text(dir / "log", serialize_record({1, "a", DataCategory::Gaussian,
                                                  ScalarPayload{1.0}, Label::Normal}) +
                                    "\nbroken\n");
  try {
    analyze_log(dir / "log");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MalformedRecord);
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(Compare, LogAgainstItself) {
  test::TempDir dir;
  write_log(dir / "a", generate_records(mixed(1, 20'000)));
  const auto fp = fingerprint_log(dir / "a");
  const auto report = compare(fp, {fp});
  EXPECT_TRUE(report.warnings.empty());
  ASSERT_FALSE(report.rows.empty());
  for (const auto& row : report.rows) {
    ASSERT_EQ(row.r_squared.size(), 1u);
    EXPECT_EQ(row.r_squared[0], 1.0) << row.name;
  }
  EXPECT_NE(report.find("poi_pairs"), nullptr);
  EXPECT_NE(report.find("heatmap"), nullptr);
  EXPECT_NE(report.find("gaussian"), nullptr);
}

TEST(Compare, MismatchedConfigsWarn) {
  Fingerprint base;
  Fingerprint cand;
  for (int i = 0; i < 1000; ++i) {
    const double v = (i % 37) * 0.05;
    base.add({i, "a", DataCategory::Gaussian, ScalarPayload{v}, Label::Normal});
    base.add({i, "a", DataCategory::Wald, ScalarPayload{v + 1}, Label::Normal});
    cand.add({i, "a", DataCategory::Gaussian, ScalarPayload{v}, Label::Normal});
  }
  const auto report = compare(base, {cand});
  EXPECT_FALSE(report.warnings.empty());
  EXPECT_NE(report.find("gaussian"), nullptr);
  EXPECT_EQ(report.find("wald"), nullptr);
}

TEST(Compare, DifferentSeedsAreClose) {
  Fingerprint a;
  Fingerprint b;
  for (const auto& r : generate_records(mixed(1, 200'000))) a.add(r);
  for (const auto& r : generate_records(mixed(2, 200'000))) b.add(r);
  const auto report = compare(a, {b});
  EXPECT_GT(report.find("gaussian")->r_squared[0], 0.999);
  EXPECT_GT(report.find("poi_pairs")->r_squared[0], 0.99);
}

TEST(Fingerprint, PoiFormsAndHistogram) {
  Fingerprint f;
  f.add({0, "a", DataCategory::Poi, PoiPayload{{1, 1}, "fuel", "open"}, Label::Normal});
  f.add({0, "a", DataCategory::Poi, PoiPayload{{1, 1}, "armory", "Invalid"}, Label::Intrusion});
  f.add({0, "a", DataCategory::Gaussian, ScalarPayload{0.05}, Label::Normal});
  f.add({0, "a", DataCategory::Gaussian, ScalarPayload{0.15}, Label::Intrusion});
  EXPECT_EQ(f.poi_pairs().at("fuel/open"), 0.5);
  EXPECT_EQ(f.poi_pairs().at("armory/Invalid"), 0.5);
  EXPECT_EQ(f.generator_histogram(DataCategory::Gaussian, false).size(), 2u);
  EXPECT_EQ(f.generator_histogram(DataCategory::Gaussian, true).at(0), 1.0);
}
