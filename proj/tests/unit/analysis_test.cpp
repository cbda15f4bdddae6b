#include <gtest/gtest.h>

#include "idsbed/analysis.hpp"
#include "oracles.hpp"

using namespace idsbed;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

LogRecord color_at(double x, double y) {
  return {0, "c", DataCategory::Color, ColorPayload{{x, y}, {1, 2, 3}}, Label::Normal};
}

}  // namespace

TEST(Dispersion, Examples) {
  const std::vector<std::uint64_t> balanced{100, 100};
  EXPECT_EQ(dispersion_index(balanced), 0.0);
  const std::vector<std::uint64_t> skew{90, 110};
  EXPECT_DOUBLE_EQ(dispersion_index(skew), 1.0);
  const std::vector<std::uint64_t> large{711'425, 718'575};
  EXPECT_NEAR(dispersion_index(large), 3575.0 * 3575.0 / 715'000.0, 1e-9);
  EXPECT_NEAR(dispersion_index(large), 17.9, 0.05);
}

TEST(Dispersion, Errors) {
  EXPECT_EQ(kind_of([] { dispersion_index(std::vector<std::uint64_t>{}); }), ErrorKind::EmptyInput);
  EXPECT_EQ(kind_of([] { dispersion_index(std::vector<std::uint64_t>{0, 0}); }), ErrorKind::ZeroMean);
}

TEST(Dispersion, TwoClassIdentity) {
  // For two classes the index equals deviation^2 * mean / 4.
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t a = rng.below(1'000'000);
    const std::uint64_t b = rng.below(1'000'000) + 1;
    const std::vector<std::uint64_t> c{a, b};
    const double mean = (a + b) / 2.0;
    const double dev = relative_class_deviation(a, b);
    ASSERT_NEAR(dispersion_index(c), dev * dev * mean / 4.0, 1e-6 * (1.0 + dispersion_index(c)));
  }
}

TEST(Dispersion, MatchesBruteForce) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto counts = oracle::random_counts(rng);
    ASSERT_TRUE(oracle::close(dispersion_index(counts), oracle::dispersion_index(counts), 1e-9, 1e-9));
  }
}

TEST(ClassDeviation, Examples) {
  EXPECT_EQ(relative_class_deviation(50, 50), 0.0);
  EXPECT_DOUBLE_EQ(relative_class_deviation(90, 110), 0.2);
  EXPECT_DOUBLE_EQ(relative_class_deviation(0, 10), 2.0);
  EXPECT_THROW(relative_class_deviation(0, 0), Error);
}

TEST(Duplicates, Examples) {
  const LogRecord a = color_at(1, 2);
  LogRecord b = color_at(3, 4);
  EXPECT_EQ(duplicate_count(std::vector<LogRecord>{a, a}), 1u);
  EXPECT_EQ(duplicate_count(std::vector<LogRecord>{a, b, a}), 0u);
  EXPECT_EQ(duplicate_count(std::vector<LogRecord>{a, a, a}), 2u);
  EXPECT_EQ(duplicate_count(std::vector<LogRecord>{}), 0u);
  b = a;
  b.vtime_ms = 77;
  EXPECT_EQ(duplicate_count(std::vector<LogRecord>{a, b}), 1u);
  b.label = Label::Intrusion;
  EXPECT_EQ(duplicate_count(std::vector<LogRecord>{a, b}), 0u);
}

TEST(Duplicates, MatchesBruteForce) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto log = oracle::random_log(rng);
    ASSERT_EQ(duplicate_count(log), oracle::duplicate_count(log));
  }
}

TEST(Histogram, Examples) {
  const auto h = histogram(std::vector<double>{0.05, 0.15}, 0.1);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h.at(0), 0.5);
  EXPECT_EQ(h.at(1), 0.5);
  EXPECT_TRUE(histogram(std::vector<double>{}, 0.1).empty());
  const auto edge = histogram(std::vector<double>{0.1}, 0.1);
  EXPECT_EQ(edge.begin()->first, 1);
  EXPECT_EQ(bin_index(-0.05, 0.1), -1);
  EXPECT_EQ(bin_index(0.35, 0.1), 3);
  EXPECT_EQ(bin_index(-0.1, 0.1), -1);
}

TEST(Histogram, MatchesBruteForce) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const auto values = oracle::random_values(rng);
    const auto got = histogram(values, 0.1);
    const auto want = oracle::histogram(values, 0.1);
    ASSERT_EQ(got.size(), want.size());
    for (const auto& [k, f] : want) {
      ASSERT_TRUE(got.count(k));
      ASSERT_NEAR(got.at(k), f, 1e-12);
    }
  }
}

TEST(Heatmap, GridShape) {
  const auto h = position_heatmap(std::vector<LogRecord>{color_at(10, 10)});
  EXPECT_EQ(h.cols, 25);
  EXPECT_EQ(h.rows, 25);
  EXPECT_EQ(h.at(0, 0), 1.0);
}

TEST(Heatmap, SinglePosition) {
  std::vector<LogRecord> rs(50, color_at(250, 130));
  const auto h = position_heatmap(rs);
  EXPECT_EQ(h.at(12, 6), 1.0);
  double sum = 0.0;
  for (const double f : h.freq) sum += f;
  EXPECT_EQ(sum, 1.0);
}

TEST(Heatmap, IgnoresNonColorRecords) {
  std::vector<LogRecord> rs{color_at(5, 5)};
  rs.push_back({0, "c", DataCategory::Route, RoutePayload{{400, 400}, {1, 1}}, Label::Normal});
  rs.push_back({0, "c", DataCategory::Gaussian, ScalarPayload{1.0}, Label::Normal});
  EXPECT_EQ(position_heatmap(rs).at(0, 0), 1.0);
}

TEST(Heatmap, UniformPositionsAreFlat) {
  Rng rng(5);
  std::vector<LogRecord> rs;
  for (int i = 0; i < 250'000; ++i) rs.push_back(color_at(rng.uniform(0, 500), rng.uniform(0, 500)));
  const auto h = position_heatmap(rs);
  const auto [lo, hi] = std::minmax_element(h.freq.begin(), h.freq.end());
  EXPECT_LT(*hi / *lo, 1.5);
}

TEST(RSquared, Examples) {
  const std::vector<double> b{1, 2, 3, 4};
  EXPECT_EQ(r_squared(b, b), 1.0);
  EXPECT_EQ(kind_of([] { r_squared(std::vector<double>{2, 2}, std::vector<double>{1, 3}); }),
            ErrorKind::DegenerateBaseline);
  EXPECT_EQ(kind_of([] { r_squared(std::vector<double>{1, 2}, std::vector<double>{1}); }),
            ErrorKind::LengthMismatch);
}

TEST(RSquared, MapsAlignOnKeys) {
  const std::map<int, double> a{{0, 0.6}, {1, 0.4}};
  const std::map<int, double> b{{1, 0.5}, {2, 0.5}};
  // Union {0,1,2}: baseline (0.6,0.4,0), candidate (0,0.5,0.5).
  const double mean = 1.0 / 3.0;
  const double tot = (0.6 - mean) * (0.6 - mean) + (0.4 - mean) * (0.4 - mean) + mean * mean;
  EXPECT_NEAR(r_squared(a, b), 1.0 - (0.36 + 0.01 + 0.25) / tot, 1e-12);
  EXPECT_EQ(r_squared(a, a), 1.0);
}

TEST(RSquared, MatchesBruteForce) {
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const auto [b, c] = oracle::random_series(rng);
    ASSERT_TRUE(oracle::close(r_squared(b, c), oracle::r_squared(b, c), 1e-9, 1e-9));
  }
}

TEST(LinearFit, ExactLine) {
  const std::vector<double> xs{0, 1, 2, 5};
  const std::vector<double> ys{1, 3, 5, 11};
  const auto f = linear_fit(xs, ys);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.mse, 0.0, 1e-20);
  EXPECT_EQ(f.r_squared, 1.0);
}

TEST(LinearFit, DegenerateInput) {
  EXPECT_EQ(kind_of([] { linear_fit(std::vector<double>{3, 3}, std::vector<double>{1, 2}); }),
            ErrorKind::DegenerateInput);
  EXPECT_EQ(kind_of([] { linear_fit(std::vector<double>{3}, std::vector<double>{1}); }),
            ErrorKind::DegenerateInput);
  EXPECT_EQ(kind_of([] { linear_fit(std::vector<double>{1, 2}, std::vector<double>{1}); }),
            ErrorKind::LengthMismatch);
}

TEST(LinearFit, MemoryPlotData) {
  const auto f = linear_fit(oracle::kMemoryPlotN, oracle::kMemoryPlotPercent);
  EXPECT_NEAR(f.slope, 0.149, 0.002);
  EXPECT_GT(f.r_squared, 0.997);
  EXPECT_LT(f.mse, 1.262);
}

TEST(LinearFit, MatchesBruteForce) {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const auto [xs, ys] = oracle::random_points(rng);
    const auto got = linear_fit(xs, ys);
    const auto want = oracle::linear_fit(xs, ys);
    ASSERT_TRUE(oracle::close(got.slope, want.slope, 1e-8, 1e-9));
    ASSERT_TRUE(oracle::close(got.intercept, want.intercept, 1e-8, 1e-7));
    ASSERT_TRUE(oracle::close(got.mse, want.mse, 1e-6, 1e-12));
    ASSERT_TRUE(oracle::close(got.r_squared, want.r_squared, 1e-8, 1e-9));
  }
}
