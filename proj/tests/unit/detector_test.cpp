#include <gtest/gtest.h>

#include <algorithm>

#include "idsbed/datagen.hpp"
#include "idsbed/detector.hpp"

using namespace idsbed;

namespace {

LogRecord scalar(DataCategory c, double v, Label l = Label::Normal) {
  return {0, "c", c, ScalarPayload{v}, l};
}

}  // namespace

TEST(EmpiricalQuantile, Type7) {
  const std::vector<double> xs{1, 2, 3, 4, 5};
  EXPECT_EQ(empirical_quantile(xs, 0.0), 1.0);
  EXPECT_EQ(empirical_quantile(xs, 1.0), 5.0);
  EXPECT_EQ(empirical_quantile(xs, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(empirical_quantile(xs, 0.1), 1.4);
}

TEST(Train, StandardNormalInterval) {
  Sampler s({DistributionKind::Gaussian, {0.0, 1.0}}, 1);
  std::vector<double> v(100'000);
  for (auto& x : v) x = s();
  const auto iv = train(v, 0.001);
  EXPECT_NEAR(iv.lo, -3.09, 0.15);
  EXPECT_NEAR(iv.hi, 3.09, 0.15);
}

TEST(Train, ConstantValues) {
  const auto iv = train(std::vector<double>(200, 4.0), 0.001);
  EXPECT_EQ(iv.lo, 4.0);
  EXPECT_EQ(iv.hi, 4.0);
  EXPECT_EQ(classify(iv, 4.0), Verdict::Normal);
  EXPECT_EQ(classify(iv, 4.0000001), Verdict::Intrusion);
}

TEST(Train, Preconditions) {
  const std::vector<double> v(200, 1.0);
  for (const double a : {0.6, 0.5, 0.0, -0.1}) {
    try {
      train(v, a);
      ADD_FAILURE() << a;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidParams);
    }
  }
  try {
    train(std::vector<double>(99, 1.0), 0.01);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
}

TEST(Classify, ClosedInterval) {
  const Interval iv{-1.0, 2.0};
  EXPECT_EQ(classify(iv, -1.0), Verdict::Normal);
  EXPECT_EQ(classify(iv, 2.0), Verdict::Normal);
  EXPECT_EQ(classify(iv, 0.5), Verdict::Normal);
  EXPECT_EQ(classify(iv, -1.0000001), Verdict::Intrusion);
}

TEST(IntervalDetector, EasyUniformOffValuesAreCaught) {
  std::vector<LogRecord> train_set;
  Sampler s({DistributionKind::Uniform, {0.0, 1.0}}, 2);
  for (int i = 0; i < 10'000; ++i) train_set.push_back(scalar(DataCategory::Uniform, s()));
  // Intrusion-labeled records must not influence training.
  for (int i = 0; i < 1000; ++i) train_set.push_back(scalar(DataCategory::Uniform, 1e6, Label::Intrusion));
  auto d = IntervalDetector::fit(train_set);
  EXPECT_TRUE(d.trained(DataCategory::Uniform));
  EXPECT_FALSE(d.trained(DataCategory::Gaussian));
  EXPECT_EQ(d.classify(observe(scalar(DataCategory::Uniform, -1.995))), Verdict::Intrusion);
  EXPECT_EQ(d.classify(observe(scalar(DataCategory::Uniform, 2.995))), Verdict::Intrusion);
  EXPECT_EQ(d.classify(observe(scalar(DataCategory::Uniform, 0.5))), Verdict::Normal);
  try {
    d.classify(observe(scalar(DataCategory::Gaussian, 0.0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DetectorFailure);
  }
}

TEST(IntervalDetector, EasyOffValuesAlwaysDetectedProperty) {
  // Easy off-values sit 5 spans from the mean: outside any interval learned
  // from normal data of a well-sampled generator.
  for (const auto k : kAllDistributions) {
    const auto spec = DistributionSpec::defaults(k);
    std::vector<LogRecord> normal;
    Sampler s(spec, 3);
    for (int i = 0; i < 20'000; ++i) normal.push_back(scalar(category_of(k), s()));
    auto d = IntervalDetector::fit(normal);
    GeneratorComponent g({spec, 100, NumericIntrusion::OffValue, DifficultyLevel::Easy}, 4);
    for (int i = 0; i < 200; ++i) {
      const auto e = g.emit(0, 0);
      ASSERT_EQ(d.classify(observe({0, "c", e.category, e.payload, e.label})), Verdict::Intrusion)
          << to_string(k);
    }
  }
}

TEST(IntervalDetector, JsonRoundTrip) {
  IntervalDetector d;
  d.set(DataCategory::Color, {{1, 2}, {3, 4}, {5, 6}});
  d.set(DataCategory::Wald, {{0.125, 7.5}});
  const auto back = IntervalDetector::from_json(d.to_json());
  EXPECT_EQ(back.bounds(DataCategory::Color), d.bounds(DataCategory::Color));
  EXPECT_EQ(back.bounds(DataCategory::Wald), d.bounds(DataCategory::Wald));
  EXPECT_FALSE(back.trained(DataCategory::Poi));
  EXPECT_THROW(IntervalDetector::from_json("{"), Error);
}

TEST(Features, PerCategory) {
  EXPECT_EQ(features(DataCategory::Color, ColorPayload{{1, 2}, {3, 4, 5}}),
            (std::vector<double>{3, 4, 5}));
  EXPECT_EQ(features(DataCategory::Poi, PoiPayload{{1, 2}, "fuel", "open"}),
            (std::vector<double>{1}));
  EXPECT_EQ(features(DataCategory::Poi, PoiPayload{{1, 2}, "armory", "Invalid"}),
            (std::vector<double>{0}));
  EXPECT_EQ(features(DataCategory::Route, RoutePayload{{0, 0}, {3, 4}}), (std::vector<double>{5}));
  EXPECT_EQ(features(DataCategory::CountryCode, CountryCodePayload{{7, 8}, "DE"}),
            (std::vector<double>{7, 8}));
}

TEST(Score, AllCorrect) {
  const std::vector<Verdict> v{Verdict::Intrusion, Verdict::Normal, Verdict::Intrusion};
  const std::vector<Label> l{Label::Intrusion, Label::Normal, Label::Intrusion};
  const auto s = score(v, l);
  EXPECT_EQ(s.precision(), 1.0);
  EXPECT_EQ(s.recall(), 1.0);
}

TEST(Score, NoPositivesPredicted) {
  const std::vector<Verdict> v{Verdict::Normal, Verdict::Normal};
  const std::vector<Label> l{Label::Intrusion, Label::Normal};
  const auto s = score(v, l);
  EXPECT_EQ(s.recall(), 0.0);
  EXPECT_EQ(s.precision(), 0.0);
  EXPECT_FALSE(s.precision_defined());
  EXPECT_TRUE(s.recall_defined());
}

TEST(Score, AbstainAndMismatch) {
  const std::vector<Verdict> v{Verdict::Abstain, Verdict::Intrusion};
  const std::vector<Label> l{Label::Intrusion, Label::Normal};
  const auto s = score(v, l);
  EXPECT_EQ(s.abstained, 1u);
  EXPECT_EQ(s.fp, 1u);
  EXPECT_THROW(score(v, std::vector<Label>{Label::Normal}), Error);
}

TEST(Score, RandomVerdictsGiveBaseRate) {
  Rng rng(8);
  std::vector<Verdict> v(100'000);
  std::vector<Label> l(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    l[i] = rng.coin() ? Label::Intrusion : Label::Normal;
    v[i] = rng.coin() ? Verdict::Intrusion : Verdict::Normal;
  }
  EXPECT_NEAR(score(v, l).precision(), 0.5, 0.01);
}
