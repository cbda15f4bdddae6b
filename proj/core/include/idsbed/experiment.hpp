#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "idsbed/detector.hpp"
#include "idsbed/scenario.hpp"

namespace idsbed {

/// Runs a virtual-time scenario and collects the records in memory.
std::vector<LogRecord> generate_records(const ScenarioConfig& config);

struct GapOptions {
  double alpha = 1e-4;
  std::size_t n_sets = 3;
  std::size_t set_size = 100'000;
  std::uint64_t pool_size = 1'000'000;
  std::uint64_t seed = 7;
  std::vector<DifficultyLevel> levels{DifficultyLevel::Easy, DifficultyLevel::Medium,
                                      DifficultyLevel::Hard};
  /// Normal and compromised sim2d units (each) in the level scenario.
  std::size_t sim2d_units = 4;
  double threshold_pp = 5.0;
};

/// Per level: one normal and one off-value client per distribution, plus
/// normal and fully flagged sim2d units.
ScenarioConfig gap_scenario(DifficultyLevel level, const GapOptions& options);

struct LevelScore {
  double precision = 0.0;  // mean over sets
  double recall = 0.0;     // mean over sets
  ScoreReport totals;      // summed over sets
};

struct CategoryGap {
  DataCategory category = DataCategory::Gaussian;
  std::map<DifficultyLevel, LevelScore> by_level;

  /// Easy minus Hard, in percentage points.
  double recall_gap_pp() const;
  double precision_gap_pp() const;
};

struct GapReport {
  GapOptions options;
  std::vector<CategoryGap> rows;

  const CategoryGap* find(DataCategory c) const;
  /// Categories whose recall or precision gap reaches the threshold.
  bool significant(DataCategory c) const;
  std::string to_text() const;
  std::string to_json() const;
};

/// Generates a pool per level, draws n_sets samples of set_size records,
/// trains an interval detector on the normal records of each sample and
/// scores the whole sample per category.
GapReport difficulty_gap_experiment(const GapOptions& options);

}  // namespace idsbed
