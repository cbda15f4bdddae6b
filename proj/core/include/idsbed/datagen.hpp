#pragma once

#include <cstdint>
#include <optional>

#include "idsbed/component.hpp"
#include "idsbed/distributions.hpp"
#include "idsbed/types.hpp"

namespace idsbed {

enum class NumericIntrusion : std::uint8_t { OffValue, SignificantError };

std::string_view to_string(NumericIntrusion kind);
std::optional<NumericIntrusion> parse_numeric_intrusion(std::string_view text);

inline constexpr std::int64_t kDefaultGeneratorPeriodMs = 100;

struct GeneratorConfig {
  DistributionSpec spec;
  std::int64_t period_ms = kDefaultGeneratorPeriodMs;
  std::optional<NumericIntrusion> intrusion;
  DifficultyLevel level = DifficultyLevel::Easy;
};

struct Emission {
  double value = 0.0;
  Label label = Label::Normal;
};

/// m - s_left*f or m + s_right*f.
double off_value(const IntervalProfile& profile, DifficultyLevel level, bool upper);

/// Significant error built from a normal draw v:
///   v >= m  ->  m + s_right*f + v^2
///   v <  m  ->  m - (s_left*f + v^2)
double significant_error(const IntervalProfile& profile, DifficultyLevel level, double v);

/// Data generator component. Owns its random stream; a compromised
/// generator emits an intrusion on every tick.
class GeneratorComponent final : public Component {
 public:
  GeneratorComponent(GeneratorConfig config, std::uint64_t seed);

  Emission next_value();

  std::size_t stream_count() const override { return 1; }
  std::int64_t period_ms(std::size_t) const override { return config_.period_ms; }
  Emitted emit(std::size_t stream, std::int64_t vtime_ms) override;

  DataCategory category() const { return category_of(config_.spec.kind); }
  const GeneratorConfig& config() const { return config_; }
  const IntervalProfile& profile() const { return profile_; }

 private:
  GeneratorConfig config_;
  IntervalProfile profile_;
  Rng rng_;
};

}  // namespace idsbed
