#include "idsbed/datagen.hpp"

namespace idsbed {

std::string_view to_string(NumericIntrusion kind) {
  return kind == NumericIntrusion::OffValue ? "off_value" : "significant_error";
}

std::optional<NumericIntrusion> parse_numeric_intrusion(std::string_view text) {
  if (text == "off_value") return NumericIntrusion::OffValue;
  if (text == "significant_error") return NumericIntrusion::SignificantError;
  return std::nullopt;
}

double off_value(const IntervalProfile& profile, DifficultyLevel level, bool upper) {
  const double f = off_value_factor(level);
  return upper ? profile.mean + profile.s_right * f : profile.mean - profile.s_left * f;
}

double significant_error(const IntervalProfile& profile, DifficultyLevel level, double v) {
  const double f = off_value_factor(level);
  if (v >= profile.mean) return profile.mean + profile.s_right * f + v * v;
  return profile.mean - (profile.s_left * f + v * v);
}

GeneratorComponent::GeneratorComponent(GeneratorConfig config, std::uint64_t seed)
    : config_(config), profile_(interval_profile(config.spec)), rng_(seed) {
  if (config_.period_ms <= 0) {
    throw Error(ErrorKind::InvalidParams, "generator period must be > 0");
  }
}

Emission GeneratorComponent::next_value() {
  if (!config_.intrusion) return {draw(config_.spec, rng_), Label::Normal};
  switch (*config_.intrusion) {
    case NumericIntrusion::OffValue:
      return {off_value(profile_, config_.level, rng_.coin()), Label::Intrusion};
    case NumericIntrusion::SignificantError:
      return {significant_error(profile_, config_.level, draw(config_.spec, rng_)),
              Label::Intrusion};
  }
  return {draw(config_.spec, rng_), Label::Normal};
}

Emitted GeneratorComponent::emit(std::size_t, std::int64_t) {
  const auto e = next_value();
  return {category(), ScalarPayload{e.value}, e.label};
}

}  // namespace idsbed
