#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "idsbed/datagen.hpp"
#include "idsbed/sim2d.hpp"

namespace idsbed {

enum class RunMode : std::uint8_t { VirtualTime, RealTime };

std::string_view to_string(RunMode mode);
std::optional<RunMode> parse_run_mode(std::string_view text);

using ComponentSpec = std::variant<GeneratorConfig, Sim2dConfig>;

struct ClientSpec {
  std::string id;
  std::vector<ComponentSpec> components;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  RunMode mode = RunMode::VirtualTime;
  std::optional<std::int64_t> duration_ms;
  std::optional<std::uint64_t> records;
  std::vector<ClientSpec> clients;
};

/// Scenario files are JSON (comments allowed):
///
///   {
///     "seed": 42,
///     "mode": "virtual",                  // or "realtime"
///     "records": 1000000,                 // and/or "duration_ms"
///     "environment": {"width": 500, "height": 500,
///                     "illegal_zone": [0, 0, 20, 20], "move_period_ms": 10},
///     "clients": [
///       {"id": "car", "repeat": 3, "components": [
///         {"type": "generator", "distribution": "wald",
///          "params": {"mean": 1, "scale": 1},
///          "intrusion": "off_value", "level": "easy", "period_ms": 100},
///         {"type": "sim2d", "level": "hard", "flags": ["poi", "route"],
///          "start": "random",
///          "periods": {"color": 100, "country_code": 200, "poi": 200, "route": 200}}
///       ]}
///     ]
///   }
///
/// "repeat": n expands a client into ids <id>-0 .. <id>-(n-1). Generator
/// params may be an object keyed by parameter name or a positional array;
/// omitted parameters take the kind's defaults.
///
/// Throws Error(ConfigParseError) for syntax errors and Error(ValidationError)
/// with a field path for invalid content.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Load-time checks: at least one client, unique ids, a budget, valid
/// components (distribution params, finite mean, sim2d settings).
void validate(const ScenarioConfig& config);

}  // namespace idsbed
