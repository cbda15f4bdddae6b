#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idsbed/component.hpp"
#include "idsbed/record.hpp"
#include "idsbed/rng.hpp"
#include "idsbed/types.hpp"

namespace idsbed {

inline constexpr Color kPurple{150, 140, 200};
inline constexpr Color kYellow{170, 250, 140};
inline constexpr Color kGreen{120, 180, 130};
inline constexpr Color kBlue{120, 180, 200};

/// Legal background colors, in quadrant order: top-left, top-right,
/// bottom-left, bottom-right.
inline constexpr std::array<Color, 4> kLegalColors{kPurple, kYellow, kGreen, kBlue};

Color erroneous_color(DifficultyLevel level);

/// Euclidean distance with channels scaled to [0, 1].
double color_distance(Color p, Color q);

/// Mean distance from `c` to the four legal colors.
double average_legal_distance(Color c);

/// Axis-aligned rectangle, half-open: [x0, x1) x [y0, y1).
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  bool contains(Position p) const { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }
  double area() const { return (x1 - x0) * (y1 - y0); }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Environment2D {
  int width = 500;
  int height = 500;
  std::optional<Rect> erroneous_area;
  std::optional<Rect> illegal_zone;
  /// Whether the illegal zone is painted in the erroneous color.
  bool zone_colored = false;
  Color erroneous = erroneous_color(DifficultyLevel::Easy);
  /// Optional per-pixel palette (0..3 legal color, 4 erroneous), row-major.
  /// When present, color lookups read it instead of evaluating the layout.
  std::vector<std::uint8_t> raster;

  /// Fills `raster` from the layout.
  void rasterize();

  /// Legal quadrant color of the pixel containing `p`.
  Color background_at(Position p) const;
  bool is_erroneous(Position p) const;
  Color color_at(Position p) const;
  bool in_zone(Position p) const { return illegal_zone && illegal_zone->contains(p); }
};

/// Quadrant background plus a square erroneous area of the level's area
/// fraction, placed uniformly with full containment.
Environment2D build_environment(DifficultyLevel level, int width, int height, Rng& rng);

struct Sim2dFlags {
  bool color_area = false;
  bool illegal_dwell = false;
  bool country_code = false;
  bool poi = false;
  bool route = false;

  bool any() const { return color_area || illegal_dwell || country_code || poi || route; }
  friend bool operator==(const Sim2dFlags&, const Sim2dFlags&) = default;
};

struct MovementParams {
  double speed = 2.0;     // px per tick
  double max_turn = 0.4;  // rad, uniform perturbation bound per tick
};

struct Unit {
  Position pos;
  double heading = 0.0;
  bool was_in_zone = false;
  bool dwell = false;
};

/// One movement tick: perturb heading, step forward, clamp to the walls.
/// A non-dwelling unit reverses (with jitter) on entering the illegal zone; a
/// dwelling unit is held inside the zone once it has reached it.
void step_unit(const Environment2D& env, Unit& unit, const MovementParams& params, Rng& rng);

struct ColorReading {
  Color color;
  Label label = Label::Normal;
};

ColorReading read_color(const Environment2D& env, const Unit& unit);

// Request vocabularies.
inline constexpr std::array<std::string_view, 2> kLegalPoiTypes{"fuel", "parking"};
inline constexpr std::array<std::string_view, 2> kIllegalPoiTypes{"armory", "restricted"};
inline constexpr std::string_view kInvalidPoiResult = "Invalid";
inline constexpr int kPoiCellSize = 5;
inline constexpr int kCountryGrid = 4;

/// The three results a legal POI type can resolve to.
std::array<std::string_view, 3> poi_results(std::string_view type);
bool is_legal_poi_type(std::string_view type);

/// Legal types resolve through a fixed per-cell lookup (5 px cells, result
/// weights 0.6 / 0.3 / 0.1); any other type resolves to "Invalid".
std::string resolve_poi(double x, double y, std::string_view type);

/// Code of the cell of a 4 x 4 partition of the environment containing (x, y).
std::string resolve_country_code(const Environment2D& env, double x, double y);

enum class RequestKind : std::uint8_t { CountryCode, Poi, Route };

DataCategory category_of(RequestKind kind);

struct PositionalRequest {
  Payload payload;
  Label label = Label::Normal;
};

/// Normal request form, or with probability p(level) the compromised variant
/// when the kind's flag is set.
PositionalRequest make_request(const Environment2D& env, const Unit& unit, RequestKind kind,
                               const Sim2dFlags& flags, DifficultyLevel level, Rng& rng);

enum class StartPosition : std::uint8_t { Random, IllegalZone };

struct Sim2dConfig {
  DifficultyLevel level = DifficultyLevel::Easy;
  Sim2dFlags flags;
  int width = 500;
  int height = 500;
  std::optional<Rect> illegal_zone = Rect{0.0, 0.0, 20.0, 20.0};
  StartPosition start = StartPosition::Random;
  MovementParams movement;
  std::int64_t move_period_ms = 10;
  std::int64_t color_period_ms = 100;
  std::array<std::int64_t, 3> request_period_ms{200, 200, 200};
};

/// Throws Error(InvalidParams) on inconsistent settings.
void validate(const Sim2dConfig& config);

/// 2D simulator component. Stream 0 is the color reading; streams 1..3 are
/// the country-code, POI and route requests.
class Sim2dComponent final : public Component {
 public:
  Sim2dComponent(Sim2dConfig config, std::uint64_t seed);

  std::size_t stream_count() const override { return 4; }
  std::int64_t period_ms(std::size_t stream) const override;
  Emitted emit(std::size_t stream, std::int64_t vtime_ms) override;

  /// Runs movement ticks until the unit reflects time `vtime_ms`.
  void advance_to(std::int64_t vtime_ms);

  const Environment2D& environment() const { return env_; }
  const Unit& unit() const { return unit_; }
  const Sim2dConfig& config() const { return config_; }

 private:
  Sim2dConfig config_;
  Environment2D env_;
  Unit unit_;
  Rng move_rng_;
  std::array<Rng, 3> request_rngs_;
  std::int64_t ticks_done_ = 0;
};

}  // namespace idsbed
