#include "idsbed/sim2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace idsbed {

namespace {

constexpr std::array<std::string_view, 16> kCountryCodes{
    "DE", "FR", "NL", "BE", "AT", "CH", "IT", "ES",
    "PT", "PL", "CZ", "DK", "SE", "NO", "FI", "LU"};

constexpr std::array<std::string_view, 3> kFuelResults{"open", "busy", "closed"};
constexpr std::array<std::string_view, 3> kParkingResults{"free", "limited", "full"};

int pixel(double v, int extent) {
  return std::clamp(static_cast<int>(std::floor(v)), 0, extent - 1);
}

double clamp_half_open(double v, double lo, double hi) {
  return std::clamp(v, lo, std::nextafter(hi, lo));
}

[[noreturn]] void invalid(const std::string& why) {
  throw Error(ErrorKind::InvalidParams, "sim2d: " + why);
}

}  // namespace

Color erroneous_color(DifficultyLevel level) {
  switch (level) {
    case DifficultyLevel::Easy: return {255, 0, 0};
    case DifficultyLevel::Medium: return {200, 50, 50};
    case DifficultyLevel::Hard: return {170, 80, 80};
  }
  return {255, 0, 0};
}

double color_distance(Color p, Color q) {
  const double dr = (p.r - q.r) / 255.0;
  const double dg = (p.g - q.g) / 255.0;
  const double db = (p.b - q.b) / 255.0;
  return std::sqrt(dr * dr + dg * dg + db * db);
}

double average_legal_distance(Color c) {
  double sum = 0.0;
  for (const auto& legal : kLegalColors) sum += color_distance(c, legal);
  return sum / static_cast<double>(kLegalColors.size());
}

Color Environment2D::background_at(Position p) const {
  const int px = pixel(p.x, width);
  const int py = pixel(p.y, height);
  const int quadrant = (px < width / 2 ? 0 : 1) + (py < height / 2 ? 0 : 2);
  return kLegalColors[static_cast<std::size_t>(quadrant)];
}

bool Environment2D::is_erroneous(Position p) const {
  const int px = pixel(p.x, width);
  const int py = pixel(p.y, height);
  if (!raster.empty()) return raster[static_cast<std::size_t>(py) * width + px] == 4;
  const Position corner{static_cast<double>(px), static_cast<double>(py)};
  if (erroneous_area && erroneous_area->contains(corner)) return true;
  return zone_colored && illegal_zone && illegal_zone->contains(corner);
}

void Environment2D::rasterize() {
  raster.clear();
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Position p{static_cast<double>(x), static_cast<double>(y)};
      const Color c = background_at(p);
      std::uint8_t index = 0;
      while (!(kLegalColors[index] == c)) ++index;
      grid[static_cast<std::size_t>(y) * width + x] = is_erroneous(p) ? 4 : index;
    }
  }
  raster = std::move(grid);
}

Color Environment2D::color_at(Position p) const {
  return is_erroneous(p) ? erroneous : background_at(p);
}

Environment2D build_environment(DifficultyLevel level, int width, int height, Rng& rng) {
  if (width <= 0 || height <= 0) invalid("environment size must be positive");
  Environment2D env;
  env.width = width;
  env.height = height;
  env.erroneous = erroneous_color(level);
  const double target = erroneous_area_fraction(level) * width * height;
  const int side = std::min({static_cast<int>(std::lround(std::sqrt(target))), width, height});
  const auto x0 = static_cast<double>(rng.below(static_cast<std::uint64_t>(width - side + 1)));
  const auto y0 = static_cast<double>(rng.below(static_cast<std::uint64_t>(height - side + 1)));
  env.erroneous_area = Rect{x0, y0, x0 + side, y0 + side};
  return env;
}

void step_unit(const Environment2D& env, Unit& unit, const MovementParams& params, Rng& rng) {
  unit.heading += rng.uniform(-params.max_turn, params.max_turn);
  unit.heading = std::remainder(unit.heading, 2.0 * std::numbers::pi);
  unit.pos.x = std::clamp(unit.pos.x + params.speed * std::cos(unit.heading), 0.0,
                          static_cast<double>(env.width));
  unit.pos.y = std::clamp(unit.pos.y + params.speed * std::sin(unit.heading), 0.0,
                          static_cast<double>(env.height));

  if (unit.dwell) {
    if (unit.was_in_zone && env.illegal_zone) {
      const Rect& z = *env.illegal_zone;
      unit.pos.x = clamp_half_open(unit.pos.x, z.x0, z.x1);
      unit.pos.y = clamp_half_open(unit.pos.y, z.y0, z.y1);
    }
    unit.was_in_zone = env.in_zone(unit.pos);
    return;
  }

  const bool inside = env.in_zone(unit.pos);
  if (inside && !unit.was_in_zone) {
    unit.heading = std::remainder(
        unit.heading + std::numbers::pi + rng.uniform(-params.max_turn, params.max_turn),
        2.0 * std::numbers::pi);
  }
  unit.was_in_zone = inside;
}

ColorReading read_color(const Environment2D& env, const Unit& unit) {
  if (env.is_erroneous(unit.pos)) return {env.erroneous, Label::Intrusion};
  return {env.background_at(unit.pos), Label::Normal};
}

std::array<std::string_view, 3> poi_results(std::string_view type) {
  if (type == kLegalPoiTypes[0]) return kFuelResults;
  if (type == kLegalPoiTypes[1]) return kParkingResults;
  return {kInvalidPoiResult, kInvalidPoiResult, kInvalidPoiResult};
}

bool is_legal_poi_type(std::string_view type) {
  return std::find(kLegalPoiTypes.begin(), kLegalPoiTypes.end(), type) != kLegalPoiTypes.end();
}

std::string resolve_poi(double x, double y, std::string_view type) {
  if (!is_legal_poi_type(type)) return std::string(kInvalidPoiResult);
  const auto cx = static_cast<std::int64_t>(std::floor(x / kPoiCellSize));
  const auto cy = static_cast<std::int64_t>(std::floor(y / kPoiCellSize));
  const std::uint64_t h = mix64(mix64(static_cast<std::uint64_t>(cx) * 0x9e3779b97f4a7c15ULL ^
                                      static_cast<std::uint64_t>(cy)) ^
                                fnv1a64(type));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  const auto results = poi_results(type);
  if (u < 0.6) return std::string(results[0]);
  if (u < 0.9) return std::string(results[1]);
  return std::string(results[2]);
}

std::string resolve_country_code(const Environment2D& env, double x, double y) {
  const int cx = std::clamp(static_cast<int>(std::floor(x * kCountryGrid / env.width)), 0,
                            kCountryGrid - 1);
  const int cy = std::clamp(static_cast<int>(std::floor(y * kCountryGrid / env.height)), 0,
                            kCountryGrid - 1);
  return std::string(kCountryCodes[static_cast<std::size_t>(cy * kCountryGrid + cx)]);
}

DataCategory category_of(RequestKind kind) {
  switch (kind) {
    case RequestKind::CountryCode: return DataCategory::CountryCode;
    case RequestKind::Poi: return DataCategory::Poi;
    case RequestKind::Route: return DataCategory::Route;
  }
  return DataCategory::Route;
}

PositionalRequest make_request(const Environment2D& env, const Unit& unit, RequestKind kind,
                               const Sim2dFlags& flags, DifficultyLevel level, Rng& rng) {
  const Position pos = unit.pos;
  const double p = positional_corruption_probability(level);
  switch (kind) {
    case RequestKind::CountryCode: {
      if (flags.country_code && rng.bernoulli(p)) {
        auto displace = [&rng](double v, double extent) {
          const double n = rng.uniform(10.0, 50.0);
          double out = rng.coin() ? v + n : v - n;
          // Flip the side rather than clamp so the offset stays >= 10.
          if (out < 0.0 || out > extent) out = 2.0 * v - out;
          return std::clamp(out, 0.0, extent);
        };
        const Position c{displace(pos.x, env.width), displace(pos.y, env.height)};
        return {CountryCodePayload{c, resolve_country_code(env, c.x, c.y)}, Label::Intrusion};
      }
      return {CountryCodePayload{pos, resolve_country_code(env, pos.x, pos.y)}, Label::Normal};
    }
    case RequestKind::Poi: {
      if (flags.poi && rng.bernoulli(p)) {
        const auto type = kIllegalPoiTypes[rng.below(kIllegalPoiTypes.size())];
        return {PoiPayload{pos, std::string(type), resolve_poi(pos.x, pos.y, type)},
                Label::Intrusion};
      }
      const auto type = kLegalPoiTypes[rng.below(kLegalPoiTypes.size())];
      return {PoiPayload{pos, std::string(type), resolve_poi(pos.x, pos.y, type)},
              Label::Normal};
    }
    case RequestKind::Route: {
      if (flags.route && rng.bernoulli(p)) return {RoutePayload{pos, pos}, Label::Intrusion};
      Position target;
      do {
        target = {rng.uniform(0.0, env.width), rng.uniform(0.0, env.height)};
      } while (target.x == pos.x || target.y == pos.y);
      return {RoutePayload{pos, target}, Label::Normal};
    }
  }
  return {RoutePayload{pos, pos}, Label::Normal};
}

void validate(const Sim2dConfig& c) {
  if (c.width <= 0 || c.height <= 0) invalid("width and height must be > 0");
  if (c.move_period_ms <= 0) invalid("move period must be > 0");
  if (c.color_period_ms < 0) invalid("color period must be >= 0");
  for (const auto p : c.request_period_ms) {
    if (p < 0) invalid("request periods must be >= 0");
  }
  if (!(c.movement.speed >= 0.0) || !(c.movement.max_turn >= 0.0)) {
    invalid("speed and max_turn must be >= 0");
  }
  if (c.illegal_zone) {
    const Rect& z = *c.illegal_zone;
    if (!(z.x0 >= 0.0 && z.y0 >= 0.0 && z.x1 <= c.width && z.y1 <= c.height && z.x0 < z.x1 &&
          z.y0 < z.y1)) {
      invalid("illegal zone must be a non-empty rectangle inside the environment");
    }
  }
  if ((c.flags.illegal_dwell || c.start == StartPosition::IllegalZone) && !c.illegal_zone) {
    invalid("illegal_dwell and start=illegal_zone need an illegal zone");
  }
}

Sim2dComponent::Sim2dComponent(Sim2dConfig config, std::uint64_t seed)
    : config_(config),
      move_rng_(substream_seed(seed, 1)),
      request_rngs_{Rng(substream_seed(seed, 3)), Rng(substream_seed(seed, 4)),
                    Rng(substream_seed(seed, 5))} {
  validate(config_);
  Rng env_rng(substream_seed(seed, 0));
  if (config_.flags.color_area) {
    env_ = build_environment(config_.level, config_.width, config_.height, env_rng);
  } else {
    env_.width = config_.width;
    env_.height = config_.height;
    env_.erroneous = erroneous_color(config_.level);
  }
  env_.illegal_zone = config_.illegal_zone;
  env_.zone_colored = config_.flags.illegal_dwell;
  env_.rasterize();

  Rng start_rng(substream_seed(seed, 2));
  if (config_.start == StartPosition::IllegalZone) {
    const Rect& z = *config_.illegal_zone;
    unit_.pos = {start_rng.uniform(z.x0, z.x1), start_rng.uniform(z.y0, z.y1)};
  } else {
    unit_.pos = {start_rng.uniform(0.0, config_.width), start_rng.uniform(0.0, config_.height)};
  }
  unit_.heading = start_rng.uniform(-std::numbers::pi, std::numbers::pi);
  unit_.dwell = config_.flags.illegal_dwell;
  unit_.was_in_zone = unit_.dwell && env_.in_zone(unit_.pos);
}

std::int64_t Sim2dComponent::period_ms(std::size_t stream) const {
  if (stream == 0) return config_.color_period_ms;
  return config_.request_period_ms.at(stream - 1);
}

void Sim2dComponent::advance_to(std::int64_t vtime_ms) {
  const std::int64_t target = vtime_ms / config_.move_period_ms;
  while (ticks_done_ < target) {
    step_unit(env_, unit_, config_.movement, move_rng_);
    ++ticks_done_;
  }
}

Emitted Sim2dComponent::emit(std::size_t stream, std::int64_t vtime_ms) {
  advance_to(vtime_ms);
  if (stream == 0) {
    const auto reading = read_color(env_, unit_);
    return {DataCategory::Color, ColorPayload{unit_.pos, reading.color}, reading.label};
  }
  const auto kind = static_cast<RequestKind>(stream - 1);
  auto request =
      make_request(env_, unit_, kind, config_.flags, config_.level, request_rngs_.at(stream - 1));
  return {category_of(kind), std::move(request.payload), request.label};
}

}  // namespace idsbed
