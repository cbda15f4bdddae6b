#include "idsbed/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace idsbed {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw Error(ErrorKind::ValidationError, path + ": " + why);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const auto a : allowed) ok = ok || key == a;
    if (!ok) fail(path + "." + key, "unknown field");
  }
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

std::int64_t get_int(const json& j, const std::string& path, std::int64_t min_value) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < min_value) fail(path, "must be >= " + std::to_string(min_value));
  return v;
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

DifficultyLevel get_level(const json& obj, const std::string& path) {
  if (!obj.contains("level")) return DifficultyLevel::Easy;
  const auto text = get_string(obj["level"], path + ".level");
  const auto level = parse_level(text);
  if (!level) fail(path + ".level", "unknown level '" + text + "'");
  return *level;
}

struct EnvironmentDefaults {
  int width = 500;
  int height = 500;
  std::optional<Rect> illegal_zone = Rect{0.0, 0.0, 40.0, 40.0};
  std::int64_t move_period_ms = 10;
  MovementParams movement;
};

EnvironmentDefaults parse_environment(const json& root) {
  EnvironmentDefaults env;
  if (!root.contains("environment")) return env;
  const std::string path = "environment";
  const auto& e = require_object(root["environment"], path);
  check_keys(e, path, {"width", "height", "illegal_zone", "move_period_ms", "speed", "max_turn"});
  if (e.contains("width")) env.width = static_cast<int>(get_int(e["width"], path + ".width", 1));
  if (e.contains("height")) {
    env.height = static_cast<int>(get_int(e["height"], path + ".height", 1));
  }
  if (e.contains("illegal_zone")) {
    const auto& z = e["illegal_zone"];
    if (z.is_null()) {
      env.illegal_zone.reset();
    } else {
      if (!z.is_array() || z.size() != 4) {
        fail(path + ".illegal_zone", "expected [x0, y0, x1, y1] or null");
      }
      env.illegal_zone = Rect{get_number(z[0], path + ".illegal_zone[0]"),
                              get_number(z[1], path + ".illegal_zone[1]"),
                              get_number(z[2], path + ".illegal_zone[2]"),
                              get_number(z[3], path + ".illegal_zone[3]")};
    }
  }
  if (e.contains("move_period_ms")) {
    env.move_period_ms = get_int(e["move_period_ms"], path + ".move_period_ms", 1);
  }
  if (e.contains("speed")) env.movement.speed = get_number(e["speed"], path + ".speed");
  if (e.contains("max_turn")) {
    env.movement.max_turn = get_number(e["max_turn"], path + ".max_turn");
  }
  return env;
}

GeneratorConfig parse_generator(const json& c, const std::string& path) {
  check_keys(c, path, {"type", "distribution", "params", "intrusion", "level", "period_ms"});
  if (!c.contains("distribution")) fail(path + ".distribution", "missing");
  const auto name = get_string(c["distribution"], path + ".distribution");
  const auto category = parse_category(name);
  const auto kind = category ? distribution_of(*category) : std::nullopt;
  if (!kind) fail(path + ".distribution", "unknown distribution '" + name + "'");

  GeneratorConfig g;
  g.spec = DistributionSpec::defaults(*kind);
  const auto names = parameter_names(*kind);
  if (c.contains("params")) {
    const auto& p = c["params"];
    const std::string ppath = path + ".params";
    if (p.is_array()) {
      if (p.size() > names.size()) {
        fail(ppath, std::string(to_string(*kind)) + " takes " + std::to_string(names.size()) +
                        " parameter(s)");
      }
      for (std::size_t i = 0; i < p.size(); ++i) {
        g.spec.params[i] = get_number(p[i], ppath + "[" + std::to_string(i) + "]");
      }
    } else if (p.is_object()) {
      for (const auto& [key, value] : p.items()) {
        std::size_t idx = names.size();
        for (std::size_t i = 0; i < names.size(); ++i) {
          if (names[i] == key) idx = i;
        }
        if (idx == names.size()) fail(ppath + "." + key, "unknown parameter");
        g.spec.params[idx] = get_number(value, ppath + "." + key);
      }
    } else {
      fail(ppath, "expected an object or array");
    }
  }
  if (c.contains("intrusion") && !c["intrusion"].is_null()) {
    const auto text = get_string(c["intrusion"], path + ".intrusion");
    if (text != "none") {
      const auto intrusion = parse_numeric_intrusion(text);
      if (!intrusion) fail(path + ".intrusion", "unknown intrusion '" + text + "'");
      g.intrusion = intrusion;
    }
  }
  g.level = get_level(c, path);
  if (c.contains("period_ms")) g.period_ms = get_int(c["period_ms"], path + ".period_ms", 1);
  return g;
}

Sim2dConfig parse_sim2d(const json& c, const std::string& path, const EnvironmentDefaults& env) {
  check_keys(c, path, {"type", "level", "flags", "start", "periods"});
  Sim2dConfig s;
  s.width = env.width;
  s.height = env.height;
  s.illegal_zone = env.illegal_zone;
  s.move_period_ms = env.move_period_ms;
  s.movement = env.movement;
  s.level = get_level(c, path);
  if (c.contains("flags")) {
    const auto& flags = c["flags"];
    if (!flags.is_array()) fail(path + ".flags", "expected an array");
    for (std::size_t i = 0; i < flags.size(); ++i) {
      const std::string fpath = path + ".flags[" + std::to_string(i) + "]";
      const auto f = get_string(flags[i], fpath);
      if (f == "color_area") {
        s.flags.color_area = true;
      } else if (f == "illegal_dwell") {
        s.flags.illegal_dwell = true;
      } else if (f == "country_code") {
        s.flags.country_code = true;
      } else if (f == "poi") {
        s.flags.poi = true;
      } else if (f == "route") {
        s.flags.route = true;
      } else {
        fail(fpath, "unknown flag '" + f + "'");
      }
    }
  }
  if (c.contains("start")) {
    const auto start = get_string(c["start"], path + ".start");
    if (start == "random") {
      s.start = StartPosition::Random;
    } else if (start == "illegal_zone") {
      s.start = StartPosition::IllegalZone;
    } else {
      fail(path + ".start", "expected 'random' or 'illegal_zone'");
    }
  }
  if (c.contains("periods")) {
    const std::string ppath = path + ".periods";
    const auto& p = require_object(c["periods"], ppath);
    check_keys(p, ppath, {"color", "country_code", "poi", "route"});
    if (p.contains("color")) s.color_period_ms = get_int(p["color"], ppath + ".color", 0);
    if (p.contains("country_code")) {
      s.request_period_ms[0] = get_int(p["country_code"], ppath + ".country_code", 0);
    }
    if (p.contains("poi")) s.request_period_ms[1] = get_int(p["poi"], ppath + ".poi", 0);
    if (p.contains("route")) s.request_period_ms[2] = get_int(p["route"], ppath + ".route", 0);
  }
  try {
    validate(s);
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return s;
}

void validate_component(const ComponentSpec& spec, const std::string& path) {
  if (const auto* g = std::get_if<GeneratorConfig>(&spec)) {
    if (g->period_ms <= 0) fail(path + ".period_ms", "must be > 0");
    try {
      interval_profile(g->spec);
    } catch (const Error& e) {
      fail(path + ".params", std::string(to_string(e.kind())) + ": " + e.what());
    }
  } else {
    try {
      validate(std::get<Sim2dConfig>(spec));
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
}

}  // namespace

std::string_view to_string(RunMode mode) {
  return mode == RunMode::VirtualTime ? "virtual" : "realtime";
}

std::optional<RunMode> parse_run_mode(std::string_view text) {
  if (text == "virtual") return RunMode::VirtualTime;
  if (text == "realtime") return RunMode::RealTime;
  return std::nullopt;
}

ScenarioConfig parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigParseError, e.what());
  }
  require_object(root, "$");
  check_keys(root, "$", {"seed", "mode", "duration_ms", "records", "environment", "clients"});

  ScenarioConfig config;
  if (root.contains("seed")) {
    if (!root["seed"].is_number_integer()) fail("seed", "expected an integer");
    config.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("mode")) {
    const auto text_mode = get_string(root["mode"], "mode");
    const auto mode = parse_run_mode(text_mode);
    if (!mode) fail("mode", "expected 'virtual' or 'realtime'");
    config.mode = *mode;
  }
  if (root.contains("duration_ms")) config.duration_ms = get_int(root["duration_ms"], "duration_ms", 1);
  if (root.contains("records")) {
    config.records = static_cast<std::uint64_t>(get_int(root["records"], "records", 1));
  }
  const auto env = parse_environment(root);

  if (!root.contains("clients") || !root["clients"].is_array()) {
    fail("clients", "expected an array");
  }
  const auto& clients = root["clients"];
  for (std::size_t ci = 0; ci < clients.size(); ++ci) {
    const std::string cpath = "clients[" + std::to_string(ci) + "]";
    const auto& c = require_object(clients[ci], cpath);
    check_keys(c, cpath, {"id", "repeat", "components"});
    if (!c.contains("id")) fail(cpath + ".id", "missing");
    const auto id = get_string(c["id"], cpath + ".id");
    if (!is_valid_token(id)) fail(cpath + ".id", "must match [A-Za-z0-9_.:-]+");
    std::int64_t repeat = 0;
    if (c.contains("repeat")) repeat = get_int(c["repeat"], cpath + ".repeat", 1);

    ClientSpec client;
    if (!c.contains("components") || !c["components"].is_array()) {
      fail(cpath + ".components", "expected an array");
    }
    const auto& comps = c["components"];
    for (std::size_t k = 0; k < comps.size(); ++k) {
      const std::string kpath = cpath + ".components[" + std::to_string(k) + "]";
      const auto& comp = require_object(comps[k], kpath);
      if (!comp.contains("type")) fail(kpath + ".type", "missing");
      const auto type = get_string(comp["type"], kpath + ".type");
      if (type == "generator") {
        client.components.emplace_back(parse_generator(comp, kpath));
      } else if (type == "sim2d") {
        client.components.emplace_back(parse_sim2d(comp, kpath, env));
      } else {
        fail(kpath + ".type", "expected 'generator' or 'sim2d'");
      }
      validate_component(client.components.back(), kpath);
    }
    if (repeat == 0) {
      client.id = id;
      config.clients.push_back(std::move(client));
    } else {
      for (std::int64_t r = 0; r < repeat; ++r) {
        ClientSpec copy = client;
        copy.id = id + "-" + std::to_string(r);
        config.clients.push_back(std::move(copy));
      }
    }
  }
  validate(config);
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

void validate(const ScenarioConfig& config) {
  if (config.clients.empty()) fail("clients", "at least one client is required");
  if (!config.duration_ms && !config.records && config.mode == RunMode::VirtualTime) {
    fail("$", "a virtual-time scenario needs duration_ms or records");
  }
  std::set<std::string> seen;
  for (std::size_t ci = 0; ci < config.clients.size(); ++ci) {
    const auto& c = config.clients[ci];
    const std::string cpath = "clients[" + std::to_string(ci) + "]";
    if (!is_valid_token(c.id)) fail(cpath + ".id", "must match [A-Za-z0-9_.:-]+");
    if (!seen.insert(c.id).second) fail(cpath + ".id", "duplicate client id '" + c.id + "'");
    if (c.components.empty()) fail(cpath + ".components", "at least one component is required");
    for (std::size_t k = 0; k < c.components.size(); ++k) {
      validate_component(c.components[k], cpath + ".components[" + std::to_string(k) + "]");
    }
  }
}

}  // namespace idsbed
