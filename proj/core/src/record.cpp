#include "idsbed/record.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace idsbed {

namespace {

constexpr char kFieldSep = '\t';
constexpr char kTokenSep = ',';

[[noreturn]] void malformed(std::string_view why, std::string_view line) {
  std::string shown(line.substr(0, 120));
  throw Error(ErrorKind::MalformedRecord,
              std::string(why) + ": '" + shown + "'");
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view expect_field(std::string_view field, std::string_view key,
                              std::string_view line) {
  if (field.size() <= key.size() || field.substr(0, key.size()) != key ||
      field[key.size()] != '=') {
    malformed("expected field '" + std::string(key) + "'", line);
  }
  return field.substr(key.size() + 1);
}

double parse_double(std::string_view token, std::string_view line) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    malformed("bad number '" + std::string(token) + "'", line);
  }
  return value;
}

std::int64_t parse_int(std::string_view token, std::string_view line) {
  std::int64_t value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    malformed("bad integer '" + std::string(token) + "'", line);
  }
  return value;
}

std::uint8_t parse_channel(std::string_view token, std::string_view line) {
  const auto v = parse_int(token, line);
  if (v < 0 || v > 255) malformed("color channel out of range", line);
  return static_cast<std::uint8_t>(v);
}

std::string parse_token(std::string_view token, std::string_view line) {
  if (!is_valid_token(token)) malformed("bad token", line);
  return std::string(token);
}

struct Fields {
  std::int64_t time = 0;
  std::string client;
  DataCategory category = DataCategory::Gaussian;
  Payload payload;
  Label label = Label::Normal;
};

Fields parse_fields(std::string_view line, std::string_view time_key) {
  if (line.empty()) malformed("empty line", line);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto fields = split(line, kFieldSep);
  if (fields.size() != 5) malformed("expected 5 fields", line);

  Fields out;
  out.time = parse_int(expect_field(fields[0], time_key, line), line);
  if (out.time < 0) malformed("negative time", line);
  out.client = std::string(expect_field(fields[1], "client", line));
  if (!is_valid_token(out.client)) malformed("bad client id", line);
  const auto cat = parse_category(expect_field(fields[2], "cat", line));
  if (!cat) malformed("unknown category", line);
  out.category = *cat;
  out.payload = decode_payload(out.category, expect_field(fields[3], "data", line));
  const auto label = parse_label(expect_field(fields[4], "label", line));
  if (!label) malformed("unknown label", line);
  out.label = *label;
  return out;
}

std::string format_fields(std::string_view time_key, std::int64_t time,
                          const std::string& client, DataCategory category,
                          const Payload& payload, Label label) {
  std::string out;
  out.reserve(96);
  out.append(time_key).append("=").append(std::to_string(time));
  out.push_back(kFieldSep);
  out.append("client=").append(client);
  out.push_back(kFieldSep);
  out.append("cat=").append(to_string(category));
  out.push_back(kFieldSep);
  out.append("data=").append(encode_payload(payload));
  out.push_back(kFieldSep);
  out.append("label=").append(to_string(label));
  return out;
}

void append_pos(std::string& out, const Position& p) {
  out.append(format_double(p.x)).push_back(kTokenSep);
  out.append(format_double(p.y));
}

bool finite(const Position& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

bool is_valid_token(std::string_view token) {
  if (token.empty()) return false;
  for (const char ch : token) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '_' || ch == '-' ||
                    ch == '.' || ch == ':';
    if (!ok) return false;
  }
  return true;
}

std::size_t payload_arity(DataCategory category) {
  if (is_generator(category)) return 1;
  switch (category) {
    case DataCategory::Color: return 5;
    case DataCategory::CountryCode: return 3;
    case DataCategory::Poi: return 4;
    case DataCategory::Route: return 4;
    default: return 1;
  }
}

bool schema_matches(DataCategory category, const Payload& payload) {
  if (is_generator(category)) return std::holds_alternative<ScalarPayload>(payload);
  switch (category) {
    case DataCategory::Color: return std::holds_alternative<ColorPayload>(payload);
    case DataCategory::CountryCode:
      return std::holds_alternative<CountryCodePayload>(payload);
    case DataCategory::Poi: return std::holds_alternative<PoiPayload>(payload);
    case DataCategory::Route: return std::holds_alternative<RoutePayload>(payload);
    default: return false;
  }
}

std::optional<Position> position_of(const Payload& payload) {
  return std::visit(
      [](const auto& p) -> std::optional<Position> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ScalarPayload>) {
          return std::nullopt;
        } else {
          return p.pos;
        }
      },
      payload);
}

std::string encode_payload(const Payload& payload) {
  std::string out;
  std::visit(
      [&out](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ScalarPayload>) {
          out = format_double(p.value);
        } else if constexpr (std::is_same_v<T, ColorPayload>) {
          append_pos(out, p.pos);
          out.push_back(kTokenSep);
          out.append(std::to_string(p.color.r)).push_back(kTokenSep);
          out.append(std::to_string(p.color.g)).push_back(kTokenSep);
          out.append(std::to_string(p.color.b));
        } else if constexpr (std::is_same_v<T, CountryCodePayload>) {
          append_pos(out, p.pos);
          out.push_back(kTokenSep);
          out.append(p.code);
        } else if constexpr (std::is_same_v<T, PoiPayload>) {
          append_pos(out, p.pos);
          out.push_back(kTokenSep);
          out.append(p.type).push_back(kTokenSep);
          out.append(p.result);
        } else {
          append_pos(out, p.pos);
          out.push_back(kTokenSep);
          append_pos(out, p.target);
        }
      },
      payload);
  return out;
}

Payload decode_payload(DataCategory category, std::string_view data) {
  const auto tokens = split(data, kTokenSep);
  if (tokens.size() != payload_arity(category)) {
    throw Error(ErrorKind::CategorySchemaMismatch,
                std::string(to_string(category)) + " expects " +
                    std::to_string(payload_arity(category)) +
                    " payload values, got " + std::to_string(tokens.size()));
  }
  if (is_generator(category)) return ScalarPayload{parse_double(tokens[0], data)};
  const Position pos{parse_double(tokens[0], data), parse_double(tokens[1], data)};
  switch (category) {
    case DataCategory::Color:
      return ColorPayload{pos, Color{parse_channel(tokens[2], data),
                                     parse_channel(tokens[3], data),
                                     parse_channel(tokens[4], data)}};
    case DataCategory::CountryCode:
      return CountryCodePayload{pos, parse_token(tokens[2], data)};
    case DataCategory::Poi:
      return PoiPayload{pos, parse_token(tokens[2], data), parse_token(tokens[3], data)};
    case DataCategory::Route:
      return RoutePayload{pos, Position{parse_double(tokens[2], data),
                                        parse_double(tokens[3], data)}};
    default:
      break;
  }
  malformed("unsupported category", data);
}

void validate(const LogRecord& record) {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::ValidationError, why); };
  if (record.vtime_ms < 0) fail("vtime must be non-negative");
  if (!is_valid_token(record.client_id)) fail("invalid client id '" + record.client_id + "'");
  if (!schema_matches(record.category, record.payload)) {
    fail("payload does not match category " + std::string(to_string(record.category)));
  }
  std::visit(
      [&fail](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ScalarPayload>) {
          if (!std::isfinite(p.value)) fail("non-finite value");
        } else {
          if (!finite(p.pos)) fail("non-finite position");
          if constexpr (std::is_same_v<T, CountryCodePayload>) {
            if (!is_valid_token(p.code)) fail("invalid country code token");
          } else if constexpr (std::is_same_v<T, PoiPayload>) {
            if (!is_valid_token(p.type) || !is_valid_token(p.result)) fail("invalid poi token");
          } else if constexpr (std::is_same_v<T, RoutePayload>) {
            if (!finite(p.target)) fail("non-finite target");
          }
        }
      },
      record.payload);
}

std::string serialize_record(const LogRecord& record) {
  return format_fields("t", record.vtime_ms, record.client_id, record.category,
                       record.payload, record.label);
}

LogRecord parse_record(std::string_view line) {
  auto f = parse_fields(line, "t");
  return LogRecord{f.time, std::move(f.client), f.category, std::move(f.payload), f.label};
}

std::string serialize_request(const ClientRequest& request) {
  return format_fields("sent", request.sent_ms, request.client_id, request.category,
                       request.payload, request.label);
}

ClientRequest parse_request(std::string_view line) {
  try {
    auto f = parse_fields(line, "sent");
    return ClientRequest{f.time, std::move(f.client), f.category, std::move(f.payload),
                         f.label};
  } catch (const Error& e) {
    throw Error(ErrorKind::MalformedRequest, e.what());
  }
}

std::string duplicate_key(const LogRecord& record) {
  const auto line = serialize_record(record);
  const auto tab = line.find(kFieldSep);
  return line.substr(tab + 1);
}

}  // namespace idsbed
