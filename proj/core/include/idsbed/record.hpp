#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "idsbed/types.hpp"

namespace idsbed {

struct Position {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

struct Color {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Color&, const Color&) = default;
};

struct ScalarPayload {
  double value = 0.0;
  friend bool operator==(const ScalarPayload&, const ScalarPayload&) = default;
};

struct ColorPayload {
  Position pos;
  Color color;
  friend bool operator==(const ColorPayload&, const ColorPayload&) = default;
};

struct CountryCodePayload {
  Position pos;
  std::string code;
  friend bool operator==(const CountryCodePayload&,
                         const CountryCodePayload&) = default;
};

struct PoiPayload {
  Position pos;
  std::string type;
  std::string result;
  friend bool operator==(const PoiPayload&, const PoiPayload&) = default;
};

struct RoutePayload {
  Position pos;
  Position target;
  friend bool operator==(const RoutePayload&, const RoutePayload&) = default;
};

using Payload = std::variant<ScalarPayload, ColorPayload, CountryCodePayload,
                             PoiPayload, RoutePayload>;

/// Number of encoded payload tokens a category carries.
std::size_t payload_arity(DataCategory category);

/// True when the payload alternative is the one the category's schema expects.
bool schema_matches(DataCategory category, const Payload& payload);

/// Position carried by the payload, if the category has one.
std::optional<Position> position_of(const Payload& payload);

/// Identifier tokens (client ids, POI types, codes) are restricted to
/// [A-Za-z0-9_.:-]+ so they never collide with the line format separators.
bool is_valid_token(std::string_view token);

/// One stored log entry, as produced by the server's logging component.
struct LogRecord {
  std::int64_t vtime_ms = 0;
  std::string client_id;
  DataCategory category = DataCategory::Gaussian;
  Payload payload = ScalarPayload{};
  Label label = Label::Normal;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

/// A client request as it travels over the wire. The server turns it into a
/// LogRecord by assigning the time stamp.
struct ClientRequest {
  std::int64_t sent_ms = 0;
  std::string client_id;
  DataCategory category = DataCategory::Gaussian;
  Payload payload = ScalarPayload{};
  Label label = Label::Normal;

  friend bool operator==(const ClientRequest&, const ClientRequest&) = default;
};

// Canonical log line:
//   t=<vtime>\tclient=<id>\tcat=<category>\tdata=<tok>,<tok>...\tlabel=<label>
// Request line: identical layout with "sent=" in place of "t=".

/// Throws Error(ValidationError) when the record violates its invariants.
void validate(const LogRecord& record);

std::string serialize_record(const LogRecord& record);
LogRecord parse_record(std::string_view line);

std::string serialize_request(const ClientRequest& request);
ClientRequest parse_request(std::string_view line);

std::string encode_payload(const Payload& payload);
Payload decode_payload(DataCategory category, std::string_view data);

/// Canonical line without the time field; two records are duplicates of each
/// other exactly when their keys are equal.
std::string duplicate_key(const LogRecord& record);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace idsbed
