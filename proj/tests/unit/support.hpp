#pragma once

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "idsbed/record.hpp"
#include "idsbed/rng.hpp"

namespace idsbed::test {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string pattern = (std::filesystem::temp_directory_path() / "idsbed-XXXXXX").string();
    path_ = ::mkdtemp(pattern.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

/// Random valid record of any category, for round-trip properties.
inline LogRecord random_record(Rng& rng) {
  static constexpr const char* kIds[] = {"c1", "car-0", "gen.a", "x:y", "Z_9"};
  LogRecord r;
  r.vtime_ms = static_cast<std::int64_t>(rng.below(1'000'000'000));
  r.client_id = kIds[rng.below(5)];
  r.category = kAllCategories[rng.below(kCategoryCount)];
  r.label = rng.coin() ? Label::Intrusion : Label::Normal;
  const Position pos{rng.uniform(0.0, 500.0), rng.uniform(0.0, 500.0)};
  switch (r.category) {
    case DataCategory::Color:
      r.payload = ColorPayload{pos, Color{static_cast<std::uint8_t>(rng.below(256)),
                                          static_cast<std::uint8_t>(rng.below(256)),
                                          static_cast<std::uint8_t>(rng.below(256))}};
      break;
    case DataCategory::CountryCode:
      r.payload = CountryCodePayload{pos, rng.coin() ? "DE" : "FR"};
      break;
    case DataCategory::Poi:
      r.payload = PoiPayload{pos, rng.coin() ? "fuel" : "armory", rng.coin() ? "open" : "Invalid"};
      break;
    case DataCategory::Route:
      r.payload = RoutePayload{pos, {rng.uniform(0.0, 500.0), rng.uniform(0.0, 500.0)}};
      break;
    default: {
      // Mix ordinary, tiny and huge magnitudes to exercise the number format.
      const double scale = std::ldexp(1.0, static_cast<int>(rng.below(200)) - 100);
      r.payload = ScalarPayload{(rng.uniform01() - 0.5) * scale};
      break;
    }
  }
  return r;
}

}  // namespace idsbed::test
