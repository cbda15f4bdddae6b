#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace idsbed {

/// Failure categories raised across the library. Every thrown idsbed::Error
/// carries exactly one of these so callers (and tests) can branch on it.
enum class ErrorKind {
  MalformedRecord,
  CategorySchemaMismatch,
  InvalidParams,
  UndefinedMean,
  ConfigParseError,
  ValidationError,
  SinkUnavailable,
  MalformedRequest,
  DetectorFailure,
  EmptyInput,
  ZeroMean,
  DegenerateBaseline,
  DegenerateInput,
  InsufficientData,
  LengthMismatch,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

enum class Label : std::uint8_t { Normal, Intrusion };

enum class DifficultyLevel : std::uint8_t { Easy, Medium, Hard };

inline constexpr std::array<DifficultyLevel, 3> kAllLevels{
    DifficultyLevel::Easy, DifficultyLevel::Medium, DifficultyLevel::Hard};

/// Off-value / significant-error factor f.
double off_value_factor(DifficultyLevel level);

/// Probability that a compromised positional request is emitted in its
/// compromised form.
double positional_corruption_probability(DifficultyLevel level);

/// Fraction of the environment covered by the erroneous color area.
double erroneous_area_fraction(DifficultyLevel level);

enum class DataCategory : std::uint8_t {
  Gaussian,
  Gumbel,
  Laplace,
  Logistic,
  VonMises,
  Pareto,
  Rayleigh,
  Uniform,
  Wald,
  Weibull,
  Color,
  CountryCode,
  Poi,
  Route,
};

inline constexpr std::size_t kCategoryCount = 14;
inline constexpr std::size_t kGeneratorCategoryCount = 10;

inline constexpr std::array<DataCategory, kCategoryCount> kAllCategories{
    DataCategory::Gaussian, DataCategory::Gumbel,   DataCategory::Laplace,
    DataCategory::Logistic, DataCategory::VonMises, DataCategory::Pareto,
    DataCategory::Rayleigh, DataCategory::Uniform,  DataCategory::Wald,
    DataCategory::Weibull,  DataCategory::Color,    DataCategory::CountryCode,
    DataCategory::Poi,      DataCategory::Route};

/// Reporting groups used by dataset quality reports.
enum class CategoryGroup : std::uint8_t { Generators, Positional, Color };

inline constexpr std::array<CategoryGroup, 3> kAllGroups{
    CategoryGroup::Generators, CategoryGroup::Positional, CategoryGroup::Color};

constexpr bool is_generator(DataCategory c) {
  return static_cast<std::uint8_t>(c) < kGeneratorCategoryCount;
}

constexpr bool is_positional(DataCategory c) {
  return c == DataCategory::CountryCode || c == DataCategory::Poi ||
         c == DataCategory::Route;
}

CategoryGroup group_of(DataCategory c);

constexpr std::size_t index_of(DataCategory c) {
  return static_cast<std::size_t>(c);
}

std::string_view to_string(Label label);
std::string_view to_string(DifficultyLevel level);
std::string_view to_string(DataCategory category);
std::string_view to_string(CategoryGroup group);

std::optional<Label> parse_label(std::string_view text);
std::optional<DifficultyLevel> parse_level(std::string_view text);
std::optional<DataCategory> parse_category(std::string_view text);

}  // namespace idsbed
