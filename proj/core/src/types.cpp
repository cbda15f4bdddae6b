#include "idsbed/types.hpp"

#include <algorithm>
#include <cctype>

namespace idsbed {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kCategoryNames{
    "gaussian", "gumbel",   "laplace", "logistic", "von_mises",
    "pareto",   "rayleigh", "uniform", "wald",     "weibull",
    "color",    "country_code", "poi", "route"};

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::CategorySchemaMismatch: return "CategorySchemaMismatch";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::UndefinedMean: return "UndefinedMean";
    case ErrorKind::ConfigParseError: return "ConfigParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::SinkUnavailable: return "SinkUnavailable";
    case ErrorKind::MalformedRequest: return "MalformedRequest";
    case ErrorKind::DetectorFailure: return "DetectorFailure";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ZeroMean: return "ZeroMean";
    case ErrorKind::DegenerateBaseline: return "DegenerateBaseline";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

double off_value_factor(DifficultyLevel level) {
  switch (level) {
    case DifficultyLevel::Easy: return 5.0;
    case DifficultyLevel::Medium: return 1.5;
    case DifficultyLevel::Hard: return 1.001;
  }
  return 5.0;
}

double positional_corruption_probability(DifficultyLevel level) {
  switch (level) {
    case DifficultyLevel::Easy: return 0.40;
    case DifficultyLevel::Medium: return 0.20;
    case DifficultyLevel::Hard: return 0.05;
  }
  return 0.40;
}

double erroneous_area_fraction(DifficultyLevel level) {
  switch (level) {
    case DifficultyLevel::Easy: return 0.40;
    case DifficultyLevel::Medium: return 0.20;
    case DifficultyLevel::Hard: return 0.05;
  }
  return 0.40;
}

CategoryGroup group_of(DataCategory c) {
  if (is_generator(c)) return CategoryGroup::Generators;
  if (c == DataCategory::Color) return CategoryGroup::Color;
  return CategoryGroup::Positional;
}

std::string_view to_string(Label label) {
  return label == Label::Normal ? "normal" : "intrusion";
}

std::string_view to_string(DifficultyLevel level) {
  switch (level) {
    case DifficultyLevel::Easy: return "easy";
    case DifficultyLevel::Medium: return "medium";
    case DifficultyLevel::Hard: return "hard";
  }
  return "easy";
}

std::string_view to_string(DataCategory category) {
  return kCategoryNames[index_of(category)];
}

std::string_view to_string(CategoryGroup group) {
  switch (group) {
    case CategoryGroup::Generators: return "generators";
    case CategoryGroup::Positional: return "positional";
    case CategoryGroup::Color: return "color";
  }
  return "generators";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "normal") return Label::Normal;
  if (text == "intrusion") return Label::Intrusion;
  return std::nullopt;
}

std::optional<DifficultyLevel> parse_level(std::string_view text) {
  const auto t = lower(text);
  if (t == "easy") return DifficultyLevel::Easy;
  if (t == "medium") return DifficultyLevel::Medium;
  if (t == "hard") return DifficultyLevel::Hard;
  return std::nullopt;
}

std::optional<DataCategory> parse_category(std::string_view text) {
  const auto t = lower(text);
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == t) return static_cast<DataCategory>(i);
  }
  // Accepted aliases for hand-written configs.
  if (t == "normal") return DataCategory::Gaussian;
  if (t == "vonmises") return DataCategory::VonMises;
  if (t == "countrycode") return DataCategory::CountryCode;
  return std::nullopt;
}

}  // namespace idsbed
