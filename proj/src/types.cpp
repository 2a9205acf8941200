#include "remoteness/types.hpp"

namespace remoteness {

const char* to_string(CoordinateMode mode) {
  return mode == CoordinateMode::Geographic ? "geographic" : "planar";
}

CategoryList default_categories() {
  return {{{1, 10000, 20000},
           {2, 20000, 50000},
           {3, 50000, 100000},
           {4, 100000, 250000},
           {5, 250000, std::numeric_limits<std::int64_t>::max()}}};
}

void validate_categories(const CategoryList& categories) {
  for (std::size_t i = 0; i < categories.size(); ++i) {
    const auto& c = categories[i];
    if (c.lower < 0 || c.upper <= c.lower) {
      throw Error(Errc::ConfigError,
                  "category " + std::to_string(i + 1) + " has empty bounds");
    }
    if (i > 0 && categories[i - 1].upper > c.lower) {
      throw Error(Errc::ConfigError,
                  "categories " + std::to_string(i) + " and " +
                      std::to_string(i + 1) + " overlap or are out of order");
    }
  }
}

const char* to_string(Errc code) {
  switch (code) {
    case Errc::IoError:
      return "IoError";
    case Errc::ConfigError:
      return "ConfigError";
    case Errc::MalformedHeader:
      return "MalformedHeader";
    case Errc::InvalidCoordinate:
      return "InvalidCoordinate";
    case Errc::MissingCategory:
      return "MissingCategory";
    case Errc::NoCountyIds:
      return "NoCountyIds";
    case Errc::InsufficientOverlap:
      return "InsufficientOverlap";
    case Errc::InvalidCodes:
      return "InvalidCodes";
    case Errc::EmptyInput:
      return "EmptyInput";
  }
  return "UnknownError";
}

}  // namespace remoteness
