#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace remoteness {

// Interpretation of PlaceRecord::x / ::y.
//   Geographic: x = longitude (degrees), y = latitude (degrees)
//   Planar:     x, y in meters of some projected CRS
enum class CoordinateMode { Geographic, Planar };

const char* to_string(CoordinateMode mode);

// One populated place, modeled as a point with a population count.
struct PlaceRecord {
  std::string place_id;
  std::string name;       // may be empty
  int year = 0;
  double x = 0.0;
  double y = 0.0;
  std::int64_t population = 0;
  std::string county_id;  // may be empty

  bool operator==(const PlaceRecord&) const = default;
};

// All places of one year, in stable input order.
struct PlaceSet {
  int year = 0;
  CoordinateMode mode = CoordinateMode::Geographic;
  std::vector<PlaceRecord> records;

  std::size_t size() const { return records.size(); }
};

// Half-open population bin [lower, upper); upper may be unbounded.
struct PopulationCategory {
  int index = 0;  // 1-based position within the category list
  std::int64_t lower = 0;
  std::int64_t upper = std::numeric_limits<std::int64_t>::max();

  bool contains(std::int64_t population) const {
    return population >= lower && population < upper;
  }
};

inline constexpr std::size_t kNumCategories = 5;

using CategoryList = std::array<PopulationCategory, kNumCategories>;

// 10k-20k, 20k-50k, 50k-100k, 100k-250k, 250k+
CategoryList default_categories();

// Checks disjointness and ordering by lower bound; throws ConfigError.
void validate_categories(const CategoryList& categories);

enum class Errc {
  IoError,
  ConfigError,
  MalformedHeader,
  InvalidCoordinate,
  MissingCategory,
  NoCountyIds,
  InsufficientOverlap,
  InvalidCodes,
  EmptyInput,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  Errc code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace remoteness
