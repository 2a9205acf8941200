#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "remoteness/geo.hpp"
#include "remoteness/kdtree.hpp"
#include "remoteness/types.hpp"

namespace remoteness {

enum class Provenance : std::uint8_t { Measured, Clamped, Fallback };

const char* to_string(Provenance provenance);

enum class FallbackPolicy { Error, Diagonal };

const char* to_string(FallbackPolicy policy);

// Immutable per-category search structure. Members are the places whose
// population falls in the category's half-open bounds; coordinates are kept
// both in input form (for exact distance evaluation) and in search-space
// form inside the tree.
struct CategoryIndex {
  PopulationCategory category;
  CoordinateMode mode = CoordinateMode::Geographic;
  std::vector<std::string> member_ids;
  std::vector<double> member_x;
  std::vector<double> member_y;
  KdTree tree;

  std::size_t size() const { return member_ids.size(); }
};

using CategoryIndexes = std::array<CategoryIndex, kNumCategories>;

CategoryIndexes build_category_indexes(const PlaceSet& places,
                                       const CategoryList& categories);

struct NearestPlace {
  double km = 0.0;  // after the distance floor
  std::string nearest_id;
  Provenance provenance = Provenance::Measured;
};

// Exact nearest member of the category, excluding the query's own place_id.
// Empty optional means the category holds no other member; the caller picks
// the fallback policy. Equidistant members resolve to the smallest place_id.
std::optional<NearestPlace> nearest_distance(const PlaceRecord& query,
                                             const CategoryIndex& index,
                                             DistanceMetric metric,
                                             double distance_floor_km = 1.0);

// The five nearest-place distances for one place.
struct DistanceVector {
  std::string place_id;
  std::array<double, kNumCategories> km{};
  std::array<Provenance, kNumCategories> provenance{};
  std::array<std::string, kNumCategories> nearest_id{};  // empty on fallback
};

// Diagonal of the coordinate bounding box, in km under the metric.
// Used as the substitute distance when a category has no members.
double bounding_box_diagonal_km(const PlaceSet& places, DistanceMetric metric);

std::vector<DistanceVector> distance_vectors(const PlaceSet& places,
                                             const CategoryIndexes& indexes,
                                             DistanceMetric metric,
                                             FallbackPolicy fallback,
                                             double distance_floor_km = 1.0);

}  // namespace remoteness
