#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "remoteness/spatial.hpp"
#include "remoteness/types.hpp"

namespace remoteness {

// Population weight plus the five distance-category weights. Presets use
// integer weights summing to 30, so the normalization constant is 1/30.
struct WeightScheme {
  std::string name;
  double population_weight = 15.0;
  std::array<double, kNumCategories> category_weights{};

  static WeightScheme equal();      // [3 3 3 3 3]
  static WeightScheme ascending();  // [1 2 3 4 5]

  double total() const;

  // Throws ConfigError on negative weights or zero total.
  void validate() const;
};

enum class ScalingMode { PerYear, Global };

const char* to_string(ScalingMode mode);

struct RunConfig {
  CategoryList categories = default_categories();
  WeightScheme weights = WeightScheme::equal();
  DistanceMetric metric = DistanceMetric::Haversine;
  FallbackPolicy fallback = FallbackPolicy::Error;
  ScalingMode scaling = ScalingMode::PerYear;
  std::int64_t population_floor = 10;
  double distance_floor_km = 1.0;
  double log_base = 10.0;

  void validate() const;  // throws ConfigError
};

// Bit flags recording which policies fired for a place.
enum ClampFlag : std::uint8_t {
  kPopulationClamped = 1u << 0,
  kDistanceClamped = 1u << 1,
  kDistanceFallback = 1u << 2,
};

std::string flags_to_string(std::uint8_t flags);

struct RiResult {
  std::string place_id;
  int year = 0;
  double raw = 0.0;
  double scaled = 0.0;
  std::uint8_t flags = 0;
};

double log_base(double value, double base);

struct RawRi {
  double value = 0.0;
  bool population_clamped = false;
};

// Weighted average of the inverse log population and the log distances,
// normalized by the total weight. Distances must already be at or above the
// distance floor; the population floor is applied here.
RawRi raw_ri(std::int64_t population,
             const std::array<double, kNumCategories>& distances_km,
             const WeightScheme& weights, const RunConfig& config);

struct ScaledGroup {
  std::vector<double> values;
  bool degenerate = false;  // single value or all-equal group -> all 0.5
};

// Min-max normalization of one scaling group into [0, 1].
ScaledGroup scale_group(std::span<const double> raws);

struct ComputeStats {
  std::size_t population_clamped = 0;
  std::size_t distance_clamped = 0;
  std::size_t distance_fallback = 0;
  std::size_t degenerate_groups = 0;
};

struct YearResults {
  int year = 0;
  std::vector<DistanceVector> distances;
  std::vector<RiResult> results;  // in PlaceSet order
};

struct ComputeOutput {
  std::vector<YearResults> years;
  ComputeStats stats;
};

// Full pipeline for one year: category indexes, distance vectors, raw index,
// min-max scaling. Output order matches the PlaceSet order.
ComputeOutput compute_year(const PlaceSet& places, const RunConfig& config);

// Multi-year runs share raw values between scaling modes; PerYear scales each
// year on its own, Global takes min/max over all years jointly.
ComputeOutput compute_multi_year(const std::vector<PlaceSet>& sets,
                                 const RunConfig& config);

}  // namespace remoteness
