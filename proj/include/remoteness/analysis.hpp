#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "remoteness/index.hpp"
#include "remoteness/types.hpp"

namespace remoteness {

// External county-level classification (e.g., an ordinal rurality code).
struct CountyCodeTable {
  std::string label;
  std::map<std::string, int> codes;  // county_id -> ordinal code
};

// CSV schema: county_id,code (header required). Duplicate county_id throws.
CountyCodeTable parse_county_codes(const std::filesystem::path& path,
                                   const std::string& label);

struct CountyStats {
  std::string county_id;
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double range = 0.0;
  double stddev = 0.0;  // population standard deviation
};

struct VarianceDecomposition {
  double total = 0.0;
  double within = 0.0;
  double between = 0.0;
  double within_share = 0.0;  // 0 when total variance is 0
};

struct SpearmanResult {
  std::string label;
  // Absent when one side is constant (correlation undefined).
  std::optional<double> coefficient;
  std::size_t matched_places = 0;
  std::size_t excluded_no_code = 0;
};

struct HeterogeneityReport {
  std::size_t places_total = 0;
  std::size_t places_with_county = 0;
  std::size_t excluded_no_county = 0;
  std::vector<CountyStats> counties;  // sorted by county_id
  VarianceDecomposition variance;
  std::optional<SpearmanResult> spearman;
};

// Per-county dispersion of the scaled index plus a one-way variance
// decomposition. Results are joined to counties through (place_id, year).
// Throws NoCountyIds when no place carries a county.
HeterogeneityReport heterogeneity(std::span<const RiResult> results,
                                  std::span<const PlaceSet> sets);

// Spearman rank correlation (average ranks for ties) between each place's
// scaled index and its county's code. Throws InsufficientOverlap when fewer
// than two places match the table.
SpearmanResult code_agreement(std::span<const RiResult> results,
                              std::span<const PlaceSet> sets,
                              const CountyCodeTable& codes);

// Average-rank Spearman correlation of two equal-length samples;
// absent when either side is constant.
std::optional<double> spearman(std::span<const double> a,
                               std::span<const double> b);

std::string report_to_json(const HeterogeneityReport& report);
std::string report_to_table(const HeterogeneityReport& report);

}  // namespace remoteness
