#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "remoteness/types.hpp"

namespace remoteness {

enum class RejectReason {
  MalformedRow,
  NegativePopulation,
  InvalidCoordinate,
  DuplicatePlace,
};

const char* to_string(RejectReason reason);

// One input row (CSV line or GeoJSON feature) that did not become a record.
struct RowRejection {
  std::size_t row = 0;  // 1-based line number / 0-based feature index
  RejectReason reason = RejectReason::MalformedRow;
  std::string detail;
};

struct ParseResult {
  std::vector<PlaceSet> sets;  // one per distinct year, ascending
  std::vector<RowRejection> rejections;
};

// CSV schema (header required):
//   place_id,name,year,lon,lat,population,county_id   (geographic)
//   place_id,name,year,x,y,population,county_id       (planar)
// Rows are either kept or reported in the rejection list; file-level problems
// (missing file, schema mismatch) throw.
ParseResult parse_places_csv(const std::filesystem::path& path,
                             CoordinateMode mode);

// GeoJSON FeatureCollection of Point features; properties must carry
// place_id, year, population and may carry name, county_id.
ParseResult parse_places_geojson(const std::filesystem::path& path,
                                 CoordinateMode mode);

// Dispatches on extension: .json/.geojson -> GeoJSON, anything else -> CSV.
ParseResult parse_places(const std::filesystem::path& path,
                         CoordinateMode mode);

// In-memory variants used by the file parsers and the tests.
ParseResult parse_places_csv_text(const std::string& text,
                                  CoordinateMode mode);

struct DuplicatePositionWarning {
  std::string first_id;
  std::string second_id;
};

// Checks coordinate invariants (finite everywhere; lon/lat bounds in
// geographic mode), throwing InvalidCoordinate with the offending place_id.
// Exact-duplicate positions are legal and only reported.
std::vector<DuplicatePositionWarning> validate_places(const PlaceSet& places);

// Canonical CSV export; re-parsing yields field-identical PlaceSets.
void write_places_csv(std::ostream& out, std::span<const PlaceSet> sets);
std::string places_to_csv(std::span<const PlaceSet> sets);

}  // namespace remoteness
