#include "remoteness/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "remoteness/csv.hpp"

namespace remoteness {

namespace {

constexpr const char* kGeoHeader = "place_id,name,year,lon,lat,population,county_id";
constexpr const char* kPlanarHeader = "place_id,name,year,x,y,population,county_id";

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoError, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      if (start < text.size()) lines.emplace_back(text.substr(start));
      break;
    }
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

bool coordinates_ok(const PlaceRecord& rec, CoordinateMode mode,
                    std::string* why) {
  if (!std::isfinite(rec.x) || !std::isfinite(rec.y)) {
    *why = "non-finite coordinate";
    return false;
  }
  if (mode == CoordinateMode::Geographic) {
    if (rec.y < -90.0 || rec.y > 90.0) {
      *why = "lat out of [-90, 90]";
      return false;
    }
    if (rec.x < -180.0 || rec.x > 180.0) {
      *why = "lon out of [-180, 180]";
      return false;
    }
  }
  return true;
}

// Shared by the CSV and GeoJSON paths: applies the row-level invariants and
// either appends a record or a rejection, never both.
class SetBuilder {
 public:
  explicit SetBuilder(CoordinateMode mode) : mode_(mode) {}

  void add(PlaceRecord rec, std::size_t row,
           std::vector<RowRejection>& rejections) {
    if (rec.population < 0) {
      rejections.push_back({row, RejectReason::NegativePopulation,
                            "place_id=" + rec.place_id});
      return;
    }
    std::string why;
    if (!coordinates_ok(rec, mode_, &why)) {
      rejections.push_back({row, RejectReason::InvalidCoordinate,
                            "place_id=" + rec.place_id + " " + why});
      return;
    }
    auto& seen = seen_ids_[rec.year];
    if (!seen.insert(rec.place_id).second) {
      rejections.push_back({row, RejectReason::DuplicatePlace,
                            "place_id=" + rec.place_id + " year=" +
                                std::to_string(rec.year)});
      return;
    }
    auto [it, inserted] = sets_.try_emplace(rec.year);
    if (inserted) {
      it->second.year = rec.year;
      it->second.mode = mode_;
    }
    it->second.records.push_back(std::move(rec));
  }

  std::vector<PlaceSet> take() {
    std::vector<PlaceSet> out;
    out.reserve(sets_.size());
    for (auto& [year, set] : sets_) out.push_back(std::move(set));
    return out;
  }

 private:
  CoordinateMode mode_;
  std::map<int, PlaceSet> sets_;  // ascending year
  std::map<int, std::set<std::string>> seen_ids_;
};

}  // namespace

const char* to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::MalformedRow:
      return "MalformedRow";
    case RejectReason::NegativePopulation:
      return "NegativePopulation";
    case RejectReason::InvalidCoordinate:
      return "InvalidCoordinate";
    case RejectReason::DuplicatePlace:
      return "DuplicatePlace";
  }
  return "Unknown";
}

ParseResult parse_places_csv_text(const std::string& text,
                                  CoordinateMode mode) {
  std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) {
    throw Error(Errc::MalformedHeader, "empty file, header required");
  }
  std::string header = lines.front();
  // Tolerate a UTF-8 BOM on the first line.
  if (header.rfind("\xEF\xBB\xBF", 0) == 0) header.erase(0, 3);
  const char* expected =
      mode == CoordinateMode::Geographic ? kGeoHeader : kPlanarHeader;
  if (header != expected) {
    throw Error(Errc::MalformedHeader, "expected '" + std::string(expected) +
                                           "', got '" + header + "'");
  }

  ParseResult result;
  SetBuilder builder(mode);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t row = i + 1;  // 1-based line number
    const std::string& line = lines[i];
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (!fields || fields->size() != 7) {
      result.rejections.push_back(
          {row, RejectReason::MalformedRow, "expected 7 fields"});
      continue;
    }
    auto& f = *fields;
    PlaceRecord rec;
    rec.place_id = f[0];
    rec.name = f[1];
    rec.county_id = f[6];
    if (rec.place_id.empty()) {
      result.rejections.push_back(
          {row, RejectReason::MalformedRow, "empty place_id"});
      continue;
    }
    const auto year = parse_int64(f[2]);
    const auto x = parse_double(f[3]);
    const auto y = parse_double(f[4]);
    const auto population = parse_int64(f[5]);
    if (!year || !x || !y || !population) {
      result.rejections.push_back(
          {row, RejectReason::MalformedRow,
           "unparsable numeric field, place_id=" + rec.place_id});
      continue;
    }
    rec.year = static_cast<int>(*year);
    rec.x = *x;
    rec.y = *y;
    rec.population = *population;
    builder.add(std::move(rec), row, result.rejections);
  }
  result.sets = builder.take();
  return result;
}

ParseResult parse_places_csv(const std::filesystem::path& path,
                             CoordinateMode mode) {
  return parse_places_csv_text(read_file(path), mode);
}

ParseResult parse_places_geojson(const std::filesystem::path& path,
                                 CoordinateMode mode) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& err) {
    throw Error(Errc::MalformedHeader,
                path.string() + ": invalid JSON: " + err.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw Error(Errc::MalformedHeader,
                path.string() + ": not a GeoJSON FeatureCollection");
  }

  ParseResult result;
  SetBuilder builder(mode);
  std::size_t index = 0;
  for (const auto& feature : doc["features"]) {
    const std::size_t row = index++;
    auto reject = [&](RejectReason reason, const std::string& detail) {
      result.rejections.push_back({row, reason, detail});
    };
    if (!feature.is_object() || feature.value("type", "") != "Feature") {
      reject(RejectReason::MalformedRow, "not a Feature");
      continue;
    }
    const auto geom = feature.find("geometry");
    if (geom == feature.end() || !geom->is_object() ||
        geom->value("type", "") != "Point" || !geom->contains("coordinates") ||
        !(*geom)["coordinates"].is_array() ||
        (*geom)["coordinates"].size() < 2 ||
        !(*geom)["coordinates"][0].is_number() ||
        !(*geom)["coordinates"][1].is_number()) {
      reject(RejectReason::MalformedRow, "geometry is not a Point");
      continue;
    }
    const auto props = feature.find("properties");
    if (props == feature.end() || !props->is_object()) {
      reject(RejectReason::MalformedRow, "missing properties");
      continue;
    }
    PlaceRecord rec;
    const auto id = props->find("place_id");
    if (id == props->end() || !id->is_string() ||
        id->get<std::string>().empty()) {
      reject(RejectReason::MalformedRow, "missing place_id");
      continue;
    }
    rec.place_id = id->get<std::string>();
    const auto year = props->find("year");
    const auto population = props->find("population");
    if (year == props->end() || !year->is_number_integer() ||
        population == props->end() || !population->is_number_integer()) {
      reject(RejectReason::MalformedRow,
             "missing year/population, place_id=" + rec.place_id);
      continue;
    }
    rec.year = year->get<int>();
    rec.population = population->get<std::int64_t>();
    if (props->contains("name") && (*props)["name"].is_string()) {
      rec.name = (*props)["name"].get<std::string>();
    }
    if (props->contains("county_id") && (*props)["county_id"].is_string()) {
      rec.county_id = (*props)["county_id"].get<std::string>();
    }
    rec.x = (*geom)["coordinates"][0].get<double>();
    rec.y = (*geom)["coordinates"][1].get<double>();
    builder.add(std::move(rec), row, result.rejections);
  }
  result.sets = builder.take();
  return result;
}

ParseResult parse_places(const std::filesystem::path& path,
                         CoordinateMode mode) {
  const std::string ext = path.extension().string();
  if (ext == ".json" || ext == ".geojson") {
    return parse_places_geojson(path, mode);
  }
  return parse_places_csv(path, mode);
}

std::vector<DuplicatePositionWarning> validate_places(const PlaceSet& places) {
  std::vector<DuplicatePositionWarning> warnings;
  std::map<std::pair<double, double>, std::size_t> first_at;
  for (const auto& rec : places.records) {
    if (rec.year != places.year) {
      throw Error(Errc::InvalidCoordinate,
                  "place_id=" + rec.place_id + " year mismatch");
    }
    if (rec.population < 0) {
      throw Error(Errc::InvalidCoordinate,
                  "place_id=" + rec.place_id + " negative population");
    }
    std::string why;
    if (!coordinates_ok(rec, places.mode, &why)) {
      throw Error(Errc::InvalidCoordinate,
                  "place_id=" + rec.place_id + " " + why);
    }
  }
  for (std::size_t i = 0; i < places.records.size(); ++i) {
    const auto& rec = places.records[i];
    auto [it, inserted] = first_at.try_emplace({rec.x, rec.y}, i);
    if (!inserted) {
      warnings.push_back(
          {places.records[it->second].place_id, rec.place_id});
    }
  }
  return warnings;
}

void write_places_csv(std::ostream& out, std::span<const PlaceSet> sets) {
  const CoordinateMode mode =
      sets.empty() ? CoordinateMode::Geographic : sets.front().mode;
  out << (mode == CoordinateMode::Geographic ? kGeoHeader : kPlanarHeader)
      << '\n';
  for (const auto& set : sets) {
    for (const auto& rec : set.records) {
      out << csv_field(rec.place_id) << ',' << csv_field(rec.name) << ','
          << rec.year << ',' << format_double(rec.x) << ','
          << format_double(rec.y) << ',' << rec.population << ','
          << csv_field(rec.county_id) << '\n';
    }
  }
}

std::string places_to_csv(std::span<const PlaceSet> sets) {
  std::ostringstream out;
  write_places_csv(out, sets);
  return std::move(out).str();
}

}  // namespace remoteness
