#include "remoteness/ingest.hpp"

#include <algorithm>
#include <random>

#include <doctest.h>

#include "remoteness/generate.hpp"
#include "helpers.hpp"

using namespace remoteness;

namespace {

const std::string kGeoHeader =
    "place_id,name,year,lon,lat,population,county_id\n";

}  // namespace

TEST_CASE("csv rows partition by year") {
  const std::string csv = kGeoHeader +
                          "A,Alpha,2000,-100.0,40.0,12000,C1\n"
                          "B,Beta,2010,-101.0,41.0,500,C1\n"
                          "C,,2000,-102.0,42.0,30000,\n";
  const ParseResult result =
      parse_places_csv_text(csv, CoordinateMode::Geographic);
  REQUIRE(result.rejections.empty());
  REQUIRE(result.sets.size() == 2);
  CHECK(result.sets[0].year == 2000);
  CHECK(result.sets[0].size() == 2);
  CHECK(result.sets[0].records[0].place_id == "A");
  CHECK(result.sets[0].records[1].place_id == "C");
  CHECK(result.sets[1].year == 2010);
  CHECK(result.sets[1].size() == 1);
  CHECK(result.sets[1].records[0].name == "Beta");
  CHECK(result.sets[0].records[1].county_id.empty());
}

TEST_CASE("negative population rejected, others retained") {
  const std::string csv = kGeoHeader +
                          "A,,2000,-100.0,40.0,12000,\n"
                          "B,,2000,-101.0,41.0,-5,\n"
                          "C,,2000,-102.0,42.0,0,\n";
  const ParseResult result =
      parse_places_csv_text(csv, CoordinateMode::Geographic);
  REQUIRE(result.rejections.size() == 1);
  CHECK(result.rejections[0].row == 3);
  CHECK(result.rejections[0].reason == RejectReason::NegativePopulation);
  REQUIRE(result.sets.size() == 1);
  CHECK(result.sets[0].size() == 2);  // population 0 is legal at ingest
}

TEST_CASE("header must match the coordinate mode") {
  CHECK_THROWS_AS(
      parse_places_csv_text("id,name\nA,x\n", CoordinateMode::Geographic),
      Error);
  const std::string planar = "place_id,name,year,x,y,population,county_id\n";
  CHECK_THROWS_AS(parse_places_csv_text(planar, CoordinateMode::Geographic),
                  Error);
  CHECK_NOTHROW(parse_places_csv_text(planar, CoordinateMode::Planar));
  try {
    parse_places_csv_text("", CoordinateMode::Geographic);
    FAIL("expected MalformedHeader");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::MalformedHeader);
  }
}

TEST_CASE("duplicate place id within a year is rejected") {
  const std::string csv = kGeoHeader +
                          "A,,2000,-100.0,40.0,12000,\n"
                          "A,,2000,-101.0,41.0,999,\n"
                          "A,,2010,-100.0,40.0,13000,\n";
  const ParseResult result =
      parse_places_csv_text(csv, CoordinateMode::Geographic);
  REQUIRE(result.rejections.size() == 1);
  CHECK(result.rejections[0].reason == RejectReason::DuplicatePlace);
  CHECK(result.rejections[0].row == 3);
  // First occurrence kept; the same id in another year is fine.
  REQUIRE(result.sets.size() == 2);
  CHECK(result.sets[0].records[0].population == 12000);
  CHECK(result.sets[1].size() == 1);
}

TEST_CASE("coordinate bound and finiteness rejections") {
  const std::string csv = kGeoHeader +
                          "A,,2000,-100.0,91.0,1000,\n"
                          "B,,2000,-200.0,40.0,1000,\n"
                          "C,,2000,nan,40.0,1000,\n"
                          "D,,2000,-100.0,40.0,1000,\n";
  const ParseResult result =
      parse_places_csv_text(csv, CoordinateMode::Geographic);
  REQUIRE(result.rejections.size() == 3);
  for (const auto& rej : result.rejections) {
    CHECK(rej.reason == RejectReason::InvalidCoordinate);
  }
  REQUIRE(result.sets.size() == 1);
  CHECK(result.sets[0].records[0].place_id == "D");

  const std::string planar = "place_id,name,year,x,y,population,county_id\n"
                             "A,,2000,nan,0.0,1000,\n";
  const ParseResult planar_result =
      parse_places_csv_text(planar, CoordinateMode::Planar);
  REQUIRE(planar_result.rejections.size() == 1);
  CHECK(planar_result.rejections[0].reason == RejectReason::InvalidCoordinate);
}

TEST_CASE("malformed rows are reported with row numbers") {
  const std::string csv = kGeoHeader +
                          "A,,2000,-100.0,40.0,12000\n"   // 6 fields
                          ",,2000,-100.0,40.0,12000,\n"   // empty id
                          "B,,20x0,-100.0,40.0,12000,\n"  // bad year
                          "C,,2000,-100.0,40.0,12.5,\n"   // float population
                          "D,,2000,-100.0,40.0,12000,\n";
  const ParseResult result =
      parse_places_csv_text(csv, CoordinateMode::Geographic);
  REQUIRE(result.rejections.size() == 4);
  CHECK(result.rejections[0].row == 2);
  CHECK(result.rejections[3].row == 5);
  for (const auto& rej : result.rejections) {
    CHECK(rej.reason == RejectReason::MalformedRow);
  }
  REQUIRE(result.sets.size() == 1);
  REQUIRE(result.sets[0].size() == 1);
  CHECK(result.sets[0].records[0].place_id == "D");
}

TEST_CASE("validate_places flags duplicate positions without rejecting") {
  PlaceSet set = test::place_set(
      2000, CoordinateMode::Geographic,
      {test::place("A", 2000, -100.0, 40.0, 1000),
       test::place("B", 2000, -100.0, 40.0, 2000),
       test::place("C", 2000, -101.0, 40.0, 3000)});
  const auto warnings = validate_places(set);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].first_id == "A");
  CHECK(warnings[0].second_id == "B");

  set.records[2].y = 91.0;
  CHECK_THROWS_AS(validate_places(set), Error);
}

TEST_CASE("csv round trip is field-identical") {
  const std::string csv =
      kGeoHeader +
      "A,\"Town, The\",2000,-100.25,40.125,12000,C001\n"
      "B,\"Quote \"\"Q\"\" Town\",2000,-101.5,41.0,0,\n"
      "C,,2010,-102.875,42.0625,999999,C002\n";
  const ParseResult first =
      parse_places_csv_text(csv, CoordinateMode::Geographic);
  REQUIRE(first.rejections.empty());
  const std::string exported = places_to_csv(first.sets);
  const ParseResult second =
      parse_places_csv_text(exported, CoordinateMode::Geographic);
  REQUIRE(second.sets.size() == first.sets.size());
  for (std::size_t i = 0; i < first.sets.size(); ++i) {
    CHECK(first.sets[i].records == second.sets[i].records);
  }
}

TEST_CASE("round trip preserves full double precision") {
  PlaceSet set = test::place_set(
      2000, CoordinateMode::Planar,
      {test::place("A", 2000, 0.1 + 0.2, 1.0 / 3.0, 1),
       test::place("B", 2000, 1e-307, 12345678.987654321, 2)});
  const std::vector<PlaceSet> sets = {set};
  const ParseResult parsed =
      parse_places_csv_text(places_to_csv(sets), CoordinateMode::Planar);
  REQUIRE(parsed.sets.size() == 1);
  CHECK(parsed.sets[0].records == set.records);
}

TEST_CASE("parsing is order-stable under row permutation") {
  std::mt19937 rng(99);
  std::vector<std::string> rows;
  for (int i = 0; i < 50; ++i) {
    const int year = 2000 + 10 * (i % 3);
    rows.push_back("P" + std::to_string(i) + ",," + std::to_string(year) +
                   ",-" + std::to_string(100.0 + i) + ",40.0," +
                   std::to_string(100 * i) + ",\n");
  }
  auto parse_rows = [&](const std::vector<std::string>& ordered) {
    std::string csv = kGeoHeader;
    for (const auto& row : ordered) csv += row;
    return parse_places_csv_text(csv, CoordinateMode::Geographic);
  };
  const ParseResult base = parse_rows(rows);
  std::vector<std::string> shuffled = rows;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const ParseResult permuted = parse_rows(shuffled);

  // Same multiset of records overall.
  std::size_t base_total = 0, permuted_total = 0;
  for (const auto& s : base.sets) base_total += s.size();
  for (const auto& s : permuted.sets) permuted_total += s.size();
  CHECK(base_total == rows.size());
  CHECK(permuted_total == rows.size());

  // Per-year order matches file order of the shuffled input.
  for (const auto& set : permuted.sets) {
    std::vector<std::string> expected;
    for (const auto& row : shuffled) {
      const auto first_comma = row.find(',');
      const std::string id = row.substr(0, first_comma);
      const std::string year_field = row.substr(first_comma + 2);
      const int year = std::stoi(year_field.substr(0, year_field.find(',')));
      if (year == set.year) expected.push_back(id);
    }
    REQUIRE(expected.size() == set.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(set.records[i].place_id == expected[i]);
    }
  }
}

TEST_CASE("generator output is byte-stable and parses completely") {
  GenerateOptions options;
  options.seed = 7;
  options.count = 1000;
  const PlaceSet a = generate_places(options);
  const PlaceSet b = generate_places(options);
  const std::vector<PlaceSet> sets_a = {a};
  const std::vector<PlaceSet> sets_b = {b};
  const std::string csv_a = places_to_csv(sets_a);
  CHECK(csv_a == places_to_csv(sets_b));

  const ParseResult parsed =
      parse_places_csv_text(csv_a, CoordinateMode::Geographic);
  CHECK(parsed.rejections.empty());
  REQUIRE(parsed.sets.size() == 1);
  CHECK(parsed.sets[0].size() == 1000);
  CHECK(parsed.sets[0].records == a.records);
}

TEST_CASE("geojson ingest accepts points and reports bad features") {
  test::TempDir dir;
  const std::string geojson = R"({
    "type": "FeatureCollection",
    "features": [
      {"type": "Feature",
       "geometry": {"type": "Point", "coordinates": [-100.5, 40.25]},
       "properties": {"place_id": "A", "year": 2000, "population": 1500,
                      "name": "Alpha", "county_id": "C1"}},
      {"type": "Feature",
       "geometry": {"type": "LineString", "coordinates": [[0,0],[1,1]]},
       "properties": {"place_id": "B", "year": 2000, "population": 10}},
      {"type": "Feature",
       "geometry": {"type": "Point", "coordinates": [-101.0, 41.0]},
       "properties": {"place_id": "C", "year": 2000, "population": 22000}}
    ]
  })";
  test::write_file(dir.file("places.geojson"), geojson);
  const ParseResult result =
      parse_places(dir.file("places.geojson"), CoordinateMode::Geographic);
  REQUIRE(result.rejections.size() == 1);
  CHECK(result.rejections[0].row == 1);  // feature index
  REQUIRE(result.sets.size() == 1);
  REQUIRE(result.sets[0].size() == 2);
  CHECK(result.sets[0].records[0].name == "Alpha");
  CHECK(result.sets[0].records[1].place_id == "C");

  test::write_file(dir.file("bad.geojson"), R"({"type": "Polygon"})");
  CHECK_THROWS_AS(
      parse_places(dir.file("bad.geojson"), CoordinateMode::Geographic),
      Error);
}

TEST_CASE("missing file raises IoError") {
  try {
    parse_places("/nonexistent/nowhere.csv", CoordinateMode::Geographic);
    FAIL("expected IoError");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::IoError);
  }
}
