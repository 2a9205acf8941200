#include "remoteness/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "helpers.hpp"
#include "oracle.hpp"

using namespace remoteness;

namespace {

RiResult result_of(const std::string& id, int year, double scaled) {
  RiResult res;
  res.place_id = id;
  res.year = year;
  res.raw = scaled;
  res.scaled = scaled;
  return res;
}

// Places + results with given (county, scaled) pairs, ids P0, P1, ...
struct Fixture {
  std::vector<PlaceSet> sets;
  std::vector<RiResult> results;
};

Fixture fixture(const std::vector<std::pair<std::string, double>>& rows) {
  std::vector<PlaceRecord> records;
  std::vector<RiResult> results;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string id = "P" + std::to_string(i);
    records.push_back(
        test::place(id, 2010, static_cast<double>(i), 0.0, 1000,
                    rows[i].first));
    results.push_back(result_of(id, 2010, rows[i].second));
  }
  Fixture f;
  f.sets = {test::place_set(2010, CoordinateMode::Planar, std::move(records))};
  f.results = std::move(results);
  return f;
}

constexpr double kTiedSpearman = 0.9969650916353059;  // 82 / sqrt(6765)

}  // namespace

TEST_CASE("single county owns all the variance") {
  const Fixture f = fixture(
      {{"C1", 0.1}, {"C1", 0.4}, {"C1", 0.9}, {"C1", 0.3}});
  const HeterogeneityReport report = heterogeneity(f.results, f.sets);
  CHECK(report.counties.size() == 1);
  CHECK(report.variance.within_share == 1.0);
  CHECK(report.variance.between == 0.0);
}

TEST_CASE("singleton counties have zero within-county variance") {
  const Fixture f = fixture(
      {{"C1", 0.1}, {"C2", 0.4}, {"C3", 0.9}, {"C4", 0.3}});
  const HeterogeneityReport report = heterogeneity(f.results, f.sets);
  CHECK(report.counties.size() == 4);
  CHECK(report.variance.within == 0.0);
  CHECK(report.variance.within_share == 0.0);
  for (const auto& county : report.counties) {
    CHECK(county.count == 1);
    CHECK(county.stddev == 0.0);
    CHECK(county.range == 0.0);
  }
}

TEST_CASE("two-county fixture matches the hand-computed decomposition") {
  const Fixture f = fixture(
      {{"C1", 0.0}, {"C1", 1.0}, {"C2", 0.4}, {"C2", 0.6}});
  const HeterogeneityReport report = heterogeneity(f.results, f.sets);
  REQUIRE(report.counties.size() == 2);
  CHECK(report.counties[0].range == 1.0);
  CHECK(report.counties[1].range == doctest::Approx(0.2).epsilon(1e-12));
  // Group means are both 0.5 = grand mean: everything is within-county.
  // SS_within = (0.25 + 0.25) + (0.01 + 0.01) = 0.52.
  CHECK(std::abs(report.variance.within - 0.52) <= 1e-12);
  CHECK(std::abs(report.variance.between) <= 1e-12);
  CHECK(std::abs(report.variance.total - 0.52) <= 1e-12);
  CHECK(report.variance.within_share == doctest::Approx(1.0).epsilon(1e-12));

  const oracle::AnovaSums sums =
      oracle::direct_anova({{0.0, 1.0}, {0.4, 0.6}});
  CHECK(std::abs(report.variance.within - sums.within) <= 1e-15);
  CHECK(std::abs(report.variance.between - sums.between) <= 1e-15);
  CHECK(std::abs(report.variance.total - sums.total) <= 1e-15);
}

TEST_CASE("variance decomposition identity holds on random groupings") {
  std::mt19937_64 rng(31);
  auto unit = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 120;
    const std::size_t counties = 1 + rng() % 12;
    std::vector<std::pair<std::string, double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      rows.emplace_back("C" + std::to_string(rng() % counties), unit());
    }
    const Fixture f = fixture(rows);
    const HeterogeneityReport report = heterogeneity(f.results, f.sets);
    const double sum = report.variance.within + report.variance.between;
    if (report.variance.total > 0.0) {
      CHECK(std::abs(sum - report.variance.total) <=
            1e-9 * report.variance.total);
      CHECK(report.variance.within_share >= 0.0);
      CHECK(report.variance.within_share <= 1.0);
    }
  }
}

TEST_CASE("report is independent of results ordering") {
  std::mt19937_64 rng(32);
  std::vector<std::pair<std::string, double>> rows;
  for (int i = 0; i < 60; ++i) {
    rows.emplace_back("C" + std::to_string(i % 7),
                      static_cast<double>(rng() >> 11) * 0x1.0p-53);
  }
  const Fixture f = fixture(rows);
  const HeterogeneityReport base = heterogeneity(f.results, f.sets);
  std::vector<RiResult> shuffled = f.results;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const HeterogeneityReport permuted = heterogeneity(shuffled, f.sets);
  CHECK(base.variance.within == permuted.variance.within);
  CHECK(base.variance.between == permuted.variance.between);
  CHECK(base.variance.total == permuted.variance.total);
  REQUIRE(base.counties.size() == permuted.counties.size());
  for (std::size_t i = 0; i < base.counties.size(); ++i) {
    CHECK(base.counties[i].county_id == permuted.counties[i].county_id);
    CHECK(base.counties[i].mean == permuted.counties[i].mean);
    CHECK(base.counties[i].stddev == permuted.counties[i].stddev);
  }
}

TEST_CASE("places without a county are excluded and counted") {
  const Fixture f = fixture(
      {{"C1", 0.1}, {"", 0.5}, {"C1", 0.9}, {"", 0.2}});
  const HeterogeneityReport report = heterogeneity(f.results, f.sets);
  CHECK(report.places_total == 4);
  CHECK(report.places_with_county == 2);
  CHECK(report.excluded_no_county == 2);
}

TEST_CASE("all-empty county ids raise NoCountyIds") {
  const Fixture f = fixture({{"", 0.1}, {"", 0.5}});
  try {
    heterogeneity(f.results, f.sets);
    FAIL("expected NoCountyIds");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::NoCountyIds);
  }
}

TEST_CASE("spearman: comonotone 1, antitone -1") {
  const std::vector<double> x = {0.1, 0.3, 0.5, 0.7, 0.9};
  const std::vector<double> up = {1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> down = {9.0, 7.0, 5.0, 3.0, 1.0};
  CHECK(*spearman(x, up) == 1.0);
  CHECK(*spearman(x, down) == -1.0);
}

TEST_CASE("spearman tied fixture matches the average-rank formula") {
  // Ten places, strictly increasing index, one tied code pair.
  std::vector<double> ri;
  for (int i = 1; i <= 10; ++i) ri.push_back(0.1 * i);
  const std::vector<double> codes = {1, 2, 3, 4, 5, 5, 6, 7, 8, 9};
  const auto coefficient = spearman(ri, codes);
  REQUIRE(coefficient.has_value());
  CHECK(std::abs(*coefficient - kTiedSpearman) <= 1e-15);
  const auto reference = oracle::counting_spearman(ri, codes);
  REQUIRE(reference.has_value());
  CHECK(std::abs(*coefficient - *reference) <= 1e-15);
}

TEST_CASE("spearman equals the counting oracle on random tied data") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) {
      x.push_back(static_cast<double>(rng() % 12));  // heavy ties
      y.push_back(static_cast<double>(rng() % 6));
    }
    const auto mine = spearman(x, y);
    const auto reference = oracle::counting_spearman(x, y);
    CHECK(mine.has_value() == reference.has_value());
    if (mine && reference) {
      CHECK(std::abs(*mine - *reference) <= 1e-12);
    }
  }
}

TEST_CASE("spearman is invariant under strictly increasing transforms") {
  std::mt19937_64 rng(34);
  auto unit = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng() % 30;
    std::vector<double> x, y, fx, gy;
    for (std::size_t i = 0; i < n; ++i) {
      x.push_back(unit() * 10.0);
      y.push_back(unit() * 10.0);
      fx.push_back(std::exp(x.back()));       // strictly increasing
      gy.push_back(2.0 * y.back() + 1.0);     // strictly increasing
    }
    const auto base = spearman(x, y);
    const auto transformed = spearman(fx, gy);
    REQUIRE(base.has_value() == transformed.has_value());
    if (base) {
      CHECK(*base == *transformed);  // identical ranks, identical bits
    }
  }
}

TEST_CASE("code_agreement joins places to codes and counts exclusions") {
  const Fixture f = fixture({{"C1", 0.1},
                             {"C2", 0.3},
                             {"C3", 0.5},
                             {"", 0.6},
                             {"C9", 0.7},   // no code in the table
                             {"C4", 0.9}});
  CountyCodeTable table;
  table.label = "rurality";
  table.codes = {{"C1", 1}, {"C2", 2}, {"C3", 3}, {"C4", 4}};
  const SpearmanResult agreement = code_agreement(f.results, f.sets, table);
  CHECK(agreement.label == "rurality");
  CHECK(agreement.matched_places == 4);
  CHECK(agreement.excluded_no_code == 2);
  REQUIRE(agreement.coefficient.has_value());
  CHECK(*agreement.coefficient == 1.0);  // codes rise with the index
}

TEST_CASE("fewer than two matches raise InsufficientOverlap") {
  const Fixture f = fixture({{"C1", 0.1}, {"C2", 0.3}});
  CountyCodeTable table;
  table.codes = {{"C1", 1}};
  try {
    code_agreement(f.results, f.sets, table);
    FAIL("expected InsufficientOverlap");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::InsufficientOverlap);
  }
}

TEST_CASE("constant codes make the coefficient undefined, not an error") {
  const Fixture f = fixture({{"C1", 0.1}, {"C2", 0.3}, {"C3", 0.5}});
  CountyCodeTable table;
  table.codes = {{"C1", 4}, {"C2", 4}, {"C3", 4}};
  const SpearmanResult agreement = code_agreement(f.results, f.sets, table);
  CHECK(agreement.matched_places == 3);
  CHECK_FALSE(agreement.coefficient.has_value());
}

TEST_CASE("county code table parsing") {
  test::TempDir dir;
  test::write_file(dir.file("codes.csv"),
                   "county_id,code\nC1,3\nC2,1\nC3,9\n");
  const CountyCodeTable table =
      parse_county_codes(dir.file("codes.csv"), "rucc");
  CHECK(table.label == "rucc");
  CHECK(table.codes.size() == 3);
  CHECK(table.codes.at("C3") == 9);

  test::write_file(dir.file("dup.csv"), "county_id,code\nC1,3\nC1,4\n");
  CHECK_THROWS_AS(parse_county_codes(dir.file("dup.csv"), "x"), Error);
  test::write_file(dir.file("bad_header.csv"), "county,code\nC1,3\n");
  CHECK_THROWS_AS(parse_county_codes(dir.file("bad_header.csv"), "x"), Error);
}

TEST_CASE("report json carries the variance block and spearman") {
  Fixture f = fixture({{"C1", 0.0}, {"C1", 1.0}, {"C2", 0.4}, {"C2", 0.6}});
  HeterogeneityReport report = heterogeneity(f.results, f.sets);
  CountyCodeTable table;
  table.label = "codes";
  table.codes = {{"C1", 1}, {"C2", 2}};
  report.spearman = code_agreement(f.results, f.sets, table);
  const std::string json = report_to_json(report);
  CHECK(json.find("\"within_share\"") != std::string::npos);
  CHECK(json.find("\"spearman\"") != std::string::npos);
  CHECK(json.find("\"counties\"") != std::string::npos);
  const std::string table_text = report_to_table(report);
  CHECK(table_text.find("C1") != std::string::npos);
  CHECK(table_text.find("within share") != std::string::npos);
}
