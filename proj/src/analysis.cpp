#include "remoteness/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "remoteness/csv.hpp"

namespace remoteness {

CountyCodeTable parse_county_codes(const std::filesystem::path& path,
                                   const std::string& label) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::IoError, "cannot open " + path.string());
  }
  CountyCodeTable table;
  table.label = label;
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::MalformedHeader, "empty county-code file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (line != "county_id,code") {
    throw Error(Errc::MalformedHeader,
                "expected 'county_id,code', got '" + line + "'");
  }
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (!fields || fields->size() != 2) {
      throw Error(Errc::InvalidCodes,
                  "row " + std::to_string(row) + ": expected 2 fields");
    }
    const auto code = parse_int64((*fields)[1]);
    if ((*fields)[0].empty() || !code) {
      throw Error(Errc::InvalidCodes,
                  "row " + std::to_string(row) + ": bad county_id or code");
    }
    if (!table.codes.emplace((*fields)[0], static_cast<int>(*code)).second) {
      throw Error(Errc::InvalidCodes,
                  "duplicate county_id '" + (*fields)[0] + "'");
    }
  }
  if (table.codes.empty()) {
    throw Error(Errc::InvalidCodes, "county-code table has no rows");
  }
  return table;
}

namespace {

// Average ranks (1-based); ties share the mean of the ranks they occupy.
std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return a < b;
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

// (place_id, year) -> county_id over all supplied sets.
std::map<std::pair<int, std::string>, const std::string*> county_lookup(
    std::span<const PlaceSet> sets) {
  std::map<std::pair<int, std::string>, const std::string*> lookup;
  for (const auto& set : sets) {
    for (const auto& rec : set.records) {
      lookup.try_emplace({set.year, rec.place_id}, &rec.county_id);
    }
  }
  return lookup;
}

}  // namespace

std::optional<double> spearman(std::span<const double> a,
                               std::span<const double> b) {
  const std::size_t n = a.size();
  if (n != b.size() || n < 2) return std::nullopt;
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  const double mean = 0.5 * static_cast<double>(n + 1);
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) return std::nullopt;
  return cov / std::sqrt(var_a * var_b);
}

HeterogeneityReport heterogeneity(std::span<const RiResult> results,
                                  std::span<const PlaceSet> sets) {
  const auto lookup = county_lookup(sets);
  HeterogeneityReport report;
  report.places_total = results.size();

  std::map<std::string, std::vector<double>> by_county;
  for (const auto& res : results) {
    const auto it = lookup.find({res.year, res.place_id});
    const std::string* county =
        it != lookup.end() && !it->second->empty() ? it->second : nullptr;
    if (!county) {
      ++report.excluded_no_county;
      continue;
    }
    ++report.places_with_county;
    by_county[*county].push_back(res.scaled);
  }
  if (report.places_with_county == 0) {
    throw Error(Errc::NoCountyIds, "no place carries a county_id");
  }
  // Canonical accumulation order makes the report independent of the
  // ordering of the results, bit for bit.
  for (auto& [county, values] : by_county) {
    std::sort(values.begin(), values.end());
  }

  double grand_sum = 0.0;
  for (const auto& [county, values] : by_county) {
    for (const double v : values) grand_sum += v;
  }
  const double grand_mean =
      grand_sum / static_cast<double>(report.places_with_county);

  double ss_within = 0.0;
  double ss_between = 0.0;
  double ss_total = 0.0;
  for (const auto& [county, values] : by_county) {
    CountyStats stats;
    stats.county_id = county;
    stats.count = values.size();
    double sum = 0.0;
    stats.min = values.front();
    stats.max = values.front();
    for (const double v : values) {
      sum += v;
      stats.min = std::min(stats.min, v);
      stats.max = std::max(stats.max, v);
    }
    stats.mean = sum / static_cast<double>(values.size());
    stats.range = stats.max - stats.min;
    double within = 0.0;
    for (const double v : values) {
      within += (v - stats.mean) * (v - stats.mean);
      ss_total += (v - grand_mean) * (v - grand_mean);
    }
    stats.stddev = std::sqrt(within / static_cast<double>(values.size()));
    ss_within += within;
    ss_between += static_cast<double>(values.size()) *
                  (stats.mean - grand_mean) * (stats.mean - grand_mean);
    report.counties.push_back(std::move(stats));
  }
  report.variance.total = ss_total;
  report.variance.within = ss_within;
  report.variance.between = ss_between;
  report.variance.within_share = ss_total > 0.0 ? ss_within / ss_total : 0.0;
  return report;
}

SpearmanResult code_agreement(std::span<const RiResult> results,
                              std::span<const PlaceSet> sets,
                              const CountyCodeTable& codes) {
  const auto lookup = county_lookup(sets);
  SpearmanResult out;
  out.label = codes.label;
  std::vector<std::pair<double, double>> pairs;
  for (const auto& res : results) {
    const auto it = lookup.find({res.year, res.place_id});
    if (it == lookup.end() || it->second->empty()) {
      ++out.excluded_no_code;
      continue;
    }
    const auto code_it = codes.codes.find(*it->second);
    if (code_it == codes.codes.end()) {
      ++out.excluded_no_code;
      continue;
    }
    pairs.emplace_back(res.scaled, static_cast<double>(code_it->second));
  }
  // Canonical order: the coefficient must not depend on results ordering.
  std::sort(pairs.begin(), pairs.end());
  std::vector<double> ri;
  std::vector<double> code;
  ri.reserve(pairs.size());
  code.reserve(pairs.size());
  for (const auto& [r, c] : pairs) {
    ri.push_back(r);
    code.push_back(c);
  }
  out.matched_places = ri.size();
  if (out.matched_places < 2) {
    throw Error(Errc::InsufficientOverlap,
                "only " + std::to_string(out.matched_places) +
                    " place(s) match the county-code table");
  }
  out.coefficient = spearman(ri, code);
  return out;
}

std::string report_to_json(const HeterogeneityReport& report) {
  nlohmann::ordered_json doc;
  doc["places_total"] = report.places_total;
  doc["places_with_county"] = report.places_with_county;
  doc["excluded_no_county"] = report.excluded_no_county;
  nlohmann::ordered_json counties = nlohmann::ordered_json::array();
  for (const auto& c : report.counties) {
    counties.push_back({{"county_id", c.county_id},
                        {"count", c.count},
                        {"mean", c.mean},
                        {"min", c.min},
                        {"max", c.max},
                        {"range", c.range},
                        {"stddev", c.stddev}});
  }
  doc["counties"] = std::move(counties);
  doc["variance"] = {{"total", report.variance.total},
                     {"within", report.variance.within},
                     {"between", report.variance.between},
                     {"within_share", report.variance.within_share}};
  if (report.spearman) {
    nlohmann::ordered_json sp;
    sp["label"] = report.spearman->label;
    if (report.spearman->coefficient) {
      sp["coefficient"] = *report.spearman->coefficient;
    } else {
      sp["coefficient"] = nullptr;
    }
    sp["matched_places"] = report.spearman->matched_places;
    sp["excluded_no_code"] = report.spearman->excluded_no_code;
    doc["spearman"] = std::move(sp);
  }
  return doc.dump(2) + "\n";
}

std::string report_to_table(const HeterogeneityReport& report) {
  std::ostringstream out;
  out << "county        count       mean        min        max      range     stddev\n";
  auto num = [](double v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(4);
    s << v;
    return s.str();
  };
  for (const auto& c : report.counties) {
    out << c.county_id;
    for (std::size_t i = c.county_id.size(); i < 10; ++i) out << ' ';
    std::string count = std::to_string(c.count);
    for (std::size_t i = count.size(); i < 8; ++i) out << ' ';
    out << count;
    for (const double v : {c.mean, c.min, c.max, c.range, c.stddev}) {
      std::string s = num(v);
      for (std::size_t i = s.size(); i < 11; ++i) out << ' ';
      out << s;
    }
    out << '\n';
  }
  out << "places: " << report.places_total << " total, "
      << report.places_with_county << " with county, "
      << report.excluded_no_county << " excluded\n";
  out << "variance: total " << num(report.variance.total) << ", within "
      << num(report.variance.within) << ", between "
      << num(report.variance.between) << ", within share "
      << num(report.variance.within_share) << "\n";
  if (report.spearman) {
    out << "spearman (" << report.spearman->label << "): ";
    if (report.spearman->coefficient) {
      out << num(*report.spearman->coefficient);
    } else {
      out << "undefined (constant input)";
    }
    out << " over " << report.spearman->matched_places << " places\n";
  }
  return std::move(out).str();
}

}  // namespace remoteness
