// Command-line frontend: compute, analyze, generate.

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "remoteness/analysis.hpp"
#include "remoteness/config.hpp"
#include "remoteness/csv.hpp"
#include "remoteness/generate.hpp"
#include "remoteness/index.hpp"
#include "remoteness/ingest.hpp"
#include "remoteness/version.hpp"

namespace fs = std::filesystem;
using namespace remoteness;

namespace {

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::IoError:
      return 3;
    case Errc::ConfigError:
      return 4;
    case Errc::MalformedHeader:
      return 5;
    case Errc::InvalidCoordinate:
      return 6;
    case Errc::MissingCategory:
      return 7;
    case Errc::NoCountyIds:
      return 8;
    case Errc::InsufficientOverlap:
      return 9;
    case Errc::InvalidCodes:
      return 10;
    case Errc::EmptyInput:
      return 11;
  }
  return 12;
}

// One machine-parsable line on stderr: "error: <Code>: <detail>"
int fail(Errc code, const std::string& detail) {
  std::cerr << "error: " << to_string(code) << ": " << detail << "\n";
  return exit_code_for(code);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects output files during a run; nothing reaches its final name unless
// every write succeeds, so failed runs leave no partial outputs behind.
class OutputSet {
 public:
  ~OutputSet() {
    for (const auto& tmp : pending_) {
      std::error_code ec;
      fs::remove(tmp, ec);
    }
  }

  void write(const fs::path& target, const std::string& content) {
    const fs::path tmp = target.string() + ".tmp";
    std::ofstream out(tmp, std::ios::binary);
    if (!out || !(out << content) || !out.flush()) {
      throw Error(Errc::IoError, "cannot write " + tmp.string());
    }
    out.close();
    pending_.push_back(tmp);
    targets_.push_back(target);
  }

  void commit() {
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      std::error_code ec;
      fs::rename(pending_[i], targets_[i], ec);
      if (ec) {
        throw Error(Errc::IoError, "cannot rename " + pending_[i].string() +
                                       " to " + targets_[i].string());
      }
    }
    pending_.clear();
    targets_.clear();
  }

 private:
  std::vector<fs::path> pending_;
  std::vector<fs::path> targets_;
};

struct ComputeArgs {
  std::vector<std::string> inputs;
  std::string coord_mode;
  std::string weights;
  std::string scaling;
  std::string fallback;
  double log_base = 0.0;
  std::int64_t population_floor = 0;
  double distance_floor_km = 0.0;
  std::string out;
  std::string geojson;
  std::string debug_distances;
  std::string config_path;
};

struct InputDigest {
  std::string path;
  std::size_t bytes = 0;
  std::string fnv1a64;
};

std::string read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoError, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

CoordinateMode parse_mode(const std::string& text) {
  if (text == "geographic") return CoordinateMode::Geographic;
  if (text == "planar") return CoordinateMode::Planar;
  throw Error(Errc::ConfigError, "unknown coord-mode '" + text + "'");
}

void report_rejections(const std::vector<RowRejection>& rejections,
                       const std::string& file) {
  constexpr std::size_t kMaxLines = 20;
  for (std::size_t i = 0; i < rejections.size() && i < kMaxLines; ++i) {
    const auto& r = rejections[i];
    std::cerr << "warning: " << file << " row " << r.row << ": "
              << to_string(r.reason) << " (" << r.detail << ")\n";
  }
  if (rejections.size() > kMaxLines) {
    std::cerr << "warning: " << file << ": "
              << rejections.size() - kMaxLines << " more rows rejected\n";
  }
}

std::string results_csv(const std::vector<PlaceSet>& sets,
                        const ComputeOutput& output) {
  std::ostringstream out;
  out << "place_id,year,population,d1_km,d2_km,d3_km,d4_km,d5_km,raw_ri,ri,"
         "flags\n";
  for (std::size_t y = 0; y < output.years.size(); ++y) {
    const auto& block = output.years[y];
    const auto& records = sets[y].records;
    for (std::size_t i = 0; i < block.results.size(); ++i) {
      const auto& res = block.results[i];
      const auto& dv = block.distances[i];
      out << csv_field(res.place_id) << ',' << res.year << ','
          << records[i].population;
      for (const double km : dv.km) out << ',' << format_double(km);
      out << ',' << format_double(res.raw) << ',' << format_double(res.scaled)
          << ',' << flags_to_string(res.flags) << '\n';
    }
  }
  return std::move(out).str();
}

std::string debug_distances_csv(const ComputeOutput& output) {
  std::ostringstream out;
  out << "place_id,pc,distance_km,nearest_id,provenance\n";
  for (const auto& block : output.years) {
    for (const auto& dv : block.distances) {
      for (std::size_t c = 0; c < kNumCategories; ++c) {
        out << csv_field(dv.place_id) << ',' << c + 1 << ','
            << format_double(dv.km[c]) << ',' << csv_field(dv.nearest_id[c])
            << ',' << to_string(dv.provenance[c]) << '\n';
      }
    }
  }
  return std::move(out).str();
}

std::string results_geojson(const std::vector<PlaceSet>& sets,
                            const ComputeOutput& output) {
  nlohmann::ordered_json doc;
  doc["type"] = "FeatureCollection";
  auto features = nlohmann::ordered_json::array();
  for (std::size_t y = 0; y < output.years.size(); ++y) {
    const auto& block = output.years[y];
    const auto& records = sets[y].records;
    for (std::size_t i = 0; i < block.results.size(); ++i) {
      const auto& res = block.results[i];
      const auto& rec = records[i];
      nlohmann::ordered_json feature;
      feature["type"] = "Feature";
      feature["geometry"] = {{"type", "Point"},
                             {"coordinates", {rec.x, rec.y}}};
      nlohmann::ordered_json props;
      props["place_id"] = rec.place_id;
      props["name"] = rec.name;
      props["year"] = rec.year;
      props["population"] = rec.population;
      props["county_id"] = rec.county_id;
      props["raw_ri"] = res.raw;
      props["ri"] = res.scaled;
      props["flags"] = flags_to_string(res.flags);
      feature["properties"] = std::move(props);
      features.push_back(std::move(feature));
    }
  }
  doc["features"] = std::move(features);
  return doc.dump(2) + "\n";
}

int cmd_compute(const ComputeArgs& args, const CLI::App& cmd) {
  // Config file first, explicit flags on top.
  RunConfig config;
  if (!args.config_path.empty()) {
    config = load_run_config(args.config_path);
  }
  if (cmd.count("--weights") > 0) {
    if (args.weights == "equal") {
      config.weights = WeightScheme::equal();
    } else if (args.weights == "ascending") {
      config.weights = WeightScheme::ascending();
    } else {
      config.weights = load_weight_scheme(args.weights);
    }
  }
  if (cmd.count("--scaling") > 0) {
    if (args.scaling == "per-year") {
      config.scaling = ScalingMode::PerYear;
    } else if (args.scaling == "global") {
      config.scaling = ScalingMode::Global;
    } else {
      throw Error(Errc::ConfigError, "unknown scaling '" + args.scaling + "'");
    }
  }
  if (cmd.count("--fallback") > 0) {
    if (args.fallback == "error") {
      config.fallback = FallbackPolicy::Error;
    } else if (args.fallback == "diagonal") {
      config.fallback = FallbackPolicy::Diagonal;
    } else {
      throw Error(Errc::ConfigError,
                  "unknown fallback '" + args.fallback + "'");
    }
  }
  if (cmd.count("--log-base") > 0) config.log_base = args.log_base;
  if (cmd.count("--population-floor") > 0) {
    config.population_floor = args.population_floor;
  }
  if (cmd.count("--distance-floor-km") > 0) {
    config.distance_floor_km = args.distance_floor_km;
  }

  CoordinateMode mode;
  if (cmd.count("--coord-mode") > 0) {
    mode = parse_mode(args.coord_mode);
    config.metric = metric_for(mode);
  } else {
    mode = config.metric == DistanceMetric::Haversine
               ? CoordinateMode::Geographic
               : CoordinateMode::Planar;
  }
  config.validate();

  // Parse all inputs, merging by year; duplicate ids across files are
  // rejected like in-file duplicates.
  std::map<int, PlaceSet> merged;
  std::map<int, std::set<std::string>> seen;
  std::size_t rejected_rows = 0;
  std::vector<InputDigest> digests;
  for (const auto& input : args.inputs) {
    const std::string bytes = read_file_bytes(input);
    digests.push_back({input, bytes.size(), hex64(fnv1a64(bytes))});
    ParseResult parsed = parse_places(input, mode);
    report_rejections(parsed.rejections, input);
    rejected_rows += parsed.rejections.size();
    for (auto& set : parsed.sets) {
      auto [it, inserted] = merged.try_emplace(set.year, PlaceSet{});
      if (inserted) {
        it->second.year = set.year;
        it->second.mode = mode;
      }
      auto& ids = seen[set.year];
      for (auto& rec : set.records) {
        if (!ids.insert(rec.place_id).second) {
          ++rejected_rows;
          std::cerr << "warning: " << input << ": DuplicatePlace (place_id="
                    << rec.place_id << " year=" << set.year
                    << " duplicates an earlier input)\n";
          continue;
        }
        it->second.records.push_back(std::move(rec));
      }
    }
  }

  std::vector<PlaceSet> sets;
  sets.reserve(merged.size());
  for (auto& [year, set] : merged) sets.push_back(std::move(set));

  std::size_t total_places = 0;
  std::size_t duplicate_positions = 0;
  for (const auto& set : sets) {
    total_places += set.records.size();
    duplicate_positions += validate_places(set).size();
  }
  if (total_places == 0) {
    throw Error(Errc::EmptyInput, "no valid place rows in the input");
  }

  const ComputeOutput output = compute_multi_year(sets, config);

  nlohmann::ordered_json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kVersion;
  manifest["timestamp"] = utc_timestamp();
  manifest["command"] = "compute";
  manifest["config"] = nlohmann::ordered_json::parse(config_to_json(config));
  auto inputs = nlohmann::ordered_json::array();
  for (const auto& digest : digests) {
    inputs.push_back({{"path", digest.path},
                      {"bytes", digest.bytes},
                      {"fnv1a64", digest.fnv1a64}});
  }
  manifest["inputs"] = std::move(inputs);
  auto years = nlohmann::ordered_json::array();
  for (const auto& set : sets) {
    years.push_back({{"year", set.year}, {"places", set.records.size()}});
  }
  manifest["years"] = std::move(years);
  manifest["rejected_rows"] = rejected_rows;
  manifest["warnings"] = {
      {"duplicate_positions", duplicate_positions},
      {"population_clamped", output.stats.population_clamped},
      {"distance_clamped", output.stats.distance_clamped},
      {"distance_fallback", output.stats.distance_fallback},
      {"degenerate_groups", output.stats.degenerate_groups}};
  manifest["outputs"] = {
      {"results", args.out},
      {"geojson", args.geojson.empty()
                      ? nlohmann::ordered_json(nullptr)
                      : nlohmann::ordered_json(args.geojson)},
      {"debug_distances", args.debug_distances.empty()
                              ? nlohmann::ordered_json(nullptr)
                              : nlohmann::ordered_json(args.debug_distances)}};

  OutputSet files;
  files.write(args.out, results_csv(sets, output));
  if (!args.geojson.empty()) {
    files.write(args.geojson, results_geojson(sets, output));
  }
  if (!args.debug_distances.empty()) {
    files.write(args.debug_distances, debug_distances_csv(output));
  }
  files.write(args.out + ".manifest.json", manifest.dump(2) + "\n");
  files.commit();
  return 0;
}

struct AnalyzeArgs {
  std::string results;
  std::vector<std::string> places;
  std::string coord_mode = "geographic";
  std::string codes;
  std::string label = "codes";
  std::string out;
};

std::vector<RiResult> parse_results_csv(const fs::path& path) {
  const std::string text = read_file_bytes(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::MalformedHeader, "empty results file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string expected =
      "place_id,year,population,d1_km,d2_km,d3_km,d4_km,d5_km,raw_ri,ri,flags";
  if (line != expected) {
    throw Error(Errc::MalformedHeader,
                "results header mismatch, got '" + line + "'");
  }
  std::vector<RiResult> results;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (!fields || fields->size() != 11) {
      throw Error(Errc::MalformedHeader,
                  "results row " + std::to_string(row) + " is malformed");
    }
    const auto year = parse_int64((*fields)[1]);
    const auto raw = parse_double((*fields)[8]);
    const auto scaled = parse_double((*fields)[9]);
    if ((*fields)[0].empty() || !year || !raw || !scaled) {
      throw Error(Errc::MalformedHeader,
                  "results row " + std::to_string(row) + " is malformed");
    }
    RiResult res;
    res.place_id = (*fields)[0];
    res.year = static_cast<int>(*year);
    res.raw = *raw;
    res.scaled = *scaled;
    results.push_back(std::move(res));
  }
  if (results.empty()) {
    throw Error(Errc::EmptyInput, "results file has no rows");
  }
  return results;
}

int cmd_analyze(const AnalyzeArgs& args) {
  const std::vector<RiResult> results = parse_results_csv(args.results);
  const CoordinateMode mode = parse_mode(args.coord_mode);
  std::vector<PlaceSet> sets;
  for (const auto& input : args.places) {
    ParseResult parsed = parse_places(input, mode);
    report_rejections(parsed.rejections, input);
    for (auto& set : parsed.sets) sets.push_back(std::move(set));
  }
  HeterogeneityReport report = heterogeneity(results, sets);
  if (!args.codes.empty()) {
    report.spearman =
        code_agreement(results, sets, parse_county_codes(args.codes, args.label));
  }
  std::cout << report_to_table(report);
  const std::string json = report_to_json(report);
  if (args.out.empty()) {
    std::cout << json;
  } else {
    OutputSet files;
    files.write(args.out, json);
    files.commit();
  }
  return 0;
}

struct GenerateArgs {
  std::uint64_t seed = 42;
  std::size_t count = 1000;
  int year = 2010;
  std::string coord_mode = "geographic";
  std::string out;
};

int cmd_generate(const GenerateArgs& args) {
  GenerateOptions options;
  options.seed = args.seed;
  options.count = args.count;
  options.year = args.year;
  options.mode = parse_mode(args.coord_mode);
  const PlaceSet set = generate_places(options);
  OutputSet files;
  const std::vector<PlaceSet> sets = {set};
  files.write(args.out, places_to_csv(sets));
  files.commit();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Place-level remoteness index toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ComputeArgs compute_args;
  CLI::App* compute = app.add_subcommand(
      "compute", "Compute the remoteness index for place tables");
  compute->add_option("--input", compute_args.inputs,
                      "Input CSV/GeoJSON file (repeatable)")
      ->required();
  compute->add_option("--coord-mode", compute_args.coord_mode,
                      "geographic (lon/lat) or planar (meters)")
      ->check(CLI::IsMember({"geographic", "planar"}));
  compute->add_option("--weights", compute_args.weights,
                      "equal, ascending, or a weight-scheme JSON file");
  compute->add_option("--scaling", compute_args.scaling,
                      "per-year or global min-max scaling")
      ->check(CLI::IsMember({"per-year", "global"}));
  compute->add_option("--fallback", compute_args.fallback,
                      "empty-category policy: error or diagonal")
      ->check(CLI::IsMember({"error", "diagonal"}));
  compute->add_option("--log-base", compute_args.log_base, "Log base");
  compute->add_option("--population-floor", compute_args.population_floor,
                      "Population floor for the inverse-log term");
  compute->add_option("--distance-floor-km", compute_args.distance_floor_km,
                      "Minimum distance before the log transform");
  compute->add_option("--out", compute_args.out, "Results CSV path")
      ->required();
  compute->add_option("--geojson", compute_args.geojson,
                      "Optional GeoJSON output path");
  compute->add_option("--debug-distances", compute_args.debug_distances,
                      "Optional per-category distance dump CSV");
  compute->add_option("--config", compute_args.config_path,
                      "RunConfig JSON file (flags override it)");

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Within-county heterogeneity report for computed results");
  analyze->add_option("--results", analyze_args.results,
                      "Results CSV from `ri compute`")
      ->required();
  analyze->add_option("--places", analyze_args.places,
                      "Original place input file (repeatable)")
      ->required();
  analyze->add_option("--coord-mode", analyze_args.coord_mode,
                      "Coordinate mode of the places file")
      ->check(CLI::IsMember({"geographic", "planar"}));
  analyze->add_option("--codes", analyze_args.codes,
                      "County-code CSV (county_id,code)");
  analyze->add_option("--label", analyze_args.label,
                      "Label for the code scheme in the report");
  analyze->add_option("--out", analyze_args.out,
                      "Write the JSON report here instead of stdout");

  GenerateArgs generate_args;
  CLI::App* generate = app.add_subcommand(
      "generate", "Generate a deterministic synthetic place CSV");
  generate->add_option("--seed", generate_args.seed, "RNG seed");
  generate->add_option("--count", generate_args.count, "Number of places");
  generate->add_option("--year", generate_args.year, "Year column value");
  generate->add_option("--coord-mode", generate_args.coord_mode,
                       "geographic or planar coordinates")
      ->check(CLI::IsMember({"geographic", "planar"}));
  generate->add_option("--out", generate_args.out, "Output CSV path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);
    app.exit(err);
    return 2;
  }

  try {
    if (compute->parsed()) return cmd_compute(compute_args, *compute);
    if (analyze->parsed()) return cmd_analyze(analyze_args);
    if (generate->parsed()) return cmd_generate(generate_args);
  } catch (const Error& err) {
    return fail(err.code(), err.detail());
  } catch (const std::exception& err) {
    std::cerr << "error: Internal: " << err.what() << "\n";
    return 12;
  }
  return 2;
}
