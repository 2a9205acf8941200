#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "remoteness/analysis.hpp"
#include "remoteness/config.hpp"
#include "remoteness/generate.hpp"
#include "remoteness/index.hpp"
#include "remoteness/ingest.hpp"
#include "remoteness/version.hpp"

namespace py = pybind11;
using namespace remoteness;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Place-level remoteness index: ingestion, nearest-neighbor "
            "distances, index computation, heterogeneity diagnostics.";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "RemotenessError");

  py::enum_<CoordinateMode>(m, "CoordinateMode")
      .value("GEOGRAPHIC", CoordinateMode::Geographic)
      .value("PLANAR", CoordinateMode::Planar);

  py::enum_<DistanceMetric>(m, "DistanceMetric")
      .value("HAVERSINE", DistanceMetric::Haversine)
      .value("EUCLIDEAN", DistanceMetric::Euclidean);

  py::enum_<FallbackPolicy>(m, "FallbackPolicy")
      .value("ERROR", FallbackPolicy::Error)
      .value("DIAGONAL", FallbackPolicy::Diagonal);

  py::enum_<ScalingMode>(m, "ScalingMode")
      .value("PER_YEAR", ScalingMode::PerYear)
      .value("GLOBAL", ScalingMode::Global);

  py::enum_<Provenance>(m, "Provenance")
      .value("MEASURED", Provenance::Measured)
      .value("CLAMPED", Provenance::Clamped)
      .value("FALLBACK", Provenance::Fallback);

  py::class_<PlaceRecord>(m, "PlaceRecord")
      .def(py::init<>())
      .def(py::init([](std::string place_id, int year, double x, double y,
                       std::int64_t population, std::string name,
                       std::string county_id) {
             PlaceRecord rec;
             rec.place_id = std::move(place_id);
             rec.year = year;
             rec.x = x;
             rec.y = y;
             rec.population = population;
             rec.name = std::move(name);
             rec.county_id = std::move(county_id);
             return rec;
           }),
           py::arg("place_id"), py::arg("year"), py::arg("x"), py::arg("y"),
           py::arg("population"), py::arg("name") = std::string(),
           py::arg("county_id") = std::string())
      .def_readwrite("place_id", &PlaceRecord::place_id)
      .def_readwrite("name", &PlaceRecord::name)
      .def_readwrite("year", &PlaceRecord::year)
      .def_readwrite("x", &PlaceRecord::x)
      .def_readwrite("y", &PlaceRecord::y)
      .def_readwrite("population", &PlaceRecord::population)
      .def_readwrite("county_id", &PlaceRecord::county_id)
      .def("__repr__", [](const PlaceRecord& rec) {
        return "PlaceRecord(" + rec.place_id + ", year=" +
               std::to_string(rec.year) + ", population=" +
               std::to_string(rec.population) + ")";
      });

  py::class_<PlaceSet>(m, "PlaceSet")
      .def(py::init<>())
      .def(py::init([](int year, CoordinateMode mode,
                       std::vector<PlaceRecord> records) {
             PlaceSet set;
             set.year = year;
             set.mode = mode;
             set.records = std::move(records);
             return set;
           }),
           py::arg("year"), py::arg("mode"), py::arg("records"))
      .def_readwrite("year", &PlaceSet::year)
      .def_readwrite("mode", &PlaceSet::mode)
      .def_readwrite("records", &PlaceSet::records)
      .def("__len__", &PlaceSet::size);

  py::class_<PopulationCategory>(m, "PopulationCategory")
      .def(py::init<>())
      .def_readwrite("index", &PopulationCategory::index)
      .def_readwrite("lower", &PopulationCategory::lower)
      .def_readwrite("upper", &PopulationCategory::upper)
      .def("contains", &PopulationCategory::contains);

  py::class_<WeightScheme>(m, "WeightScheme")
      .def(py::init<>())
      .def_static("equal", &WeightScheme::equal)
      .def_static("ascending", &WeightScheme::ascending)
      .def_readwrite("name", &WeightScheme::name)
      .def_readwrite("population_weight", &WeightScheme::population_weight)
      .def_readwrite("category_weights", &WeightScheme::category_weights)
      .def("total", &WeightScheme::total);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("categories", &RunConfig::categories)
      .def_readwrite("weights", &RunConfig::weights)
      .def_readwrite("metric", &RunConfig::metric)
      .def_readwrite("fallback", &RunConfig::fallback)
      .def_readwrite("scaling", &RunConfig::scaling)
      .def_readwrite("population_floor", &RunConfig::population_floor)
      .def_readwrite("distance_floor_km", &RunConfig::distance_floor_km)
      .def_readwrite("log_base", &RunConfig::log_base)
      .def("validate", &RunConfig::validate);

  py::class_<RowRejection>(m, "RowRejection")
      .def_readonly("row", &RowRejection::row)
      .def_property_readonly(
          "reason",
          [](const RowRejection& r) { return std::string(to_string(r.reason)); })
      .def_readonly("detail", &RowRejection::detail);

  py::class_<DistanceVector>(m, "DistanceVector")
      .def_readonly("place_id", &DistanceVector::place_id)
      .def_readonly("km", &DistanceVector::km)
      .def_readonly("provenance", &DistanceVector::provenance)
      .def_readonly("nearest_id", &DistanceVector::nearest_id);

  py::class_<RiResult>(m, "RiResult")
      .def_readonly("place_id", &RiResult::place_id)
      .def_readonly("year", &RiResult::year)
      .def_readonly("raw", &RiResult::raw)
      .def_readonly("scaled", &RiResult::scaled)
      .def_property_readonly("flags", [](const RiResult& r) {
        return flags_to_string(r.flags);
      });

  py::class_<ComputeStats>(m, "ComputeStats")
      .def_readonly("population_clamped", &ComputeStats::population_clamped)
      .def_readonly("distance_clamped", &ComputeStats::distance_clamped)
      .def_readonly("distance_fallback", &ComputeStats::distance_fallback)
      .def_readonly("degenerate_groups", &ComputeStats::degenerate_groups);

  py::class_<YearResults>(m, "YearResults")
      .def_readonly("year", &YearResults::year)
      .def_readonly("distances", &YearResults::distances)
      .def_readonly("results", &YearResults::results);

  py::class_<ComputeOutput>(m, "ComputeOutput")
      .def_readonly("years", &ComputeOutput::years)
      .def_readonly("stats", &ComputeOutput::stats);

  py::class_<CountyStats>(m, "CountyStats")
      .def_readonly("county_id", &CountyStats::county_id)
      .def_readonly("count", &CountyStats::count)
      .def_readonly("mean", &CountyStats::mean)
      .def_readonly("min", &CountyStats::min)
      .def_readonly("max", &CountyStats::max)
      .def_readonly("range", &CountyStats::range)
      .def_readonly("stddev", &CountyStats::stddev);

  py::class_<VarianceDecomposition>(m, "VarianceDecomposition")
      .def_readonly("total", &VarianceDecomposition::total)
      .def_readonly("within", &VarianceDecomposition::within)
      .def_readonly("between", &VarianceDecomposition::between)
      .def_readonly("within_share", &VarianceDecomposition::within_share);

  py::class_<SpearmanResult>(m, "SpearmanResult")
      .def_readonly("label", &SpearmanResult::label)
      .def_readonly("coefficient", &SpearmanResult::coefficient)
      .def_readonly("matched_places", &SpearmanResult::matched_places)
      .def_readonly("excluded_no_code", &SpearmanResult::excluded_no_code);

  py::class_<HeterogeneityReport>(m, "HeterogeneityReport")
      .def_readonly("places_total", &HeterogeneityReport::places_total)
      .def_readonly("places_with_county",
                    &HeterogeneityReport::places_with_county)
      .def_readonly("excluded_no_county",
                    &HeterogeneityReport::excluded_no_county)
      .def_readonly("counties", &HeterogeneityReport::counties)
      .def_readonly("variance", &HeterogeneityReport::variance)
      .def_readonly("spearman", &HeterogeneityReport::spearman)
      .def("to_json", [](const HeterogeneityReport& report) {
        return report_to_json(report);
      });

  m.def("default_categories", &default_categories);

  m.def(
      "parse_places",
      [](const std::filesystem::path& path, CoordinateMode mode) {
        ParseResult result = parse_places(path, mode);
        return py::make_tuple(std::move(result.sets),
                              std::move(result.rejections));
      },
      py::arg("path"), py::arg("mode") = CoordinateMode::Geographic,
      "Parse a CSV or GeoJSON place table into per-year place sets; returns "
      "(sets, rejections).");

  m.def(
      "validate_places",
      [](const PlaceSet& set) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& w : validate_places(set)) {
          out.emplace_back(w.first_id, w.second_id);
        }
        return out;
      },
      py::arg("places"),
      "Check coordinate invariants; returns duplicate-position id pairs.");

  m.def("places_to_csv",
        [](const std::vector<PlaceSet>& sets) { return places_to_csv(sets); },
        py::arg("sets"));

  m.def(
      "raw_ri",
      [](std::int64_t population, const std::array<double, kNumCategories>& km,
         const WeightScheme& weights, const RunConfig& config) {
        return raw_ri(population, km, weights, config).value;
      },
      py::arg("population"), py::arg("distances_km"), py::arg("weights"),
      py::arg("config") = RunConfig{},
      "Raw remoteness index for one place from its population and the five "
      "nearest-category distances (km).");

  m.def(
      "scale",
      [](const std::vector<double>& raws) { return scale_group(raws).values; },
      py::arg("raws"), "Min-max scale one group of raw values into [0, 1].");

  m.def("compute_year", &compute_year, py::arg("places"),
        py::arg("config") = RunConfig{},
        "Full pipeline for one place set: indexes, distances, raw and scaled "
        "index values.");

  m.def("compute_multi_year", &compute_multi_year, py::arg("sets"),
        py::arg("config") = RunConfig{},
        "Pipeline over several years; scaling follows config.scaling.");

  m.def(
      "heterogeneity",
      [](const std::vector<RiResult>& results,
         const std::vector<PlaceSet>& sets) {
        return heterogeneity(results, sets);
      },
      py::arg("results"), py::arg("sets"),
      "Per-county dispersion and variance decomposition of the scaled index.");

  m.def(
      "code_agreement",
      [](const std::vector<RiResult>& results,
         const std::vector<PlaceSet>& sets,
         const std::map<std::string, int>& codes, const std::string& label) {
        CountyCodeTable table;
        table.label = label;
        table.codes = codes;
        return code_agreement(results, sets, table);
      },
      py::arg("results"), py::arg("sets"), py::arg("codes"),
      py::arg("label") = "codes",
      "Spearman rank correlation between place index values and county "
      "codes.");

  m.def(
      "spearman",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return spearman(a, b);
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "generate_places",
      [](std::uint64_t seed, std::size_t count, int year,
         CoordinateMode mode) {
        GenerateOptions options;
        options.seed = seed;
        options.count = count;
        options.year = year;
        options.mode = mode;
        return generate_places(options);
      },
      py::arg("seed") = 42, py::arg("count") = 1000, py::arg("year") = 2010,
      py::arg("mode") = CoordinateMode::Geographic,
      "Deterministic synthetic place set covering all five categories.");

  m.def("parse_run_config", &parse_run_config, py::arg("json_text"));
  m.def("config_to_json", &config_to_json, py::arg("config"));
}
