#include "remoteness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace remoteness {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::IoError, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw Error(Errc::ConfigError,
                std::string(what) + ": invalid JSON: " + err.what());
  }
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const char* what) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) {
      throw Error(Errc::ConfigError,
                  std::string(what) + ": unknown key '" + key + "'");
    }
  }
}

double number_at(const json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) {
    throw Error(Errc::ConfigError, std::string(key) + " must be a number");
  }
  return v.get<double>();
}

WeightScheme weights_from_json(const json& value) {
  if (value.is_string()) {
    const std::string name = value.get<std::string>();
    if (name == "equal") return WeightScheme::equal();
    if (name == "ascending") return WeightScheme::ascending();
    throw Error(Errc::ConfigError, "unknown weight preset '" + name + "'");
  }
  if (!value.is_object()) {
    throw Error(Errc::ConfigError,
                "weights must be a preset name or an object");
  }
  reject_unknown_keys(value, {"name", "w_pop", "w_pc"}, "weights");
  WeightScheme scheme;
  scheme.name = value.value("name", "custom");
  if (!value.contains("w_pop") || !value.contains("w_pc")) {
    throw Error(Errc::ConfigError, "weights need w_pop and w_pc");
  }
  scheme.population_weight = number_at(value, "w_pop");
  const auto& w_pc = value.at("w_pc");
  if (!w_pc.is_array() || w_pc.size() != kNumCategories) {
    throw Error(Errc::ConfigError, "w_pc must hold exactly " +
                                       std::to_string(kNumCategories) +
                                       " numbers");
  }
  for (std::size_t i = 0; i < kNumCategories; ++i) {
    if (!w_pc[i].is_number()) {
      throw Error(Errc::ConfigError, "w_pc entries must be numbers");
    }
    scheme.category_weights[i] = w_pc[i].get<double>();
  }
  scheme.validate();
  return scheme;
}

CategoryList categories_from_json(const json& value) {
  if (!value.is_array() || value.size() != kNumCategories) {
    throw Error(Errc::ConfigError, "categories must hold exactly " +
                                       std::to_string(kNumCategories) +
                                       " entries");
  }
  CategoryList list = default_categories();
  for (std::size_t i = 0; i < kNumCategories; ++i) {
    const auto& entry = value[i];
    if (!entry.is_object() || !entry.contains("lower")) {
      throw Error(Errc::ConfigError,
                  "each category needs at least a lower bound");
    }
    reject_unknown_keys(entry, {"lower", "upper"},
                        "categories");
    list[i].index = static_cast<int>(i + 1);
    list[i].lower = entry.at("lower").get<std::int64_t>();
    list[i].upper = entry.contains("upper") && !entry["upper"].is_null()
                        ? entry["upper"].get<std::int64_t>()
                        : std::numeric_limits<std::int64_t>::max();
  }
  validate_categories(list);
  return list;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  const json doc = parse_json(json_text, "config");
  if (!doc.is_object()) {
    throw Error(Errc::ConfigError, "config must be a JSON object");
  }
  reject_unknown_keys(doc,
                      {"categories", "weights", "metric", "fallback",
                       "scaling", "population_floor", "distance_floor_km",
                       "log_base"},
                      "config");
  RunConfig config;
  if (doc.contains("categories")) {
    config.categories = categories_from_json(doc["categories"]);
  }
  if (doc.contains("weights")) {
    config.weights = weights_from_json(doc["weights"]);
  }
  if (doc.contains("metric")) {
    const std::string metric = doc["metric"].get<std::string>();
    if (metric == "haversine") {
      config.metric = DistanceMetric::Haversine;
    } else if (metric == "euclidean") {
      config.metric = DistanceMetric::Euclidean;
    } else {
      throw Error(Errc::ConfigError, "unknown metric '" + metric + "'");
    }
  }
  if (doc.contains("fallback")) {
    const std::string fallback = doc["fallback"].get<std::string>();
    if (fallback == "error") {
      config.fallback = FallbackPolicy::Error;
    } else if (fallback == "diagonal") {
      config.fallback = FallbackPolicy::Diagonal;
    } else {
      throw Error(Errc::ConfigError, "unknown fallback '" + fallback + "'");
    }
  }
  if (doc.contains("scaling")) {
    const std::string scaling = doc["scaling"].get<std::string>();
    if (scaling == "per-year") {
      config.scaling = ScalingMode::PerYear;
    } else if (scaling == "global") {
      config.scaling = ScalingMode::Global;
    } else {
      throw Error(Errc::ConfigError, "unknown scaling '" + scaling + "'");
    }
  }
  if (doc.contains("population_floor")) {
    config.population_floor = doc["population_floor"].get<std::int64_t>();
  }
  if (doc.contains("distance_floor_km")) {
    config.distance_floor_km = number_at(doc, "distance_floor_km");
  }
  if (doc.contains("log_base")) {
    config.log_base = number_at(doc, "log_base");
  }
  config.validate();
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_file(path));
}

WeightScheme parse_weight_scheme(const std::string& json_text) {
  return weights_from_json(parse_json(json_text, "weights"));
}

WeightScheme load_weight_scheme(const std::filesystem::path& path) {
  return parse_weight_scheme(read_file(path));
}

std::string config_to_json(const RunConfig& config) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json categories = nlohmann::ordered_json::array();
  for (const auto& c : config.categories) {
    nlohmann::ordered_json entry;
    entry["lower"] = c.lower;
    if (c.upper == std::numeric_limits<std::int64_t>::max()) {
      entry["upper"] = nullptr;
    } else {
      entry["upper"] = c.upper;
    }
    categories.push_back(std::move(entry));
  }
  doc["categories"] = std::move(categories);
  doc["weights"] = {{"name", config.weights.name},
                    {"w_pop", config.weights.population_weight},
                    {"w_pc", config.weights.category_weights}};
  doc["metric"] =
      config.metric == DistanceMetric::Haversine ? "haversine" : "euclidean";
  doc["fallback"] = to_string(config.fallback);
  doc["scaling"] = to_string(config.scaling);
  doc["population_floor"] = config.population_floor;
  doc["distance_floor_km"] = config.distance_floor_km;
  doc["log_base"] = config.log_base;
  return doc.dump(2);
}

}  // namespace remoteness
