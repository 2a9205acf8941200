#include "remoteness/index.hpp"

#include <algorithm>
#include <cmath>

namespace remoteness {

WeightScheme WeightScheme::equal() {
  return {"equal", 15.0, {3.0, 3.0, 3.0, 3.0, 3.0}};
}

WeightScheme WeightScheme::ascending() {
  return {"ascending", 15.0, {1.0, 2.0, 3.0, 4.0, 5.0}};
}

double WeightScheme::total() const {
  double sum = population_weight;
  for (const double w : category_weights) sum += w;
  return sum;
}

void WeightScheme::validate() const {
  if (!(population_weight >= 0.0)) {
    throw Error(Errc::ConfigError, "population weight must be non-negative");
  }
  for (const double w : category_weights) {
    if (!(w >= 0.0)) {
      throw Error(Errc::ConfigError, "category weights must be non-negative");
    }
  }
  if (!(total() > 0.0)) {
    throw Error(Errc::ConfigError, "weights must not all be zero");
  }
}

const char* to_string(ScalingMode mode) {
  return mode == ScalingMode::PerYear ? "per-year" : "global";
}

void RunConfig::validate() const {
  validate_categories(categories);
  weights.validate();
  if (population_floor < 2) {
    throw Error(Errc::ConfigError, "population_floor must be >= 2");
  }
  if (!(distance_floor_km > 0.0)) {
    throw Error(Errc::ConfigError, "distance_floor_km must be > 0");
  }
  if (!(log_base > 1.0)) {
    throw Error(Errc::ConfigError, "log_base must be > 1");
  }
}

std::string flags_to_string(std::uint8_t flags) {
  std::string out;
  auto append = [&](const char* token) {
    if (!out.empty()) out.push_back('|');
    out += token;
  };
  if (flags & kPopulationClamped) append("population_clamped");
  if (flags & kDistanceClamped) append("distance_clamped");
  if (flags & kDistanceFallback) append("distance_fallback");
  return out;
}

double log_base(double value, double base) {
  if (base == 10.0) return std::log10(value);
  if (base == 2.0) return std::log2(value);
  return std::log(value) / std::log(base);
}

RawRi raw_ri(std::int64_t population,
             const std::array<double, kNumCategories>& distances_km,
             const WeightScheme& weights, const RunConfig& config) {
  const double total = weights.total();
  // Normalizing each weight separately keeps the result invariant under a
  // common integer scaling of all weights: k*w / k*total divides to the very
  // same quotient.
  RawRi out;
  std::int64_t s = population;
  if (s < config.population_floor) {
    s = config.population_floor;
    out.population_clamped = true;
  }
  const double log_pop = log_base(static_cast<double>(s), config.log_base);
  double value = (weights.population_weight / total) * (1.0 / log_pop);
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    value += (weights.category_weights[c] / total) *
             log_base(distances_km[c], config.log_base);
  }
  out.value = value;
  return out;
}

ScaledGroup scale_group(std::span<const double> raws) {
  ScaledGroup out;
  out.values.reserve(raws.size());
  if (raws.empty()) return out;
  double lo = raws.front();
  double hi = raws.front();
  for (const double r : raws) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (lo == hi) {
    out.degenerate = true;
    out.values.assign(raws.size(), 0.5);
    return out;
  }
  const double span = hi - lo;
  for (const double r : raws) {
    out.values.push_back((r - lo) / span);
  }
  return out;
}

namespace {

struct YearRaw {
  int year = 0;
  const PlaceSet* places = nullptr;
  std::vector<DistanceVector> distances;
  std::vector<double> raws;
  std::vector<std::uint8_t> flags;
};

YearRaw compute_raw_year(const PlaceSet& places, const RunConfig& config,
                         ComputeStats& stats) {
  if (metric_for(places.mode) != config.metric) {
    throw Error(Errc::ConfigError,
                std::string("metric ") + to_string(config.metric) +
                    " is inconsistent with " + to_string(places.mode) +
                    " coordinates");
  }
  YearRaw out;
  out.year = places.year;
  out.places = &places;
  const CategoryIndexes indexes =
      build_category_indexes(places, config.categories);
  out.distances = distance_vectors(places, indexes, config.metric,
                                   config.fallback, config.distance_floor_km);
  out.raws.reserve(places.records.size());
  out.flags.reserve(places.records.size());
  for (std::size_t i = 0; i < places.records.size(); ++i) {
    const auto& rec = places.records[i];
    const auto& dv = out.distances[i];
    std::uint8_t flags = 0;
    for (const Provenance p : dv.provenance) {
      if (p == Provenance::Clamped) flags |= kDistanceClamped;
      if (p == Provenance::Fallback) flags |= kDistanceFallback;
    }
    const RawRi raw = raw_ri(rec.population, dv.km, config.weights, config);
    if (raw.population_clamped) flags |= kPopulationClamped;
    if (flags & kPopulationClamped) ++stats.population_clamped;
    if (flags & kDistanceClamped) ++stats.distance_clamped;
    if (flags & kDistanceFallback) ++stats.distance_fallback;
    out.raws.push_back(raw.value);
    out.flags.push_back(flags);
  }
  return out;
}

}  // namespace

ComputeOutput compute_multi_year(const std::vector<PlaceSet>& sets,
                                 const RunConfig& config) {
  config.validate();
  ComputeOutput output;
  std::vector<YearRaw> years;
  years.reserve(sets.size());
  for (const auto& places : sets) {
    try {
      years.push_back(compute_raw_year(places, config, output.stats));
    } catch (const Error& err) {
      if (err.code() == Errc::MissingCategory) throw;
      throw Error(err.code(),
                  err.detail() + " (year " + std::to_string(places.year) + ")");
    }
  }

  std::vector<std::vector<double>> scaled_per_year(years.size());
  if (config.scaling == ScalingMode::PerYear) {
    for (std::size_t y = 0; y < years.size(); ++y) {
      ScaledGroup group = scale_group(years[y].raws);
      if (group.degenerate && !group.values.empty()) {
        ++output.stats.degenerate_groups;
      }
      scaled_per_year[y] = std::move(group.values);
    }
  } else {
    std::vector<double> all;
    for (const auto& year : years) {
      all.insert(all.end(), year.raws.begin(), year.raws.end());
    }
    ScaledGroup group = scale_group(all);
    if (group.degenerate && !group.values.empty()) {
      ++output.stats.degenerate_groups;
    }
    std::size_t offset = 0;
    for (std::size_t y = 0; y < years.size(); ++y) {
      const std::size_t n = years[y].raws.size();
      scaled_per_year[y].assign(group.values.begin() + offset,
                                group.values.begin() + offset + n);
      offset += n;
    }
  }

  output.years.reserve(years.size());
  for (std::size_t y = 0; y < years.size(); ++y) {
    YearResults block;
    block.year = years[y].year;
    block.distances = std::move(years[y].distances);
    const auto& records = years[y].places->records;
    block.results.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      block.results.push_back({records[i].place_id, years[y].year,
                               years[y].raws[i], scaled_per_year[y][i],
                               years[y].flags[i]});
    }
    output.years.push_back(std::move(block));
  }
  return output;
}

ComputeOutput compute_year(const PlaceSet& places, const RunConfig& config) {
  return compute_multi_year({places}, config);
}

}  // namespace remoteness
