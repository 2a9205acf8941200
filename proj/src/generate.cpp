#include "remoteness/generate.hpp"

#include <random>

namespace remoteness {

namespace {

// Uniform double in [0, 1) from the raw 64-bit stream; avoids
// std::uniform_real_distribution, whose output differs between standard
// library implementations.
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;  // modulo bias is irrelevant for synthetic data
}

// Decade-weighted population mix: mostly villages and small towns, a thin
// tail of cities. Decade d covers [10^d, 10^(d+1)).
std::int64_t sample_population(std::mt19937_64& rng) {
  static constexpr int kWeights[6] = {24, 16, 10, 6, 3, 1};  // decades 1..6
  static constexpr int kTotalWeight = 60;
  int pick = static_cast<int>(uniform_below(rng, kTotalWeight));
  int decade = 1;
  for (int d = 0; d < 6; ++d) {
    pick -= kWeights[d];
    if (pick < 0) {
      decade = d + 1;
      break;
    }
  }
  std::int64_t lo = 1;
  for (int i = 0; i < decade; ++i) lo *= 10;
  return lo + static_cast<std::int64_t>(uniform_below(
                  rng, static_cast<std::uint64_t>(9 * lo)));
}

struct Extent {
  double min_x, max_x, min_y, max_y;
};

// Conterminous-US-like footprints.
Extent extent_for(CoordinateMode mode) {
  if (mode == CoordinateMode::Geographic) {
    return {-124.7, -67.0, 25.2, 49.0};
  }
  return {0.0, 4'500'000.0, 0.0, 2'800'000.0};
}

}  // namespace

PlaceSet generate_places(const GenerateOptions& options) {
  std::mt19937_64 rng(options.seed);
  const Extent ext = extent_for(options.mode);

  PlaceSet set;
  set.year = options.year;
  set.mode = options.mode;
  set.records.reserve(options.count);

  // One planted member per size category so no category comes up empty.
  static constexpr std::int64_t kPlanted[5] = {15000, 30000, 75000, 150000,
                                               400000};

  for (std::size_t i = 0; i < options.count; ++i) {
    PlaceRecord rec;
    rec.place_id = "P" + std::string(6 - std::min<std::size_t>(
                                             6, std::to_string(i + 1).size()),
                                     '0') +
                   std::to_string(i + 1);
    rec.year = options.year;
    const double ux = unit_double(rng);
    const double uy = unit_double(rng);
    rec.x = ext.min_x + ux * (ext.max_x - ext.min_x);
    rec.y = ext.min_y + uy * (ext.max_y - ext.min_y);
    rec.population = i < 5 && options.count >= 5 ? kPlanted[i]
                                                 : sample_population(rng);
    // 16x10 grid of synthetic counties over the extent.
    const int col = std::min(15, static_cast<int>(ux * 16.0));
    const int row = std::min(9, static_cast<int>(uy * 10.0));
    const int cell = row * 16 + col;
    rec.county_id =
        "C" + std::string(cell < 10 ? 2 : cell < 100 ? 1 : 0, '0') +
        std::to_string(cell);
    set.records.push_back(std::move(rec));
  }
  return set;
}

}  // namespace remoteness
