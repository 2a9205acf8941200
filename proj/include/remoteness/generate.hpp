#pragma once

#include <cstdint>

#include "remoteness/types.hpp"

namespace remoteness {

// Synthetic place-set generator for tests and benchmarks. Output is a pure
// function of the options: sampling uses raw mt19937_64 draws with explicit
// integer/bit arithmetic, so files are identical across platforms.
struct GenerateOptions {
  std::uint64_t seed = 42;
  std::size_t count = 1000;
  int year = 2010;
  CoordinateMode mode = CoordinateMode::Geographic;
};

// Populations follow a decade-weighted power-law-ish mix (most places small);
// the first five records are planted in the five size categories so every
// category is non-empty. County ids come from a coarse coordinate grid.
PlaceSet generate_places(const GenerateOptions& options);

}  // namespace remoteness
