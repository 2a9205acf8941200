#include "remoteness/spatial.hpp"

#include <algorithm>
#include <cmath>

namespace remoteness {

const char* to_string(DistanceMetric metric) {
  return metric == DistanceMetric::Haversine ? "haversine" : "euclidean";
}

const char* to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::Measured:
      return "measured";
    case Provenance::Clamped:
      return "clamped";
    case Provenance::Fallback:
      return "fallback";
  }
  return "unknown";
}

const char* to_string(FallbackPolicy policy) {
  return policy == FallbackPolicy::Error ? "error" : "diagonal";
}

CategoryIndexes build_category_indexes(const PlaceSet& places,
                                       const CategoryList& categories) {
  CategoryIndexes indexes;
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    indexes[c].category = categories[c];
    indexes[c].mode = places.mode;
  }
  for (const auto& rec : places.records) {
    for (std::size_t c = 0; c < kNumCategories; ++c) {
      if (categories[c].contains(rec.population)) {
        indexes[c].member_ids.push_back(rec.place_id);
        indexes[c].member_x.push_back(rec.x);
        indexes[c].member_y.push_back(rec.y);
        break;  // categories are disjoint
      }
    }
  }
  for (auto& index : indexes) {
    std::vector<KdTree::Point> pts;
    pts.reserve(index.member_ids.size());
    for (std::size_t i = 0; i < index.member_ids.size(); ++i) {
      pts.push_back(
          search_point(places.mode, index.member_x[i], index.member_y[i]));
    }
    index.tree = KdTree(std::move(pts));
  }
  return indexes;
}

namespace {

std::optional<NearestPlace> nearest_from_search_point(
    const KdTree::Point& query_pt, const PlaceRecord& query,
    const CategoryIndex& index, DistanceMetric metric,
    double distance_floor_km) {
  const auto& ids = index.member_ids;
  const auto hit = index.tree.nearest(
      query_pt,
      [&](std::uint32_t i) { return ids[i] != query.place_id; },
      [&](std::uint32_t candidate, std::uint32_t incumbent) {
        return ids[candidate] < ids[incumbent];
      });
  if (!hit.found) return std::nullopt;
  // The tree orders candidates in search space; the reported distance is
  // always re-evaluated with the exact kernel on the input coordinates.
  const double raw_km = distance_km(metric, query.x, query.y,
                                    index.member_x[hit.index],
                                    index.member_y[hit.index]);
  NearestPlace out;
  out.nearest_id = ids[hit.index];
  if (raw_km < distance_floor_km) {
    out.km = distance_floor_km;
    out.provenance = Provenance::Clamped;
  } else {
    out.km = raw_km;
    out.provenance = Provenance::Measured;
  }
  return out;
}

}  // namespace

std::optional<NearestPlace> nearest_distance(const PlaceRecord& query,
                                             const CategoryIndex& index,
                                             DistanceMetric metric,
                                             double distance_floor_km) {
  const auto query_pt = search_point(index.mode, query.x, query.y);
  return nearest_from_search_point(query_pt, query, index, metric,
                                   distance_floor_km);
}

double bounding_box_diagonal_km(const PlaceSet& places,
                                DistanceMetric metric) {
  if (places.records.empty()) return 0.0;
  double min_x = places.records.front().x;
  double max_x = min_x;
  double min_y = places.records.front().y;
  double max_y = min_y;
  for (const auto& rec : places.records) {
    min_x = std::min(min_x, rec.x);
    max_x = std::max(max_x, rec.x);
    min_y = std::min(min_y, rec.y);
    max_y = std::max(max_y, rec.y);
  }
  return distance_km(metric, min_x, min_y, max_x, max_y);
}

std::vector<DistanceVector> distance_vectors(const PlaceSet& places,
                                             const CategoryIndexes& indexes,
                                             DistanceMetric metric,
                                             FallbackPolicy fallback,
                                             double distance_floor_km) {
  std::vector<DistanceVector> out;
  out.reserve(places.records.size());
  double diagonal_km = -1.0;  // computed lazily, only when a fallback fires
  for (const auto& rec : places.records) {
    DistanceVector dv;
    dv.place_id = rec.place_id;
    const auto query_pt = search_point(places.mode, rec.x, rec.y);
    for (std::size_t c = 0; c < kNumCategories; ++c) {
      auto nearest = nearest_from_search_point(query_pt, rec, indexes[c],
                                               metric, distance_floor_km);
      if (nearest) {
        dv.km[c] = nearest->km;
        dv.provenance[c] = nearest->provenance;
        dv.nearest_id[c] = std::move(nearest->nearest_id);
        continue;
      }
      if (fallback == FallbackPolicy::Error) {
        throw Error(Errc::MissingCategory,
                    "category=" + std::to_string(c + 1) + " year=" +
                        std::to_string(places.year) +
                        " has no other member (use the diagonal fallback to "
                        "substitute the bounding-box diagonal)");
      }
      if (diagonal_km < 0.0) {
        diagonal_km = bounding_box_diagonal_km(places, metric);
      }
      dv.km[c] = std::max(diagonal_km, distance_floor_km);
      dv.provenance[c] = Provenance::Fallback;
    }
    out.push_back(std::move(dv));
  }
  return out;
}

}  // namespace remoteness
