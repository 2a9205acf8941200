#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace remoteness {

// Static 3-d tree for exact nearest-neighbor queries. Points are reordered
// into leaf-contiguous storage at build time; the structure is immutable
// afterwards. Queries take an acceptance predicate (used for self-exclusion)
// and a preference predicate that breaks exact distance ties, both receiving
// indices into the original point vector.
class KdTree {
 public:
  using Point = std::array<double, 3>;

  struct Hit {
    std::uint32_t index = 0;  // index into the points passed to the ctor
    double dist_sq = std::numeric_limits<double>::infinity();
    bool found = false;
  };

  KdTree() = default;

  explicit KdTree(std::vector<Point> points) : pts_(std::move(points)) {
    const std::size_t n = pts_.size();
    orig_.resize(n);
    std::iota(orig_.begin(), orig_.end(), 0u);
    if (n == 0) return;
    nodes_.reserve(2 * n / kLeafSize + 2);
    build(0, static_cast<std::uint32_t>(n));
  }

  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }

  template <typename Accept, typename Prefer>
  Hit nearest(const Point& query, Accept&& accept, Prefer&& prefer) const {
    Hit best;
    if (!nodes_.empty()) search(0, query, accept, prefer, best);
    return best;
  }

 private:
  static constexpr std::uint32_t kLeafSize = 16;

  struct Node {
    double split = 0.0;
    std::int32_t axis = -1;   // -1 marks a leaf
    std::uint32_t lo = 0;     // leaf: begin of point range; inner: left child
    std::uint32_t hi = 0;     // leaf: end of point range; inner: right child
  };

  // Builds the subtree over pts_[begin, end) and returns its node id.
  std::uint32_t build(std::uint32_t begin, std::uint32_t end) {
    const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    if (end - begin <= kLeafSize) {
      nodes_[id] = Node{0.0, -1, begin, end};
      return id;
    }
    Point lo = pts_[begin];
    Point hi = pts_[begin];
    for (std::uint32_t i = begin + 1; i < end; ++i) {
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], pts_[i][a]);
        hi[a] = std::max(hi[a], pts_[i][a]);
      }
    }
    int axis = 0;
    for (int a = 1; a < 3; ++a) {
      if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
    }
    if (hi[axis] == lo[axis]) {
      // All points coincide; splitting cannot make progress.
      nodes_[id] = Node{0.0, -1, begin, end};
      return id;
    }
    const std::uint32_t mid = begin + (end - begin) / 2;
    auto first = pts_.begin() + begin;
    auto nth = pts_.begin() + mid;
    auto last = pts_.begin() + end;
    auto mirror = orig_.begin() + begin;
    nth_element_with_payload(first, nth, last, mirror, axis);
    const double split = pts_[mid][axis];
    const std::uint32_t left = build(begin, mid);
    const std::uint32_t right = build(mid, end);
    nodes_[id] = Node{split, axis, left, right};
    return id;
  }

  // nth_element over the points while keeping orig_ in lockstep.
  template <typename It, typename MirrorIt>
  void nth_element_with_payload(It first, It nth, It last, MirrorIt mirror,
                                int axis) {
    // Indirect sort over offsets, then apply the permutation to both arrays.
    const std::size_t n = static_cast<std::size_t>(last - first);
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    const std::size_t k = static_cast<std::size_t>(nth - first);
    std::nth_element(idx.begin(), idx.begin() + k, idx.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       const double va = first[a][axis];
                       const double vb = first[b][axis];
                       if (va != vb) return va < vb;
                       return mirror[a] < mirror[b];
                     });
    std::vector<Point> tmp_pts(first, last);
    std::vector<std::uint32_t> tmp_orig(mirror, mirror + n);
    for (std::size_t i = 0; i < n; ++i) {
      first[i] = tmp_pts[idx[i]];
      mirror[i] = tmp_orig[idx[i]];
    }
  }

  template <typename Accept, typename Prefer>
  void search(std::uint32_t node_id, const Point& q, Accept& accept,
              Prefer& prefer, Hit& best) const {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
      for (std::uint32_t i = node.lo; i < node.hi; ++i) {
        const std::uint32_t orig = orig_[i];
        if (!accept(orig)) continue;
        const Point& p = pts_[i];
        const double d0 = q[0] - p[0];
        const double d1 = q[1] - p[1];
        const double d2 = q[2] - p[2];
        const double dist_sq = d0 * d0 + d1 * d1 + d2 * d2;
        if (!best.found || dist_sq < best.dist_sq ||
            (dist_sq == best.dist_sq && prefer(orig, best.index))) {
          best = Hit{orig, dist_sq, true};
        }
      }
      return;
    }
    const double delta = q[node.axis] - node.split;
    const std::uint32_t near = delta < 0.0 ? node.lo : node.hi;
    const std::uint32_t far = delta < 0.0 ? node.hi : node.lo;
    search(near, q, accept, prefer, best);
    // <= keeps exact ties reachable so the preference predicate stays
    // authoritative for equidistant members.
    if (!best.found || delta * delta <= best.dist_sq) {
      search(far, q, accept, prefer, best);
    }
  }

  std::vector<Point> pts_;
  std::vector<std::uint32_t> orig_;
  std::vector<Node> nodes_;
};

}  // namespace remoteness
