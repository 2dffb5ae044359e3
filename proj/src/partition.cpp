#include "vpd/partition.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>

#include "vpd/rng.hpp"

namespace vpd {

VoronoiPartition::VoronoiPartition(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("partition dimension must be >= 1");
}

VoronoiPartition VoronoiPartition::from_points(int dim,
                                               const std::vector<Vec>& points) {
  VoronoiPartition p(dim);
  for (const auto& pt : points) p.insert(pt);
  return p;
}

double VoronoiPartition::l1_to(int k, std::span<const double> state) const {
  return l1_distance(coords(k), state);
}

int VoronoiPartition::insert(const Vec& point) {
  if (static_cast<int>(point.size()) != dim_)
    throw std::invalid_argument("insert_codeword: dimension mismatch");
  for (const auto& c : coords_)
    if (c == point) throw std::invalid_argument("degenerate codeword");
  coords_.push_back(point);
  rebuild_index();
  return size() - 1;
}

void VoronoiPartition::remove(int k) {
  if (k < 0 || k >= size())
    throw std::invalid_argument("remove_codeword: index out of range");
  if (size() < 2)
    throw std::invalid_argument("cannot empty partition");
  coords_.erase(coords_.begin() + k);
  rebuild_index();
}

// ---------------------------------------------------------------------------
// kd-tree (full rebuild per mutation)

void VoronoiPartition::rebuild_index() {
  nodes_.clear();
  root_ = -1;
  if (coords_.empty()) return;
  std::vector<int> idx(coords_.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  nodes_.reserve(coords_.size());
  root_ = build_node(idx, 0, static_cast<int>(idx.size()), 0);
}

int VoronoiPartition::build_node(std::vector<int>& idx, int lo, int hi,
                                 int depth) {
  if (lo >= hi) return -1;
  const int axis = depth % dim_;
  const int mid = lo + (hi - lo) / 2;
  // (coordinate, index) ordering keeps the tree layout deterministic.
  std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                   [&](int a, int b) {
                     const double ca = coords_[static_cast<std::size_t>(a)][static_cast<std::size_t>(axis)];
                     const double cb = coords_[static_cast<std::size_t>(b)][static_cast<std::size_t>(axis)];
                     return ca < cb || (ca == cb && a < b);
                   });
  const int node_id = static_cast<int>(nodes_.size());
  nodes_.push_back({idx[static_cast<std::size_t>(mid)], axis, -1, -1});
  const int left = build_node(idx, lo, mid, depth + 1);
  const int right = build_node(idx, mid + 1, hi, depth + 1);
  nodes_[static_cast<std::size_t>(node_id)].left = left;
  nodes_[static_cast<std::size_t>(node_id)].right = right;
  return node_id;
}

void VoronoiPartition::search(int node, std::span<const double> state,
                              double& best_dist, int& best_idx) const {
  if (node < 0) return;
  const KdNode& n = nodes_[static_cast<std::size_t>(node)];
  const double d = l1_distance(coords_[static_cast<std::size_t>(n.point)], state);
  if (d < best_dist || (d == best_dist && n.point < best_idx)) {
    best_dist = d;
    best_idx = n.point;
  }
  const double diff =
      state[static_cast<std::size_t>(n.axis)] -
      coords_[static_cast<std::size_t>(n.point)][static_cast<std::size_t>(n.axis)];
  const int near = diff < 0.0 ? n.left : n.right;
  const int far = diff < 0.0 ? n.right : n.left;
  search(near, state, best_dist, best_idx);
  // |diff| lower-bounds the L1 distance of anything on the far side. Equal
  // distances must still be visited so the lowest-index tie rule holds.
  if (std::abs(diff) <= best_dist) search(far, state, best_dist, best_idx);
}

int VoronoiPartition::nearest(std::span<const double> state) const {
  if (coords_.empty()) throw std::invalid_argument("no codewords");
  if (static_cast<int>(state.size()) != dim_)
    throw std::invalid_argument("nearest: dimension mismatch");
  double best_dist = std::numeric_limits<double>::infinity();
  int best_idx = size();
  search(root_, state, best_dist, best_idx);
  return best_idx;
}

// ---------------------------------------------------------------------------
// Delaunay adjacency

namespace {

// Orientation and in-circumcircle predicates in long double. Inputs stay
// within a few orders of magnitude of the super-triangle scale, where the
// extra mantissa bits keep the determinant signs reliable. Exact ties are
// resolved as "outside"/"collinear", which keeps the walk deterministic.
long double orient2d(const Vec& a, const Vec& b, const Vec& c) {
  const long double abx = static_cast<long double>(b[0]) - a[0];
  const long double aby = static_cast<long double>(b[1]) - a[1];
  const long double acx = static_cast<long double>(c[0]) - a[0];
  const long double acy = static_cast<long double>(c[1]) - a[1];
  return abx * acy - aby * acx;
}

// > 0 iff d lies strictly inside the circumcircle of ccw triangle (a, b, c).
long double incircle(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
  const long double adx = static_cast<long double>(a[0]) - d[0];
  const long double ady = static_cast<long double>(a[1]) - d[1];
  const long double bdx = static_cast<long double>(b[0]) - d[0];
  const long double bdy = static_cast<long double>(b[1]) - d[1];
  const long double cdx = static_cast<long double>(c[0]) - d[0];
  const long double cdy = static_cast<long double>(c[1]) - d[1];
  const long double ad2 = adx * adx + ady * ady;
  const long double bd2 = bdx * bdx + bdy * bdy;
  const long double cd2 = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd2 - bd2 * cdy) - ady * (bdx * cd2 - bd2 * cdx) +
         ad2 * (bdx * cdy - bdy * cdx);
}

struct Tri {
  int v[3];
};

}  // namespace

std::vector<std::pair<int, int>> delaunay_edges_2d(const std::vector<Vec>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<std::pair<int, int>> out;
  if (n < 2) return out;

  // Super-triangle far outside the bounding box. Real-real edges of the
  // combined triangulation are a subset of the true Delaunay edges, so the
  // super vertices only need to be far enough to not delete interior edges.
  double lo_x = pts[0][0], hi_x = pts[0][0], lo_y = pts[0][1], hi_y = pts[0][1];
  for (const auto& p : pts) {
    lo_x = std::min(lo_x, p[0]);
    hi_x = std::max(hi_x, p[0]);
    lo_y = std::min(lo_y, p[1]);
    hi_y = std::max(hi_y, p[1]);
  }
  const double cx = 0.5 * (lo_x + hi_x);
  const double cy = 0.5 * (lo_y + hi_y);
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1.0});
  const double big = 1e5 * span;

  std::vector<Vec> v(pts.begin(), pts.end());
  v.push_back({cx - 3.0 * big, cy - big});
  v.push_back({cx + 3.0 * big, cy - big});
  v.push_back({cx, cy + 3.0 * big});

  auto ccw = [&](Tri& t) {
    if (orient2d(v[static_cast<std::size_t>(t.v[0])],
                 v[static_cast<std::size_t>(t.v[1])],
                 v[static_cast<std::size_t>(t.v[2])]) < 0.0L)
      std::swap(t.v[1], t.v[2]);
  };

  std::vector<Tri> tris;
  tris.push_back({{n, n + 1, n + 2}});
  ccw(tris.back());

  for (int p = 0; p < n; ++p) {
    const Vec& q = v[static_cast<std::size_t>(p)];
    std::vector<char> bad(tris.size(), 0);
    // Boundary edges of the cavity appear exactly once among bad triangles.
    std::map<std::pair<int, int>, std::pair<int, int>> edge_count;
    bool any = false;
    for (std::size_t t = 0; t < tris.size(); ++t) {
      const Tri& tr = tris[t];
      if (incircle(v[static_cast<std::size_t>(tr.v[0])],
                   v[static_cast<std::size_t>(tr.v[1])],
                   v[static_cast<std::size_t>(tr.v[2])], q) > 0.0L) {
        bad[t] = 1;
        any = true;
        for (int e = 0; e < 3; ++e) {
          const int a = tr.v[e];
          const int b = tr.v[(e + 1) % 3];
          const auto key = std::minmax(a, b);
          auto [it, fresh] = edge_count.try_emplace({key.first, key.second},
                                                    std::pair<int, int>{a, b});
          if (!fresh) it->second = {-1, -1};  // interior edge, shared twice
        }
      }
    }
    if (!any) {
      // Degenerate fallback (point outside every circumcircle, e.g. exact
      // duplicates): attach to the triangle whose circumcircle is closest.
      // Duplicates are rejected upstream, so this path is defensive only.
      continue;
    }
    std::vector<Tri> next;
    next.reserve(tris.size() + 2);
    for (std::size_t t = 0; t < tris.size(); ++t)
      if (!bad[t]) next.push_back(tris[t]);
    for (const auto& [key, dir] : edge_count) {
      if (dir.first < 0) continue;
      Tri t{{dir.first, dir.second, p}};
      ccw(t);
      next.push_back(t);
    }
    tris = std::move(next);
  }

  // Collect real-real edges from every triangle, including those that touch a
  // super vertex: such edges still carry an empty circumcircle witness.
  std::set<std::pair<int, int>> edges;
  for (const auto& t : tris) {
    for (int e = 0; e < 3; ++e) {
      const int a = t.v[e];
      const int b = t.v[(e + 1) % 3];
      if (a < n && b < n) edges.insert(std::minmax(a, b));
    }
  }
  out.assign(edges.begin(), edges.end());
  return out;
}

namespace {

std::vector<std::pair<int, int>> adjacency_1d(const std::vector<Vec>& pts) {
  std::vector<int> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return pts[static_cast<std::size_t>(a)][0] < pts[static_cast<std::size_t>(b)][0];
  });
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
    edges.push_back(std::minmax(order[i], order[i + 1]));
  std::sort(edges.begin(), edges.end());
  return edges;
}

// d >= 3: two cells are declared adjacent when some witness point sampled in
// the codeword bounding box has them as its two Euclidean-nearest codewords.
// This approximates Delaunay adjacency; the sample is seeded and fixed.
std::vector<std::pair<int, int>> adjacency_witness(const std::vector<Vec>& pts,
                                                   int dim) {
  const int m = static_cast<int>(pts.size());
  Vec lo(pts[0]), hi(pts[0]);
  for (const auto& p : pts)
    for (int j = 0; j < dim; ++j) {
      lo[static_cast<std::size_t>(j)] = std::min(lo[static_cast<std::size_t>(j)], p[static_cast<std::size_t>(j)]);
      hi[static_cast<std::size_t>(j)] = std::max(hi[static_cast<std::size_t>(j)], p[static_cast<std::size_t>(j)]);
    }
  Rng rng(derive_seed(0xADACE5ull, static_cast<std::uint64_t>(dim),
                      static_cast<std::uint64_t>(m)));
  std::set<std::pair<int, int>> edges;
  const int n_witness = 4096 * dim;
  Vec w(static_cast<std::size_t>(dim));
  for (int s = 0; s < n_witness; ++s) {
    for (int j = 0; j < dim; ++j)
      w[static_cast<std::size_t>(j)] =
          rng.uniform(lo[static_cast<std::size_t>(j)], hi[static_cast<std::size_t>(j)]);
    int b0 = -1, b1 = -1;
    double d0 = std::numeric_limits<double>::infinity(), d1 = d0;
    for (int k = 0; k < m; ++k) {
      const double d = l2_distance(pts[static_cast<std::size_t>(k)], w);
      if (d < d0 || (d == d0 && k < b0)) {
        d1 = d0;
        b1 = b0;
        d0 = d;
        b0 = k;
      } else if (d < d1 || (d == d1 && k < b1)) {
        d1 = d;
        b1 = k;
      }
    }
    if (b0 >= 0 && b1 >= 0) edges.insert(std::minmax(b0, b1));
  }
  return {edges.begin(), edges.end()};
}

}  // namespace

std::vector<std::pair<int, int>> VoronoiPartition::adjacency() const {
  if (size() < 2) return {};
  if (dim_ == 1) return adjacency_1d(coords_);
  if (dim_ == 2) return delaunay_edges_2d(coords_);
  return adjacency_witness(coords_, dim_);
}

std::vector<int> VoronoiPartition::neighbours(int k) const {
  if (k < 0 || k >= size())
    throw std::invalid_argument("neighbours: index out of range");
  std::vector<int> out;
  for (const auto& [a, b] : adjacency()) {
    if (a == k) out.push_back(b);
    if (b == k) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vpd
