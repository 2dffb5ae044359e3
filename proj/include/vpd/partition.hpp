#pragma once

#include <span>
#include <utility>
#include <vector>

#include "vpd/common.hpp"

namespace vpd {

/// One representative point of a Voronoi cell. Indices are always the
/// contiguous range 0..m-1 in partition order.
struct Codeword {
  int index = 0;
  Vec coords;
};

/// Ordered codeword set with Manhattan-metric nearest lookup (kd-tree backed)
/// and Delaunay cell adjacency. The kd-tree is rebuilt in full after every
/// mutation; codeword counts stay small enough that this is cheap.
class VoronoiPartition {
 public:
  explicit VoronoiPartition(int dim);

  static VoronoiPartition from_points(int dim, const std::vector<Vec>& points);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(coords_.size()); }
  bool empty() const { return coords_.empty(); }

  const Vec& coords(int k) const { return coords_.at(static_cast<std::size_t>(k)); }
  const std::vector<Vec>& codewords() const { return coords_; }
  Codeword codeword(int k) const { return {k, coords(k)}; }

  /// Index of the codeword with minimal L1 distance to `state`;
  /// ties break toward the lowest index.
  int nearest(std::span<const double> state) const;

  /// L1 distance from `state` to codeword k.
  double l1_to(int k, std::span<const double> state) const;

  /// Appends a codeword and returns its index. Rejects duplicates.
  int insert(const Vec& point);

  /// Removes codeword k; indices above k shift down by one.
  void remove(int k);

  /// Indices sharing a Delaunay edge with codeword k, sorted ascending.
  /// Exact for d <= 2; witness-sampling approximation for d >= 3.
  std::vector<int> neighbours(int k) const;

  /// All Delaunay-adjacent index pairs (i < j), sorted.
  std::vector<std::pair<int, int>> adjacency() const;

 private:
  struct KdNode {
    int point = -1;
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  void rebuild_index();
  int build_node(std::vector<int>& idx, int lo, int hi, int depth);
  void search(int node, std::span<const double> state, double& best_dist,
              int& best_idx) const;

  int dim_;
  std::vector<Vec> coords_;
  std::vector<KdNode> nodes_;
  int root_ = -1;
};

/// Delaunay edges of a 2-D point set (Bowyer-Watson with a super-triangle).
/// Exposed separately so tests can drive it directly.
std::vector<std::pair<int, int>> delaunay_edges_2d(const std::vector<Vec>& points);

}  // namespace vpd
