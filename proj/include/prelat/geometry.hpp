#pragma once

#include "prelat/types.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace prelat {

/**
 * Open domains on which lattice energies live: axis-aligned boxes in any
 * dimension, or convex polygons in the plane. Membership is always tested
 * against the open set; nodes and interaction segments touching the boundary
 * do not count as inside.
 */
class Domain {
 public:
  static Domain box(const Vec& lower, const Vec& upper);
  static Domain convex_polygon(std::vector<Eigen::Vector2d> vertices);
  // Regular polygon approximation of a disk, vertex 0 at angle 0.
  static Domain disk(double radius = 1.0, const Eigen::Vector2d& center = {0.0, 0.0},
                     int sides = 64);

  int dimension() const { return dim_; }
  bool is_box() const { return is_box_; }

  bool contains(const Vec& x) const;         // open membership
  bool closure_contains(const Vec& x) const;

  // Signed inner distance to the boundary: positive inside, negative outside.
  // For convex polygons this equals the exact point-to-edge distance for
  // interior points (edge-line and edge-segment distances agree there).
  double inner_distance(const Vec& x) const;

  std::pair<Vec, Vec> bounding_box() const;
  double volume() const;
  Vec center() const;  // box center or polygon vertex centroid
  double diameter() const;

  const Vec& lower() const;
  const Vec& upper() const;
  const std::vector<Eigen::Vector2d>& vertices() const;
  // Half-plane form of a polygon: outward unit normals and offsets,
  // x inside iff normal . x < offset for every edge.
  const std::vector<Eigen::Vector2d>& edge_normals() const;
  const std::vector<double>& edge_offsets() const;

 private:
  Domain() = default;
  int dim_ = 0;
  bool is_box_ = true;
  Vec lower_, upper_;
  std::vector<Eigen::Vector2d> vertices_;
  std::vector<Eigen::Vector2d> normals_;
  std::vector<double> offsets_;
};

/**
 * The inner offset Omega_s = {x in Omega : dist(x, boundary) > s}. For convex
 * domains this is again convex (box inset, or the intersection of the inward
 * offset half planes). It may be empty; emptiness yields empty node and cell
 * sets downstream, never an error.
 */
class ShrunkenDomain {
 public:
  ShrunkenDomain(Domain base, double margin);  // margin < 0 is rejected

  bool contains(const Vec& x) const;
  std::pair<Vec, Vec> bounding_box() const;
  const Domain& base() const { return base_; }
  double margin() const { return margin_; }

 private:
  Domain base_;
  double margin_ = 0.0;
};

ShrunkenDomain shrink(const Domain& domain, double margin);

// Simplex with ordered vertices (columns). The order is the chain order of
// the triangulation it came from.
struct Simplex {
  Mat vertices;  // n x (n+1)
  double volume() const;
  Vec centroid() const;
};

/**
 * Cells of the affine lattice shift + eps * B * Z^n, B integer and
 * nonsingular, each split into the n! chain simplices
 *   conv{v0, v0 + eps*B*e_{pi(1)}, v0 + eps*B*(e_{pi(1)}+e_{pi(2)}), ...}.
 * Cell indices are the integer base points alpha; chain nodes live on the
 * reference lattice because shift is an eps-multiple of an integer vector.
 */
class Triangulation {
 public:
  Triangulation(double eps, MatI basis, VecI shift_index, std::vector<VecI> cells);

  int dimension() const { return static_cast<int>(basis_.rows()); }
  double eps() const { return eps_; }
  const MatI& basis() const { return basis_; }
  const VecI& shift_index() const { return shift_index_; }  // shift = eps * shift_index
  long long det() const { return det_; }
  const std::vector<VecI>& cells() const { return cells_; }

  // World position of the lattice point with multi-index m.
  Vec node_position(const VecI& m) const;
  // Multi-index of that lattice point on the reference lattice eps * Z^n.
  NodeKey reference_node(const VecI& m) const;

  // All reference-lattice nodes in the closure of the cells, sorted.
  std::vector<NodeKey> closure_nodes() const;

  std::size_t simplex_count() const;

 private:
  double eps_;
  MatI basis_;
  VecI shift_index_;
  long long det_;
  std::vector<VecI> cells_;
};

// All permutations of {0, .., n-1} in lexicographic order.
const std::vector<std::vector<int>>& permutations(int n);

// Chain of lattice multi-indices alpha, alpha + e_{pi(0)}, ... for one cell.
std::vector<VecI> chain_indices(const VecI& cell, const std::vector<int>& perm);

/**
 * Cells of the lattice eps*shift_index + eps * B * Z^n whose interior meets
 * the open region Omega_margin. A cell meeting Omega_{eps*sqrt(n)*r} has its
 * closure inside Omega whenever the cell diameter is at most eps*sqrt(n)*r,
 * which is what makes the chain nodes of covered cells safe to read from a
 * deformation defined on Omega.
 */
std::vector<VecI> covered_cells(const Domain& domain, double eps, const MatI& basis,
                                const VecI& shift_index, double margin);

Triangulation triangulate_covered(const Domain& domain, double eps, const MatI& basis,
                                  const VecI& shift_index, double margin);

// Simplices of one triangulation in deterministic order: cells in stored
// order, permutations lexicographic.
void for_each_simplex(const Triangulation& tri,
                      const std::function<void(const VecI& cell, const std::vector<int>& perm,
                                               const std::vector<VecI>& chain)>& fn);

std::vector<Simplex> enumerate_simplices(const Triangulation& tri);

// Largest distance between two points of the unit cell B*[0,1]^n. Covering
// margins at least eps times this keep cell closures inside the domain.
double cell_diameter_factor(const MatI& basis);

// True when the open segment [a, b] lies in the open convex region.
// Convexity reduces the test to the endpoints; that is what makes it exact.
bool segment_in_domain(const Domain& domain, const Vec& a, const Vec& b);
bool segment_in_shrunken(const ShrunkenDomain& region, const Vec& a, const Vec& b);

// True when [a, b] avoids the open inner region Omega_margin entirely while
// staying in the closure of Omega: the boundary collar membership used by the
// remainder bound.
bool segment_in_collar(const Domain& domain, double margin, const Vec& a, const Vec& b);

}  // namespace prelat
