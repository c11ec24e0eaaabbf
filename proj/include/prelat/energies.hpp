#pragma once

#include "prelat/fields.hpp"
#include "prelat/geometry.hpp"
#include "prelat/lattice_families.hpp"
#include "prelat/metric.hpp"
#include "prelat/quadrature.hpp"
#include "prelat/types.hpp"

#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace prelat {

/**
 * Finite-range interaction weights: pairs (radius_sq, weight) with positive
 * weights. Interactions of squared length r2 enter every sum with weight
 * psi(sqrt(r2)); all other lengths are cut off.
 */
struct Cutoff {
  std::vector<std::pair<long, double>> weights;  // sorted by radius_sq, unique

  static Cutoff nearest();                  // {1: 1}
  static Cutoff next_nearest();             // {2: 1}
  static Cutoff nearest_and_next(double w1 = 1.0, double w2 = 1.0);

  double weight(long radius_sq) const;      // 0 when cut off
  double max_radius() const;                // largest sqrt(radius_sq)
  void validate(int dim) const;
};

/**
 * Nodal deformation values on the reference lattice eps * Z^n, keyed by
 * multi-index. Reading a missing node is an error: every consumer states
 * which nodes it needs, and silent extension would hide coverage bugs.
 */
class DiscreteDeformation {
 public:
  DiscreteDeformation(double eps, int dim);

  // Values f(node) at every node of eps Z^n inside the open domain.
  static DiscreteDeformation sample(const Domain& domain, double eps,
                                    const std::function<Vec(const Vec&)>& f);

  double eps() const { return eps_; }
  int dimension() const { return dim_; }

  void set(const VecI& index, Vec value);
  const Vec& at(const VecI& index) const;
  const Vec& at(const NodeKey& key) const;
  bool has(const VecI& index) const;
  Vec node_position(const VecI& index) const;
  std::vector<NodeKey> node_keys() const;  // sorted
  std::size_t size() const { return values_.size(); }

 private:
  double eps_;
  int dim_;
  std::unordered_map<NodeKey, Vec, NodeKeyHash> values_;
};

/**
 * Piecewise affine extension of nodal values over a chain triangulation:
 * per-simplex constant gradients plus point evaluation inside covered cells.
 */
class PiecewiseAffineField {
 public:
  PiecewiseAffineField(Triangulation tri, const DiscreteDeformation& u);

  const Triangulation& triangulation() const { return tri_; }
  // Gradients in simplex enumeration order (cells, then permutations).
  const std::vector<Mat>& gradients() const { return gradients_; }

  bool covers(const Vec& x) const;
  Vec evaluate(const Vec& x) const;
  // Index into gradients() of a simplex containing x, -1 when uncovered.
  // cell = cells()[index / n!], permutation rank = index % n!.
  std::ptrdiff_t simplex_index_at(const Vec& x) const;

 private:
  Triangulation tri_;
  std::vector<Mat> gradients_;
  std::unordered_map<NodeKey, Vec, NodeKeyHash> values_;
  std::unordered_map<NodeKey, std::size_t, NodeKeyHash> cell_of_;
};

PiecewiseAffineField extend_p1(const DiscreteDeformation& u, const Triangulation& tri);

/**
 * Chain diagonal field on one simplex: entry j reads A at the chain vertex
 * visited just before direction j (one step later for the reversed variant),
 * scaled so that exact lattice increments map to unit columns:
 *   B * diag(1 / |A(vertex) B e_j|).
 * With this scaling the per-simplex stretch density reproduces the edge pair
 * terms of the lattice energy identically.
 */
Mat chain_lambda(const std::function<Mat(const Vec&)>& A, const Triangulation& tri,
                 const std::vector<VecI>& chain, const std::vector<int>& perm,
                 bool reversed = false);

// Pair energy of one interaction: |  |du| / (eps |A xi|) - 1 |^2.
double pair_term(const Vec& du, double eps, const Mat& A_at_base, const Vec& xi_world);

/**
 * Lattice energy: sum over cutoff shells, orbit directions xi and base nodes
 * alpha with [alpha, alpha + eps xi] inside the open domain of
 *   eps^n psi(|xi|) * | |u(alpha+eps xi) - u(alpha)| / (eps |A(alpha) xi|) - 1 |^2.
 */
double discrete_energy(const DiscreteDeformation& u, const MetricField& G, const Cutoff& psi,
                       const Domain& omega, int workers = 1);
// Same with |du| replaced by sqrt(|du|^2 + eta^2); eta = 0 recovers the exact
// energy. Used by the minimizer to smooth the norm cusp.
double discrete_energy_smoothed(const DiscreteDeformation& u, const MetricField& G,
                                const Cutoff& psi, const Domain& omega, double eta,
                                int workers = 1);

struct EnergyReport {
  double discrete = 0.0;        // E
  double representation = 0.0;  // I, never above E
  double gap = 0.0;             // E - I, nonnegative
  double boundary_bound = 0.0;  // collar sum dominating the gap
  std::vector<std::pair<long, double>> shell_terms;  // psi-weighted I per radius_sq
};

/**
 * Exact integral form of the lattice energy: for every shell, orbit family
 * (B, sbar) and translate tau in {0} union eps*V_B, the chain simplices of
 * covered cells contribute
 *   (1 / (n! n k)) * (n! / |det B|) * vol(T) * W(grad u_T * lambda_T),
 * where cells are covered when they meet Omega_{eps sqrt(n) |xi0|}. The
 * difference E - I collects exactly the interactions whose covering cells
 * were cut at the boundary, which is what the collar bound dominates.
 */
EnergyReport integral_representation(const DiscreteDeformation& u, const MetricField& G,
                                     const Cutoff& psi, const Domain& omega, int workers = 1);

// Hand-built single-shell forms kept next to the general machinery as
// cross-checks (and as the cheapest evaluators for their cases).
//
// Radius-1 form in the plane: forward plus reversed chain fields on the
// standard Kuhn triangulation, cells meeting Omega_{eps sqrt(2)}.
double nearest_pair_representation(const DiscreteDeformation& u, const MetricField& G,
                                   const Domain& omega);
// Radius-2 form in the plane: two sheared sublattices (basis [[1,-1],[1,1]],
// translates 0 and eps*(0,1)), cells meeting Omega_{2 eps}, each integral
// averaging its forward and reversed field. literal_first_pair replaces the
// first lattice's forward field by its reversed one, reproducing a printed
// variant of the formula; the default is the symmetric form the general
// representation dictates.
double diagonal_pair_representation(const DiscreteDeformation& u, const MetricField& G,
                                    const Domain& omega, bool literal_first_pair = false);

enum class CaseTag { nearest2d, nearestNd, nextNearest2d };

// Continuum chain field of the case: diag(1/|A e_j|) for nearest neighbours,
// sqrt(2) B diag(1/|A B e_j|) with B = [[1,-1],[1,1]] for the diagonal shell.
Mat case_lambda(const Mat& A, CaseTag tag);

/**
 * Limit bounds: lower bound with the relaxed density, upper bound with the
 * full density,
 *   sum over shells, orbits, families of
 *   psi(|xi0|) (1 + |V_B|) / (n k |det B|) * integral of {QW | W}(grad u * lambda_B).
 */
std::pair<double, double> limit_functional_bounds(const AnalyticMap& u, const MetricField& G,
                                                  const Cutoff& psi, const QuadratureMesh& quad,
                                                  int workers = 1);

// Limit functional of the matching single-shell cases: 2 * integral of
// QW(grad u * lambda_case). The factor 2 counts each interaction from both
// of its endpoints, exactly as the lattice sum does.
double gamma_limit_functional(const AnalyticMap& u, const MetricField& G, CaseTag tag,
                              const QuadratureMesh& quad, int workers = 1);

// Single-count deficit functional (no factor 2): zero exactly when the case
// field of the metric is realized by u up to compression.
double metric_deficit(const AnalyticMap& u, const MetricField& G, CaseTag tag,
                      const QuadratureMesh& quad, int workers = 1);

// dist^2(F, SO(n)): squared distance to proper rotations.
double rotation_distance_sq(const Mat& F);

// Continuum elastic energy integral of Wbar(grad u * A^{-1}) with
// Wbar = dist^2(., SO(n)) by default. Checks Wbar(Id) = 0 before running.
double continuum_energy(const AnalyticMap& u, const MetricField& G, const QuadratureMesh& quad,
                        const std::function<double(const Mat&)>& density = {}, int workers = 1);

struct RotationIdentity {
  double lhs = 0.0;        // diagonal-shell deficit of u under G
  double rhs = 0.0;        // nearest deficit of sqrt(2) u(R .) under R^T G(R .) R
  double difference = 0.0;
};

/**
 * Rotation identity on a disk: the diagonal-shell deficit of u equals the
 * nearest-neighbour deficit of y -> sqrt(2) u(R y) under the rotated metric
 * R^T G(R y) R, with R the rotation by pi/4. Both sides share one fan
 * quadrature whose symmetry group contains R.
 */
RotationIdentity rotation_identity_check(const AnalyticMap& u, const MetricField& G,
                                         const Domain& disk, int subdivisions = 2);

}  // namespace prelat
