#pragma once

#include "prelat/geometry.hpp"
#include "prelat/types.hpp"

#include <functional>
#include <vector>

namespace prelat {

/**
 * Midpoint quadrature over a simplicial cover of the domain, with resolution
 * chosen independently of any lattice spacing. Midpoint per simplex is exact
 * for integrands that are constant on each simplex, which is all the
 * continuum functionals need once gradients are piecewise constant.
 */
struct QuadratureMesh {
  int dim = 0;
  std::vector<Vec> points;      // simplex centroids
  std::vector<double> volumes;  // matching simplex volumes

  // Kuhn-type grid over a box, resolution cells per axis.
  static QuadratureMesh box_grid(const Domain& box, int resolution);
  // Fan from the vertex centroid of a convex polygon, each fan triangle
  // split uniformly; for a regular polygon the mesh inherits every symmetry
  // of the vertex set, which is what the rotation identity check relies on.
  static QuadratureMesh polygon_fan(const Domain& polygon, int subdivisions);
  static QuadratureMesh over(const Domain& domain, int resolution);

  double total_volume() const;
};

double integrate(const QuadratureMesh& mesh, const std::function<double(const Vec&)>& f,
                 int workers = 1);

/**
 * P1 nodal mesh used by the continuum minimizer: explicit nodes, simplices as
 * node-index tuples, and per-simplex hat-function gradients.
 */
struct P1Mesh {
  int dim = 0;
  std::vector<Vec> nodes;
  std::vector<std::vector<int>> simplices;       // n+1 node ids each
  std::vector<double> volumes;
  std::vector<Vec> centroids;
  std::vector<std::vector<Vec>> hat_gradients;   // per simplex, per local node

  static P1Mesh box_grid(const Domain& box, int resolution);
  static P1Mesh polygon_fan(const Domain& polygon, int subdivisions);

  // Gradient of the P1 interpolant with nodal values v on one simplex.
  Mat gradient(const std::vector<Vec>& v, std::size_t simplex) const;
};

}  // namespace prelat
