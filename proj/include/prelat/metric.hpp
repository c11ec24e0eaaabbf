#pragma once

#include "prelat/fields.hpp"
#include "prelat/types.hpp"

#include <functional>

namespace prelat {

/**
 * Pointwise SPD prestrain metric G on the domain. Evaluation goes through an
 * SPD check (symmetry plus a Cholesky factorization); analytic first and
 * second partial derivatives are optional hooks used by the curvature
 * routines when present.
 */
class MetricField {
 public:
  MetricField() = default;
  MetricField(int dim, std::function<Mat(const Vec&)> value);

  MetricField& with_first_derivatives(std::function<Mat(const Vec&, int)> d1);
  MetricField& with_second_derivatives(std::function<Mat(const Vec&, int, int)> d2);

  int dimension() const { return dim_; }
  Mat operator()(const Vec& x) const;  // SPD-checked, throws std::domain_error otherwise
  bool has_analytic_derivatives() const { return static_cast<bool>(d1_) && static_cast<bool>(d2_); }
  Mat d1(const Vec& x, int i) const;
  Mat d2(const Vec& x, int i, int j) const;

 private:
  int dim_ = 0;
  std::function<Mat(const Vec&)> value_;
  std::function<Mat(const Vec&, int)> d1_;
  std::function<Mat(const Vec&, int, int)> d2_;
};

// Unique SPD square root, by eigendecomposition.
Mat sqrt_spd(const Mat& G);

// Cached evaluator for A = sqrt(G); the discrete energy reads A at every
// lattice node and the representation reads it at every chain vertex.
class MetricSqrt {
 public:
  explicit MetricSqrt(const MetricField& G) : G_(&G) {}
  Mat operator()(const Vec& x) const { return sqrt_spd((*G_)(x)); }
  int dimension() const { return G_->dimension(); }

 private:
  const MetricField* G_;
};

// Diagonal part diag(G_11, ..., G_nn): the part of the metric a
// nearest-neighbour interaction can see. Derivative hooks carry over.
MetricField diagonal_restriction(const MetricField& G);

// diag(1/|A e_1|, ..., 1/|A e_n|).
Mat lambda_nearest(const Mat& A);
// |xi0| * B * diag(1/|A B e_1|, ..., 1/|A B e_n|) for an integer basis B
// whose columns all have squared length |xi0|^2.
Mat lambda_shell(const Mat& A, const MatI& B, double xi0_norm);

/**
 * Gaussian curvature of a 2D metric via the Brioschi formula. The
 * finite-difference variant uses second-order central differences with step h
 * on every entry; the default variant prefers analytic derivative hooks and
 * falls back to h = 1e-3.
 */
double gaussian_curvature_fd(const MetricField& G, const Vec& x, double h);
double gaussian_curvature(const MetricField& G, const Vec& x);

// Builtin metrics.
MetricField identity_metric(int n);
MetricField constant_metric(const Mat& G0);
MetricField diagonal_metric(const Vec& entries);

// [[1/2, 1], [1, g]], g(x) = 2 + a (x1 + b)^2, a != 0, g > 2 away from -b.
// Gaussian-flat for every (a, b), yet its diagonal part diag(1/2, g) has
// curvature (-2 g g'' + g'^2) / (2 g^2) = -4a / g^2, bounded away from zero.
MetricField flat_metric_curved_diagonal(double a, double b);
// Curvature of the diagonal part of the metric above, in closed form.
double curved_diagonal_curvature(double a, double b, double x1);

// [[1, cos w], [cos w, 1]] with w = w0 + c x1 x2. Unit diagonal: every
// nearest-neighbour length matches the identity map, while the full metric
// has curvature -w_{x1 x2} / sin w = -c / sin w. Throws when w leaves
// (0, pi/2) at an evaluation point.
MetricField unit_diagonal_shear_metric(double w0, double c);

// Pullback (grad u)^T grad u of an analytic deformation: a realizable metric
// by construction.
MetricField pullback_metric(const AnalyticMap& u);

}  // namespace prelat
