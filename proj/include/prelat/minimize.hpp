#pragma once

#include "prelat/energies.hpp"
#include "prelat/fields.hpp"
#include "prelat/geometry.hpp"
#include "prelat/metric.hpp"
#include "prelat/quadrature.hpp"
#include "prelat/types.hpp"

#include <functional>
#include <vector>

namespace prelat {

// Both energies are rigid-motion invariant, so the minimizer removes the
// translation null space explicitly: either the mean nodal value or the
// first node is pinned after every accepted step.
enum class Gauge { none, pin_mean, pin_first_node };

struct DescentOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;  // max-norm of the analytic gradient
  int memory = 10;                   // quasi-Newton history length
  double smoothing_scale = 1e-12;    // eta = smoothing_scale * eps
  double regularization = 0.0;      // optional delta * |grad u|^2 term (continuum)
  Gauge gauge = Gauge::pin_mean;
  int workers = 1;
};

struct DescentReport {
  double value = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

// Limited-memory quasi-Newton descent with Armijo backtracking on a flat
// parameter vector. `project` is applied after every accepted step (gauge
// fixing). Accepted values never increase.
DescentReport lbfgs(const std::function<double(const Vec&, Vec&)>& value_and_gradient, Vec& x,
                    const DescentOptions& options, const std::function<void(Vec&)>& project = {});

struct DiscreteMinimum {
  DescentReport report;
  DiscreteDeformation u;
};

// Default initial deformation x -> A(center) x.
std::function<Vec(const Vec&)> center_stretch_map(const MetricField& G, const Domain& omega);

/**
 * Descent on the lattice energy over all nodal values in the domain. The
 * objective smooths the increment norm with eta = smoothing_scale * eps; the
 * reported value is the unsmoothed energy at the final iterate, so the
 * smoothing bias never leaks into results.
 */
DiscreteMinimum minimize_discrete(const MetricField& G, const Cutoff& psi, const Domain& omega,
                                  double eps, const std::function<Vec(const Vec&)>& init,
                                  const DescentOptions& options = {});

struct ContinuumMinimum {
  DescentReport report;
  P1Mesh mesh;
  std::vector<Vec> nodal_values;

  AnalyticMap as_map() const;  // P1 interpolant (box meshes)
};

/**
 * Descent on the limit functional 2 * integral QW(grad u * lambda_case) over
 * P1 fields on a fixed mesh, no boundary conditions. The relaxed density
 * makes compression free; minima report the residual stretch only.
 */
ContinuumMinimum minimize_continuum(const MetricField& G, CaseTag tag, const Domain& omega,
                                    int resolution, const std::function<Vec(const Vec&)>& init,
                                    const DescentOptions& options = {});

struct StudyRow {
  double eps = 0.0;
  double minimum = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
};

struct StudyResult {
  std::vector<StudyRow> rows;       // one per eps, coarse to fine
  double extrapolated = 0.0;        // first-order Richardson from the last two rows
  double continuum_minimum = 0.0;   // limit-functional minimum on the reference mesh
};

/**
 * Minimum-energy scan across a decreasing eps list for one interaction case,
 * warm-starting each level from the previous minimizer (P1-resampled where
 * covered, initial map elsewhere), with the continuum minimum of the limit
 * functional for comparison. The cutoff must match the case tag.
 */
StudyResult gamma_study(const MetricField& G, CaseTag tag, const Domain& omega,
                        const std::vector<double>& eps_list, int resolution,
                        const DescentOptions& options = {});

Cutoff cutoff_for_case(CaseTag tag);

}  // namespace prelat
