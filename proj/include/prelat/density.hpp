#pragma once

#include "prelat/types.hpp"

namespace prelat {

// (r - 1)^2 and its convex envelope, which is flat on [0, 1].
double radial_penalty(double r);
double radial_envelope(double r);
double radial_envelope(const Vec& xi);

// Column-stretch density: sum over columns of (|column| - 1)^2. Frame
// invariant on the left, and separable across columns.
double stretch_density(const Mat& M);

// Quasiconvex envelope of the stretch density: compressed columns cost
// nothing, sum over columns with |column| > 1 of (|column| - 1)^2. Convex.
double relaxed_stretch_density(const Mat& M);

// Gradients with respect to the matrix entries; the stretch gradient is
// zero-guarded at vanishing columns (the density has a cusp there).
Mat stretch_density_gradient(const Mat& M);
Mat relaxed_stretch_density_gradient(const Mat& M);

}  // namespace prelat
