#pragma once

#include "prelat/types.hpp"

#include <functional>

namespace prelat::testing {

/**
 * Test-only upper bound on the quasiconvex envelope of a 2x2 density f at M:
 * minimizes the average of f(M + grad phi) over piecewise affine phi on a
 * grid x grid split of the unit square with phi = 0 on the boundary.
 * Multi-start local descent (zero start, seeded random starts, and sawtooth
 * starts aimed at compressive columns), smallest value wins. Independent of
 * the library's meshes and optimizer on purpose; shares only the density and
 * its gradient with the code under test.
 */
double quasiconvexify_oracle(const std::function<double(const Mat&)>& f,
                             const std::function<Mat(const Mat&)>& df, const Mat& M, int grid);

}  // namespace prelat::testing
