#pragma once

#include "prelat/types.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace prelat {

// Deformation with a closed-form gradient, used for continuum functionals
// and as initial data for discrete minimization.
struct AnalyticMap {
  int dim = 0;
  std::function<Vec(const Vec&)> value;
  std::function<Mat(const Vec&)> gradient;
};

inline AnalyticMap linear_map(const Mat& M) {
  if (M.rows() != M.cols() || M.rows() == 0) throw std::invalid_argument("linear_map: square matrix required");
  const int n = static_cast<int>(M.rows());
  return AnalyticMap{n, [M](const Vec& x) -> Vec { return M * x; },
                     [M](const Vec&) -> Mat { return M; }};
}

inline AnalyticMap identity_map(int n) { return linear_map(Mat::Identity(n, n)); }

inline AnalyticMap affine_map(const Mat& M, const Vec& shift) {
  if (M.rows() != shift.size()) throw std::invalid_argument("affine_map: shift size mismatch");
  const int n = static_cast<int>(M.rows());
  return AnalyticMap{n, [M, shift](const Vec& x) -> Vec { return M * x + shift; },
                     [M](const Vec&) -> Mat { return M; }};
}

// (x1 + a sin(b x2), x2): a shear whose pullback metric has unit-length
// first column for every a, b.
inline AnalyticMap sine_shear_map(double a, double b) {
  return AnalyticMap{
      2,
      [a, b](const Vec& x) -> Vec {
        Vec y(2);
        y << x[0] + a * std::sin(b * x[1]), x[1];
        return y;
      },
      [a, b](const Vec& x) -> Mat {
        Mat g(2, 2);
        g << 1.0, a * b * std::cos(b * x[1]), 0.0, 1.0;
        return g;
      }};
}

}  // namespace prelat
