#include "prelat/density.hpp"

#include <cmath>

namespace prelat {

double radial_penalty(double r) {
  const double t = r - 1.0;
  return t * t;
}

double radial_envelope(double r) {
  if (r <= 1.0) return 0.0;
  const double t = r - 1.0;
  return t * t;
}

double radial_envelope(const Vec& xi) { return radial_envelope(xi.norm()); }

double stretch_density(const Mat& M) {
  double w = 0.0;
  for (int j = 0; j < M.cols(); ++j) w += radial_penalty(M.col(j).norm());
  return w;
}

double relaxed_stretch_density(const Mat& M) {
  double w = 0.0;
  for (int j = 0; j < M.cols(); ++j) w += radial_envelope(M.col(j).norm());
  return w;
}

Mat stretch_density_gradient(const Mat& M) {
  Mat g = Mat::Zero(M.rows(), M.cols());
  for (int j = 0; j < M.cols(); ++j) {
    const double r = M.col(j).norm();
    if (r > 1e-14) g.col(j) = 2.0 * (r - 1.0) / r * M.col(j);
  }
  return g;
}

Mat relaxed_stretch_density_gradient(const Mat& M) {
  Mat g = Mat::Zero(M.rows(), M.cols());
  for (int j = 0; j < M.cols(); ++j) {
    const double r = M.col(j).norm();
    if (r > 1.0) g.col(j) = 2.0 * (r - 1.0) / r * M.col(j);
  }
  return g;
}

}  // namespace prelat
