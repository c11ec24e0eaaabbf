#include "prelat/metric.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace prelat {

namespace {

void check_spd(const Mat& G, const Vec& x) {
  const double scale = 1.0 + G.cwiseAbs().maxCoeff();
  if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale ||
      Eigen::LLT<Mat>(G).info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "metric is not symmetric positive definite at (" << x.transpose() << ")";
    throw std::domain_error(msg.str());
  }
}

// Brioschi formula from the metric entries E = G11, F = G12, g = G22 and
// their partials: K = (det M1 - det M2) / (E g - F^2)^2.
double brioschi(double E, double F, double g, double Eu, double Ev, double Fu, double Fv, double gu,
                double gv, double Evv, double Fuv, double guu) {
  Mat m1(3, 3), m2(3, 3);
  m1 << -Evv / 2 + Fuv - guu / 2, Eu / 2, Fu - Ev / 2,  //
      Fv - gu / 2, E, F,                                //
      gv / 2, F, g;
  m2 << 0, Ev / 2, gu / 2,  //
      Ev / 2, E, F,         //
      gu / 2, F, g;
  const double denom = E * g - F * F;
  return (m1.determinant() - m2.determinant()) / (denom * denom);
}

}  // namespace

MetricField::MetricField(int dim, std::function<Mat(const Vec&)> value)
    : dim_(dim), value_(std::move(value)) {
  if (dim_ < 1) throw std::invalid_argument("MetricField: dimension must be positive");
}

MetricField& MetricField::with_first_derivatives(std::function<Mat(const Vec&, int)> d1) {
  d1_ = std::move(d1);
  return *this;
}

MetricField& MetricField::with_second_derivatives(std::function<Mat(const Vec&, int, int)> d2) {
  d2_ = std::move(d2);
  return *this;
}

Mat MetricField::operator()(const Vec& x) const {
  if (!value_) throw std::logic_error("MetricField: empty field");
  if (x.size() != dim_) throw std::invalid_argument("MetricField: dimension mismatch");
  Mat G = value_(x);
  check_spd(G, x);
  return G;
}

Mat MetricField::d1(const Vec& x, int i) const {
  if (!d1_) throw std::logic_error("MetricField: no analytic first derivatives");
  return d1_(x, i);
}

Mat MetricField::d2(const Vec& x, int i, int j) const {
  if (!d2_) throw std::logic_error("MetricField: no analytic second derivatives");
  return d2_(x, i, j);
}

Mat sqrt_spd(const Mat& G) {
  Eigen::SelfAdjointEigenSolver<Mat> es(G);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0)
    throw std::domain_error("sqrt_spd: matrix is not positive definite");
  Mat A = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
          es.eigenvectors().transpose();
  return 0.5 * (A + A.transpose());
}

MetricField diagonal_restriction(const MetricField& G) {
  const int n = G.dimension();
  MetricField out(n, [G](const Vec& x) -> Mat { return G(x).diagonal().asDiagonal(); });
  if (G.has_analytic_derivatives()) {
    out.with_first_derivatives(
           [G](const Vec& x, int i) -> Mat { return G.d1(x, i).diagonal().asDiagonal(); })
        .with_second_derivatives(
            [G](const Vec& x, int i, int j) -> Mat { return G.d2(x, i, j).diagonal().asDiagonal(); });
  }
  return out;
}

Mat lambda_nearest(const Mat& A) {
  const int n = static_cast<int>(A.rows());
  Mat L = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) L(j, j) = 1.0 / A.col(j).norm();
  return L;
}

Mat lambda_shell(const Mat& A, const MatI& B, double xi0_norm) {
  const int n = static_cast<int>(A.rows());
  const Mat Bd = B.cast<double>();
  Mat L(n, n);
  for (int j = 0; j < n; ++j) L.col(j) = xi0_norm * Bd.col(j) / (A * Bd.col(j)).norm();
  return L;
}

double gaussian_curvature_fd(const MetricField& G, const Vec& x, double h) {
  if (G.dimension() != 2) throw std::invalid_argument("gaussian_curvature: 2d metrics only");
  if (h <= 0) throw std::invalid_argument("gaussian_curvature_fd: step must be positive");
  auto at = [&](double du, double dv) -> Mat {
    Vec y = x;
    y[0] += du;
    y[1] += dv;
    return G(y);
  };
  const Mat c = at(0, 0);
  const Mat pu = at(h, 0), mu = at(-h, 0), pv = at(0, h), mv = at(0, -h);
  const Mat pp = at(h, h), pm = at(h, -h), mp = at(-h, h), mm = at(-h, -h);
  const Mat du = (pu - mu) / (2 * h);
  const Mat dv = (pv - mv) / (2 * h);
  const Mat duu = (pu - 2 * c + mu) / (h * h);
  const Mat dvv = (pv - 2 * c + mv) / (h * h);
  const Mat duv = (pp - pm - mp + mm) / (4 * h * h);
  return brioschi(c(0, 0), c(0, 1), c(1, 1), du(0, 0), dv(0, 0), du(0, 1), dv(0, 1), du(1, 1),
                  dv(1, 1), dvv(0, 0), duv(0, 1), duu(1, 1));
}

double gaussian_curvature(const MetricField& G, const Vec& x) {
  if (G.dimension() != 2) throw std::invalid_argument("gaussian_curvature: 2d metrics only");
  if (!G.has_analytic_derivatives()) return gaussian_curvature_fd(G, x, 1e-3);
  const Mat c = G(x);
  const Mat du = G.d1(x, 0), dv = G.d1(x, 1);
  const Mat duu = G.d2(x, 0, 0), duv = G.d2(x, 0, 1), dvv = G.d2(x, 1, 1);
  return brioschi(c(0, 0), c(0, 1), c(1, 1), du(0, 0), dv(0, 0), du(0, 1), dv(0, 1), du(1, 1),
                  dv(1, 1), dvv(0, 0), duv(0, 1), duu(1, 1));
}

MetricField identity_metric(int n) {
  MetricField out(n, [n](const Vec&) -> Mat { return Mat::Identity(n, n); });
  out.with_first_derivatives([n](const Vec&, int) -> Mat { return Mat::Zero(n, n); })
      .with_second_derivatives([n](const Vec&, int, int) -> Mat { return Mat::Zero(n, n); });
  return out;
}

MetricField constant_metric(const Mat& G0) {
  check_spd(G0, Vec::Zero(G0.rows()));
  const int n = static_cast<int>(G0.rows());
  MetricField out(n, [G0](const Vec&) -> Mat { return G0; });
  out.with_first_derivatives([n](const Vec&, int) -> Mat { return Mat::Zero(n, n); })
      .with_second_derivatives([n](const Vec&, int, int) -> Mat { return Mat::Zero(n, n); });
  return out;
}

MetricField diagonal_metric(const Vec& entries) {
  Mat G0 = entries.asDiagonal();
  return constant_metric(G0);
}

MetricField flat_metric_curved_diagonal(double a, double b) {
  if (a <= 0) throw std::invalid_argument("flat_metric_curved_diagonal: a must be positive");
  MetricField out(2, [a, b](const Vec& x) -> Mat {
    const double s = x[0] + b;
    Mat G(2, 2);
    G << 0.5, 1.0, 1.0, 2.0 + a * s * s;
    return G;
  });
  out.with_first_derivatives([a, b](const Vec& x, int i) -> Mat {
       Mat D = Mat::Zero(2, 2);
       if (i == 0) D(1, 1) = 2.0 * a * (x[0] + b);
       return D;
     })
      .with_second_derivatives([a](const Vec&, int i, int j) -> Mat {
        Mat D = Mat::Zero(2, 2);
        if (i == 0 && j == 0) D(1, 1) = 2.0 * a;
        return D;
      });
  return out;
}

double curved_diagonal_curvature(double a, double b, double x1) {
  const double s = x1 + b;
  const double g = 2.0 + a * s * s;
  return -4.0 * a / (g * g);
}

MetricField unit_diagonal_shear_metric(double w0, double c) {
  auto angle = [w0, c](const Vec& x) {
    const double w = w0 + c * x[0] * x[1];
    if (!(w > 0.0 && w < M_PI / 2.0))
      throw std::domain_error("unit_diagonal_shear_metric: angle left (0, pi/2)");
    return w;
  };
  MetricField out(2, [angle](const Vec& x) -> Mat {
    const double w = angle(x);
    Mat G(2, 2);
    G << 1.0, std::cos(w), std::cos(w), 1.0;
    return G;
  });
  out.with_first_derivatives([angle, c](const Vec& x, int i) -> Mat {
       const double w = angle(x);
       const double wi = (i == 0) ? c * x[1] : c * x[0];
       Mat D = Mat::Zero(2, 2);
       D(0, 1) = D(1, 0) = -std::sin(w) * wi;
       return D;
     })
      .with_second_derivatives([angle, c](const Vec& x, int i, int j) -> Mat {
        const double w = angle(x);
        const double wi = (i == 0) ? c * x[1] : c * x[0];
        const double wj = (j == 0) ? c * x[1] : c * x[0];
        const double wij = (i != j) ? c : 0.0;
        Mat D = Mat::Zero(2, 2);
        D(0, 1) = D(1, 0) = -std::cos(w) * wi * wj - std::sin(w) * wij;
        return D;
      });
  return out;
}

MetricField pullback_metric(const AnalyticMap& u) {
  if (!u.gradient) throw std::invalid_argument("pullback_metric: map needs a gradient");
  return MetricField(u.dim, [u](const Vec& x) -> Mat {
    const Mat g = u.gradient(x);
    return g.transpose() * g;
  });
}

}  // namespace prelat
