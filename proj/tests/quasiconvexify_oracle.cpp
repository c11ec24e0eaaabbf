#include "quasiconvexify_oracle.hpp"

#include "prelat/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace prelat::testing {

namespace {

// Dirichlet P1 field on the unit square: (grid-1)^2 interior nodes with two
// components each, boundary pinned to zero. Cells split into lower and upper
// triangles along the main diagonal.
struct Patch {
  int grid;
  double h;
  const Mat& M;
  const std::function<double(const Mat&)>& f;
  const std::function<Mat(const Mat&)>& df;

  int dof() const { return 2 * (grid - 1) * (grid - 1); }

  // phi component c at node (i, j); boundary nodes are zero.
  double value(const Eigen::VectorXd& x, int i, int j, int c) const {
    if (i <= 0 || j <= 0 || i >= grid || j >= grid) return 0.0;
    return x[2 * ((j - 1) * (grid - 1) + (i - 1)) + c];
  }

  void add(Eigen::VectorXd& g, int i, int j, const Vec& v) const {
    if (i <= 0 || j <= 0 || i >= grid || j >= grid) return;
    const int base = 2 * ((j - 1) * (grid - 1) + (i - 1));
    g[base] += v[0];
    g[base + 1] += v[1];
  }

  double energy_gradient(const Eigen::VectorXd& x, Eigen::VectorXd* g) const {
    if (g) g->setZero();
    const double w = h * h / 2.0;
    double total = 0.0;
    Vec a(2), b(2), c(2), d(2);
    Mat F(2, 2);
    for (int j = 0; j < grid; ++j)
      for (int i = 0; i < grid; ++i) {
        a << value(x, i, j, 0), value(x, i, j, 1);
        b << value(x, i + 1, j, 0), value(x, i + 1, j, 1);
        c << value(x, i + 1, j + 1, 0), value(x, i + 1, j + 1, 1);
        d << value(x, i, j + 1, 0), value(x, i, j + 1, 1);

        F.col(0) = (b - a) / h;
        F.col(1) = (c - b) / h;
        total += w * f(M + F);
        if (g) {
          const Mat dF = w / h * df(M + F);
          add(*g, i, j, -dF.col(0));
          add(*g, i + 1, j, dF.col(0) - dF.col(1));
          add(*g, i + 1, j + 1, dF.col(1));
        }

        F.col(0) = (c - d) / h;
        F.col(1) = (d - a) / h;
        total += w * f(M + F);
        if (g) {
          const Mat dF = w / h * df(M + F);
          add(*g, i, j, -dF.col(1));
          add(*g, i + 1, j + 1, dF.col(0));
          add(*g, i, j + 1, dF.col(1) - dF.col(0));
        }
      }
    return total;
  }
};

// Plain two-loop quasi-Newton descent, written for this oracle alone.
double descend(const Patch& patch, Eigen::VectorXd x) {
  const int memory = 8;
  Eigen::VectorXd g(x.size()), g_new(x.size());
  double value = patch.energy_gradient(x, &g);
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;

  for (int iter = 0; iter < 800; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() < 1e-11 * (1.0 + std::abs(value))) break;

    Eigen::VectorXd q = -g;
    std::vector<double> alpha(pairs.size());
    for (std::size_t k = pairs.size(); k-- > 0;) {
      const auto& [s, y] = pairs[k];
      alpha[k] = s.dot(q) / y.dot(s);
      q -= alpha[k] * y;
    }
    if (!pairs.empty()) {
      const auto& [s, y] = pairs.back();
      q *= y.dot(s) / y.dot(y);
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto& [s, y] = pairs[k];
      q += (alpha[k] - y.dot(q) / y.dot(s)) * s;
    }

    double slope = g.dot(q);
    if (slope >= 0.0) {
      pairs.clear();
      q = -g;
      slope = -g.squaredNorm();
      if (slope >= 0.0) break;
    }

    double t = 1.0;
    double value_new = value;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving) {
      value_new = patch.energy_gradient(x + t * q, &g_new);
      if (value_new <= value + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd s = t * q;
    const Eigen::VectorXd y = g_new - g;
    if (y.dot(s) > 1e-12 * s.norm() * y.norm()) {
      pairs.emplace_back(s, y);
      if (pairs.size() > static_cast<std::size_t>(memory)) pairs.pop_front();
    }
    x += s;
    g = g_new;
    value = value_new;
  }
  return value;
}

}  // namespace

double quasiconvexify_oracle(const std::function<double(const Mat&)>& f,
                             const std::function<Mat(const Mat&)>& df, const Mat& M, int grid) {
  if (grid < 2) throw std::invalid_argument("quasiconvexify_oracle: grid must be at least 2");
  if (M.rows() != 2 || M.cols() != 2)
    throw std::invalid_argument("quasiconvexify_oracle: 2x2 matrices only");
  const Patch patch{grid, 1.0 / grid, M, f, df};
  const int dof = patch.dof();

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Zero(dof));

  SplitMix64 rng(20240517);
  const double amp = 1.0 / grid;
  for (int s = 0; s < 8; ++s) {
    Eigen::VectorXd x(dof);
    for (int k = 0; k < dof; ++k) x[k] = rng.uniform(-amp, amp);
    starts.push_back(x);
  }

  // Sawtooth starts: a compressive column j relaxes by oscillating the
  // orthogonal displacement component along direction j; seed that shape at a
  // few periods and let descent shape the boundary layer.
  for (int j = 0; j < 2; ++j) {
    const Vec col = M.col(j);
    const double r = col.norm();
    if (r >= 1.0) continue;
    const double t = std::sqrt(1.0 - r * r);
    Vec perp(2);
    if (r > 1e-12)
      perp << -col[1] / r, col[0] / r;
    else
      perp << (j == 0 ? 0.0 : 1.0), (j == 0 ? 1.0 : 0.0);
    for (int period = 2; period <= 6; period += 2) {
      if (period > grid) break;
      Eigen::VectorXd x = Eigen::VectorXd::Zero(dof);
      for (int jj = 1; jj < grid; ++jj)
        for (int ii = 1; ii < grid; ++ii) {
          const int along = (j == 0) ? ii : jj;
          const int phase = along % period;
          const double saw =
              (phase <= period / 2) ? phase * patch.h : (period - phase) * patch.h;
          const int base = 2 * ((jj - 1) * (grid - 1) + (ii - 1));
          x[base] += t * saw * perp[0];
          x[base + 1] += t * saw * perp[1];
        }
      starts.push_back(x);
    }
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& start : starts) best = std::min(best, descend(patch, start));
  return best;
}

}  // namespace prelat::testing
