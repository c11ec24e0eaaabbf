#include "prelat/minimize.hpp"

#include "prelat/density.hpp"
#include "prelat/lattice_families.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <stdexcept>

namespace prelat {

DescentReport lbfgs(const std::function<double(const Vec&, Vec&)>& value_and_gradient, Vec& x,
                    const DescentOptions& options, const std::function<void(Vec&)>& project) {
  if (options.memory < 1) throw std::invalid_argument("lbfgs: memory must be >= 1");
  if (options.max_iterations < 0) throw std::invalid_argument("lbfgs: negative iteration budget");
  if (project) project(x);

  const double c1 = 1e-4;
  Vec g(x.size()), g_new(x.size());
  double f = value_and_gradient(x, g);

  std::deque<std::pair<Vec, Vec>> history;  // (s, y)
  DescentReport report;
  report.value = f;
  report.gradient_norm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (report.gradient_norm <= options.gradient_tolerance) {
      report.converged = true;
      break;
    }

    // Two-loop recursion.
    Vec d = -g;
    std::vector<double> alpha(history.size());
    for (std::size_t i = history.size(); i-- > 0;) {
      const auto& [s, y] = history[i];
      const double rho = 1.0 / y.dot(s);
      alpha[i] = rho * s.dot(d);
      d -= alpha[i] * y;
    }
    if (!history.empty()) {
      const auto& [s, y] = history.back();
      d *= s.dot(y) / y.dot(y);
    }
    for (std::size_t i = 0; i < history.size(); ++i) {
      const auto& [s, y] = history[i];
      const double rho = 1.0 / y.dot(s);
      d += (alpha[i] - rho * y.dot(d)) * s;
    }

    double slope = g.dot(d);
    if (slope >= 0) {  // not a descent direction; fall back to steepest descent
      history.clear();
      d = -g;
      slope = g.dot(d);
      if (slope >= 0) break;  // gradient numerically zero
    }

    double t = 1.0;
    double f_new = 0.0;
    bool accepted = false;
    Vec x_new;
    for (int ls = 0; ls < 48; ++ls) {
      x_new = x + t * d;
      if (project) project(x_new);
      f_new = value_and_gradient(x_new, g_new);
      if (f_new <= f + c1 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;

    const Vec s = x_new - x;
    const Vec y = g_new - g;
    // Curvature guard: skip degenerate pairs instead of corrupting the
    // inverse Hessian model.
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      history.emplace_back(s, y);
      if (static_cast<int>(history.size()) > options.memory) history.pop_front();
    }
    x = std::move(x_new);
    g = g_new;
    f = f_new;
    report.iterations = iter + 1;
    report.value = f;
    report.gradient_norm = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
  }
  if (report.gradient_norm <= options.gradient_tolerance) report.converged = true;
  return report;
}

std::function<Vec(const Vec&)> center_stretch_map(const MetricField& G, const Domain& omega) {
  const Mat A0 = sqrt_spd(G(omega.center()));
  return [A0](const Vec& x) -> Vec { return A0 * x; };
}

namespace {

std::function<void(Vec&)> gauge_projection(Gauge gauge, int dim, std::size_t node_count,
                                           const Vec& x0) {
  switch (gauge) {
    case Gauge::none:
      return {};
    case Gauge::pin_mean: {
      Vec target = Vec::Zero(dim);
      for (std::size_t i = 0; i < node_count; ++i) target += x0.segment(i * dim, dim);
      if (node_count) target /= static_cast<double>(node_count);
      return [dim, node_count, target](Vec& x) {
        Vec mean = Vec::Zero(dim);
        for (std::size_t i = 0; i < node_count; ++i) mean += x.segment(i * dim, dim);
        if (node_count) mean /= static_cast<double>(node_count);
        const Vec delta = target - mean;
        for (std::size_t i = 0; i < node_count; ++i) x.segment(i * dim, dim) += delta;
      };
    }
    case Gauge::pin_first_node: {
      const Vec target = x0.size() ? Vec(x0.head(dim)) : Vec::Zero(dim);
      return [dim, node_count, target](Vec& x) {
        if (!node_count) return;
        const Vec delta = target - x.head(dim);
        for (std::size_t i = 0; i < node_count; ++i) x.segment(i * dim, dim) += delta;
      };
    }
  }
  return {};
}

}  // namespace

DiscreteMinimum minimize_discrete(const MetricField& G, const Cutoff& psi, const Domain& omega,
                                  double eps, const std::function<Vec(const Vec&)>& init,
                                  const DescentOptions& options) {
  const int n = omega.dimension();
  psi.validate(n);
  DiscreteDeformation u = DiscreteDeformation::sample(omega, eps, init);
  const std::vector<NodeKey> keys = u.node_keys();
  const std::size_t count = keys.size();
  std::unordered_map<NodeKey, std::size_t, NodeKeyHash> ordinal;
  ordinal.reserve(count);
  for (std::size_t i = 0; i < count; ++i) ordinal.emplace(keys[i], i);

  // Interactions with endpoint ordinals and reference lengths, frozen once.
  struct Pair {
    std::size_t from, to;
    double ref_len;  // eps |A(node) xi|
    double weight;   // eps^n psi(|xi|)
  };
  double epsn = 1.0;
  for (int i = 0; i < n; ++i) epsn *= eps;
  std::vector<Pair> pairs;
  {
    std::unordered_map<NodeKey, Mat, NodeKeyHash> sqrt_at;
    sqrt_at.reserve(count);
    for (const NodeKey& key : keys)
      sqrt_at.emplace(key, sqrt_spd(G(u.node_position(key.index()))));
    for (const auto& [r2, w] : psi.weights) {
      for (const VecI& zeta : enumerate_shell(n, r2).members)
        for (const VecI& xi : signed_orbit(zeta))
          for (const VecI& alpha : interacting_nodes(xi, eps, omega)) {
            const VecI beta = alpha + xi;
            Pair p;
            p.from = ordinal.at(NodeKey(alpha));
            p.to = ordinal.at(NodeKey(beta));
            p.ref_len = eps * (sqrt_at.at(NodeKey(alpha)) * xi.cast<double>()).norm();
            p.weight = epsn * w;
            pairs.push_back(p);
          }
    }
  }

  Vec x(count * n);
  for (std::size_t i = 0; i < count; ++i) x.segment(i * n, n) = u.at(keys[i]);

  const double eta = options.smoothing_scale * eps;
  const double eta2 = eta * eta;
  auto fg = [&](const Vec& v, Vec& grad) {
    grad.setZero(v.size());
    double f = 0.0;
    for (const Pair& p : pairs) {
      const Vec du = v.segment(p.to * n, n) - v.segment(p.from * n, n);
      const double len = std::sqrt(du.squaredNorm() + eta2);
      const double t = len / p.ref_len - 1.0;
      f += p.weight * t * t;
      const Vec dfd = (2.0 * p.weight * t / (p.ref_len * len)) * du;
      grad.segment(p.to * n, n) += dfd;
      grad.segment(p.from * n, n) -= dfd;
    }
    return f;
  };

  DescentReport report = lbfgs(fg, x, options, gauge_projection(options.gauge, n, count, x));

  for (std::size_t i = 0; i < count; ++i) u.set(keys[i].index(), x.segment(i * n, n));
  // Report the exact energy of the iterate; the eta-smoothed objective is a
  // descent device only.
  report.value = discrete_energy(u, G, psi, omega, options.workers);
  return DiscreteMinimum{report, std::move(u)};
}

AnalyticMap ContinuumMinimum::as_map() const {
  if (mesh.dim < 1) throw std::logic_error("ContinuumMinimum::as_map: empty mesh");
  auto m = std::make_shared<P1Mesh>(mesh);
  auto v = std::make_shared<std::vector<Vec>>(nodal_values);
  const int n = mesh.dim;
  // Point location by barycentric test over all simplices; fine at the mesh
  // sizes the minimizer handles.
  auto locate = [m](const Vec& x) -> std::ptrdiff_t {
    for (std::size_t s = 0; s < m->simplices.size(); ++s) {
      const auto& ids = m->simplices[s];
      const auto& hats = m->hat_gradients[s];
      const Vec rel = x - m->nodes[static_cast<std::size_t>(ids[0])];
      bool inside = true;
      double b0 = 1.0;
      for (std::size_t k = 1; k < ids.size() && inside; ++k) {
        const double bk = hats[k].dot(rel);
        b0 -= bk;
        inside = bk >= -1e-10;
      }
      if (inside && b0 >= -1e-10) return static_cast<std::ptrdiff_t>(s);
    }
    return -1;
  };
  AnalyticMap out;
  out.dim = n;
  out.value = [m, v, locate, n](const Vec& x) -> Vec {
    const std::ptrdiff_t s = locate(x);
    if (s < 0) throw std::out_of_range("ContinuumMinimum map: point outside the mesh");
    const auto& ids = m->simplices[static_cast<std::size_t>(s)];
    const auto& hats = m->hat_gradients[static_cast<std::size_t>(s)];
    const Vec rel = x - m->nodes[static_cast<std::size_t>(ids[0])];
    Vec acc = Vec::Zero(n);
    double b0 = 1.0;
    for (std::size_t k = 1; k < ids.size(); ++k) {
      const double bk = hats[k].dot(rel);
      b0 -= bk;
      acc += bk * (*v)[static_cast<std::size_t>(ids[k])];
    }
    return acc + b0 * (*v)[static_cast<std::size_t>(ids[0])];
  };
  out.gradient = [m, v, locate](const Vec& x) -> Mat {
    const std::ptrdiff_t s = locate(x);
    if (s < 0) throw std::out_of_range("ContinuumMinimum map: point outside the mesh");
    return m->gradient(*v, static_cast<std::size_t>(s));
  };
  return out;
}

ContinuumMinimum minimize_continuum(const MetricField& G, CaseTag tag, const Domain& omega,
                                    int resolution, const std::function<Vec(const Vec&)>& init,
                                    const DescentOptions& options) {
  const int n = omega.dimension();
  ContinuumMinimum out;
  out.mesh = omega.is_box() ? P1Mesh::box_grid(omega, resolution)
                            : P1Mesh::polygon_fan(omega, resolution);
  const P1Mesh& mesh = out.mesh;
  const std::size_t node_count = mesh.nodes.size();
  const std::size_t simplex_count = mesh.simplices.size();

  // The case field is a fixed matrix per simplex (evaluated at centroids).
  std::vector<Mat> lambdas(simplex_count);
  for (std::size_t s = 0; s < simplex_count; ++s)
    lambdas[s] = case_lambda(sqrt_spd(G(mesh.centroids[s])), tag);

  Vec x(node_count * n);
  for (std::size_t i = 0; i < node_count; ++i) x.segment(i * n, n) = init(mesh.nodes[i]);

  const double delta = options.regularization;
  auto fg = [&](const Vec& v, Vec& grad) {
    grad.setZero(v.size());
    double f = 0.0;
    Mat gu(n, n);
    for (std::size_t s = 0; s < simplex_count; ++s) {
      const auto& ids = mesh.simplices[s];
      const auto& hats = mesh.hat_gradients[s];
      gu.setZero();
      for (std::size_t k = 0; k < ids.size(); ++k)
        gu += v.segment(static_cast<std::size_t>(ids[k]) * n, n) * hats[k].transpose();
      const double vol = mesh.volumes[s];
      const Mat M = gu * lambdas[s];
      f += 2.0 * vol * relaxed_stretch_density(M);
      const Mat dM = 2.0 * vol * relaxed_stretch_density_gradient(M);
      Mat dgu = dM * lambdas[s].transpose();
      if (delta > 0) {
        f += delta * vol * gu.squaredNorm();
        dgu += 2.0 * delta * vol * gu;
      }
      for (std::size_t k = 0; k < ids.size(); ++k)
        grad.segment(static_cast<std::size_t>(ids[k]) * n, n) += dgu * hats[k];
    }
    return f;
  };

  out.report = lbfgs(fg, x, options, gauge_projection(options.gauge, n, node_count, x));

  out.nodal_values.resize(node_count);
  for (std::size_t i = 0; i < node_count; ++i) out.nodal_values[i] = x.segment(i * n, n);
  // Reported value excludes the optional regularization term.
  if (delta > 0) {
    double f = 0.0;
    Mat gu(n, n);
    for (std::size_t s = 0; s < simplex_count; ++s) {
      const auto& ids = mesh.simplices[s];
      const auto& hats = mesh.hat_gradients[s];
      gu.setZero();
      for (std::size_t k = 0; k < ids.size(); ++k)
        gu += out.nodal_values[static_cast<std::size_t>(ids[k])] * hats[k].transpose();
      f += 2.0 * mesh.volumes[s] * relaxed_stretch_density(gu * lambdas[s]);
    }
    out.report.value = f;
  }
  return out;
}

Cutoff cutoff_for_case(CaseTag tag) {
  switch (tag) {
    case CaseTag::nearest2d:
    case CaseTag::nearestNd:
      return Cutoff::nearest();
    case CaseTag::nextNearest2d:
      return Cutoff::next_nearest();
  }
  throw std::logic_error("cutoff_for_case: unknown case");
}

StudyResult gamma_study(const MetricField& G, CaseTag tag, const Domain& omega,
                        const std::vector<double>& eps_list, int resolution,
                        const DescentOptions& options) {
  if (eps_list.empty()) throw std::invalid_argument("gamma_study: empty eps list");
  for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (!(eps_list[i] > eps_list[i + 1]))
      throw std::invalid_argument("gamma_study: eps list must decrease");
  const int n = omega.dimension();
  const Cutoff psi = cutoff_for_case(tag);
  const auto fallback = center_stretch_map(G, omega);

  StudyResult result;
  DiscreteDeformation prev(1.0, n);
  bool have_prev = false;
  for (double eps : eps_list) {
    std::function<Vec(const Vec&)> init = fallback;
    std::unique_ptr<PiecewiseAffineField> carried;
    if (have_prev) {
      // Warm start: P1 interpolation of the previous minimizer where its
      // covered cells reach, initial map elsewhere (a thin boundary band).
      const double m = prev.eps() * std::sqrt(static_cast<double>(n));
      carried = std::make_unique<PiecewiseAffineField>(
          triangulate_covered(omega, prev.eps(), MatI::Identity(n, n), VecI::Zero(n), m), prev);
      init = [&carried, &fallback](const Vec& x) -> Vec {
        return carried->covers(x) ? carried->evaluate(x) : fallback(x);
      };
    }
    DiscreteMinimum level = minimize_discrete(G, psi, omega, eps, init, options);
    result.rows.push_back(
        {eps, level.report.value, level.report.iterations, level.report.gradient_norm});
    prev = std::move(level.u);
    have_prev = true;
  }

  if (result.rows.size() >= 2) {
    const StudyRow& a = result.rows[result.rows.size() - 2];
    const StudyRow& b = result.rows.back();
    // First-order fit v(eps) = v* + C eps through the last two levels.
    result.extrapolated = (b.minimum * a.eps - a.minimum * b.eps) / (a.eps - b.eps);
  } else {
    result.extrapolated = result.rows.back().minimum;
  }

  DescentOptions copts = options;
  result.continuum_minimum =
      minimize_continuum(G, tag, omega, resolution, fallback, copts).report.value;
  return result;
}

}  // namespace prelat
