#include "prelat/quadrature.hpp"

#include "prelat/parallel.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace prelat {

namespace {

// Volume and hat-function gradients of one simplex given as vertex columns.
std::pair<double, std::vector<Vec>> simplex_hats(const Mat& verts) {
  const int n = static_cast<int>(verts.rows());
  Mat E(n, n);
  for (int j = 0; j < n; ++j) E.col(j) = verts.col(j + 1) - verts.col(0);
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= j;
  const double vol = std::abs(E.determinant()) / f;
  const Mat Einv = E.inverse();
  std::vector<Vec> hats(n + 1, Vec::Zero(n));
  for (int j = 1; j <= n; ++j) {
    hats[j] = Einv.row(j - 1).transpose();
    hats[0] -= hats[j];
  }
  return {vol, std::move(hats)};
}

int fan_level_for(int resolution) {
  // Box meshes get resolution^n cells; a fan level L gives sides * 4^L
  // triangles, so match the order of magnitude and cap the growth.
  const int level = static_cast<int>(std::lround(std::log2(std::max(1, resolution)))) - 2;
  return std::min(6, std::max(0, level));
}

}  // namespace

QuadratureMesh QuadratureMesh::box_grid(const Domain& box, int resolution) {
  if (!box.is_box()) throw std::invalid_argument("box_grid: box domain required");
  if (resolution < 1) throw std::invalid_argument("box_grid: resolution must be >= 1");
  const int n = box.dimension();
  const Vec lo = box.lower();
  const Vec h = (box.upper() - box.lower()) / resolution;
  double cellvol = 1.0;
  for (int i = 0; i < n; ++i) cellvol *= h[i];
  const auto& perms = permutations(n);
  const double vol = cellvol / static_cast<double>(perms.size());

  QuadratureMesh mesh;
  mesh.dim = n;
  VecI cell = VecI::Zero(n);
  Vec v(n), centroid(n);
  while (true) {
    for (const auto& perm : perms) {
      for (int i = 0; i < n; ++i) v[i] = lo[i] + h[i] * cell[i];
      centroid = v;
      for (int step = 0; step < n; ++step) {
        v[perm[step]] += h[perm[step]];
        centroid += v;
      }
      mesh.points.push_back(centroid / (n + 1.0));
      mesh.volumes.push_back(vol);
    }
    int axis = 0;
    while (axis < n && cell[axis] == resolution - 1) {
      cell[axis] = 0;
      ++axis;
    }
    if (axis == n) break;
    cell[axis] += 1;
  }
  return mesh;
}

QuadratureMesh QuadratureMesh::polygon_fan(const Domain& polygon, int subdivisions) {
  if (polygon.is_box()) throw std::invalid_argument("polygon_fan: polygon domain required");
  if (subdivisions < 0) throw std::invalid_argument("polygon_fan: negative subdivision level");
  const auto& verts = polygon.vertices();
  const Vec c = polygon.center();
  const Eigen::Vector2d center(c[0], c[1]);
  const int m = 1 << subdivisions;

  QuadratureMesh mesh;
  mesh.dim = 2;
  for (std::size_t t = 0; t < verts.size(); ++t) {
    const Eigen::Vector2d A = center;
    const Eigen::Vector2d B = verts[t];
    const Eigen::Vector2d C = verts[(t + 1) % verts.size()];
    const double area =
        std::abs((B - A).x() * (C - A).y() - (B - A).y() * (C - A).x()) / 2.0 / (m * m);
    auto point = [&](int i, int j) -> Eigen::Vector2d {
      return A + (static_cast<double>(i) / m) * (B - A) + (static_cast<double>(j) / m) * (C - A);
    };
    auto push = [&](const Eigen::Vector2d& p, const Eigen::Vector2d& q, const Eigen::Vector2d& r) {
      Vec centroid(2);
      centroid << (p.x() + q.x() + r.x()) / 3.0, (p.y() + q.y() + r.y()) / 3.0;
      mesh.points.push_back(std::move(centroid));
      mesh.volumes.push_back(area);
    };
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m - i; ++j) {
        push(point(i, j), point(i + 1, j), point(i, j + 1));
        if (i + j < m - 1) push(point(i + 1, j), point(i + 1, j + 1), point(i, j + 1));
      }
  }
  return mesh;
}

QuadratureMesh QuadratureMesh::over(const Domain& domain, int resolution) {
  if (domain.is_box()) return box_grid(domain, resolution);
  return polygon_fan(domain, fan_level_for(resolution));
}

double QuadratureMesh::total_volume() const {
  double v = 0.0;
  for (double w : volumes) v += w;
  return v;
}

double integrate(const QuadratureMesh& mesh, const std::function<double(const Vec&)>& f,
                 int workers) {
  return chunked_sum(mesh.points.size(), workers, [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += mesh.volumes[i] * f(mesh.points[i]);
    return acc;
  });
}

P1Mesh P1Mesh::box_grid(const Domain& box, int resolution) {
  if (!box.is_box()) throw std::invalid_argument("P1Mesh::box_grid: box domain required");
  if (resolution < 1) throw std::invalid_argument("P1Mesh::box_grid: resolution must be >= 1");
  const int n = box.dimension();
  const Vec lo = box.lower();
  const Vec h = (box.upper() - box.lower()) / resolution;

  P1Mesh mesh;
  mesh.dim = n;
  const int side = resolution + 1;
  long total = 1;
  for (int i = 0; i < n; ++i) total *= side;
  mesh.nodes.reserve(total);
  VecI idx = VecI::Zero(n);
  while (true) {
    Vec p(n);
    for (int i = 0; i < n; ++i) p[i] = lo[i] + h[i] * idx[i];
    mesh.nodes.push_back(std::move(p));
    int axis = 0;
    while (axis < n && idx[axis] == resolution) {
      idx[axis] = 0;
      ++axis;
    }
    if (axis == n) break;
    idx[axis] += 1;
  }
  auto node_id = [&](const VecI& i) {
    long id = 0;
    for (int k = n - 1; k >= 0; --k) id = id * side + i[k];
    return static_cast<int>(id);
  };

  const auto& perms = permutations(n);
  VecI cell = VecI::Zero(n);
  Mat verts(n, n + 1);
  while (true) {
    for (const auto& perm : perms) {
      std::vector<int> ids(n + 1);
      VecI m = cell;
      ids[0] = node_id(m);
      verts.col(0) = mesh.nodes[ids[0]];
      for (int step = 0; step < n; ++step) {
        m[perm[step]] += 1;
        ids[step + 1] = node_id(m);
        verts.col(step + 1) = mesh.nodes[ids[step + 1]];
      }
      auto [vol, hats] = simplex_hats(verts);
      mesh.simplices.push_back(std::move(ids));
      mesh.volumes.push_back(vol);
      mesh.centroids.push_back(verts.rowwise().mean());
      mesh.hat_gradients.push_back(std::move(hats));
    }
    int axis = 0;
    while (axis < n && cell[axis] == resolution - 1) {
      cell[axis] = 0;
      ++axis;
    }
    if (axis == n) break;
    cell[axis] += 1;
  }
  return mesh;
}

P1Mesh P1Mesh::polygon_fan(const Domain& polygon, int subdivisions) {
  if (polygon.is_box()) throw std::invalid_argument("P1Mesh::polygon_fan: polygon domain required");
  if (subdivisions < 0) throw std::invalid_argument("P1Mesh::polygon_fan: negative subdivision level");
  const auto& verts = polygon.vertices();
  const Vec c = polygon.center();
  const Eigen::Vector2d center(c[0], c[1]);
  const int m = 1 << subdivisions;
  const double snap = 1e-9 * std::max(1.0, polygon.diameter());

  P1Mesh mesh;
  mesh.dim = 2;
  std::map<std::pair<long long, long long>, int> known;
  auto intern = [&](const Eigen::Vector2d& p) {
    const std::pair<long long, long long> key{static_cast<long long>(std::llround(p.x() / snap)),
                                              static_cast<long long>(std::llround(p.y() / snap))};
    auto it = known.find(key);
    if (it != known.end()) return it->second;
    Vec node(2);
    node << p.x(), p.y();
    mesh.nodes.push_back(std::move(node));
    const int id = static_cast<int>(mesh.nodes.size()) - 1;
    known.emplace(key, id);
    return id;
  };

  Mat tri(2, 3);
  auto push = [&](const Eigen::Vector2d& p, const Eigen::Vector2d& q, const Eigen::Vector2d& r) {
    std::vector<int> ids = {intern(p), intern(q), intern(r)};
    tri.col(0) = mesh.nodes[ids[0]];
    tri.col(1) = mesh.nodes[ids[1]];
    tri.col(2) = mesh.nodes[ids[2]];
    auto [vol, hats] = simplex_hats(tri);
    mesh.simplices.push_back(std::move(ids));
    mesh.volumes.push_back(vol);
    mesh.centroids.push_back(tri.rowwise().mean());
    mesh.hat_gradients.push_back(std::move(hats));
  };

  for (std::size_t t = 0; t < verts.size(); ++t) {
    const Eigen::Vector2d A = center;
    const Eigen::Vector2d B = verts[t];
    const Eigen::Vector2d C = verts[(t + 1) % verts.size()];
    auto point = [&](int i, int j) -> Eigen::Vector2d {
      return A + (static_cast<double>(i) / m) * (B - A) + (static_cast<double>(j) / m) * (C - A);
    };
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m - i; ++j) {
        push(point(i, j), point(i + 1, j), point(i, j + 1));
        if (i + j < m - 1) push(point(i + 1, j), point(i + 1, j + 1), point(i, j + 1));
      }
  }
  return mesh;
}

Mat P1Mesh::gradient(const std::vector<Vec>& v, std::size_t simplex) const {
  Mat g = Mat::Zero(dim, dim);
  const auto& ids = simplices[simplex];
  const auto& hats = hat_gradients[simplex];
  for (std::size_t k = 0; k < ids.size(); ++k) g += v[ids[k]] * hats[k].transpose();
  return g;
}

}  // namespace prelat
