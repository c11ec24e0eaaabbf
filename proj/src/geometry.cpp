#include "prelat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace prelat {

namespace {

// Determinant of a small integer matrix, exact (fraction-free elimination).
long long exact_det(const MatI& M) {
  const int n = static_cast<int>(M.rows());
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> a = M.cast<long long>();
  long long sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      int pivot = -1;
      for (int r = k + 1; r < n; ++r)
        if (a(r, k) != 0) {
          pivot = r;
          break;
        }
      if (pivot < 0) return 0;
      a.row(k).swap(a.row(pivot));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// Strictly positive interval overlap, with slack so that cells merely
// touching the region boundary stay excluded. Excluding a borderline cell is
// the safe direction: it can only shrink the covered set.
bool overlaps(double lo_a, double hi_a, double lo_b, double hi_b, double slack) {
  return std::min(hi_a, hi_b) - std::max(lo_a, lo_b) > slack;
}

std::vector<Eigen::Vector2d> clip_halfplane(const std::vector<Eigen::Vector2d>& poly,
                                            const Eigen::Vector2d& normal, double offset) {
  std::vector<Eigen::Vector2d> out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d& p = poly[i];
    const Eigen::Vector2d& q = poly[(i + 1) % m];
    const double dp = offset - normal.dot(p);
    const double dq = offset - normal.dot(q);
    if (dp > 0) out.push_back(p);
    if ((dp > 0) != (dq > 0)) out.push_back(p + (dp / (dp - dq)) * (q - p));
  }
  return out;
}

double polygon_area(const std::vector<Eigen::Vector2d>& poly) {
  double twice = 0.0;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d& p = poly[i];
    const Eigen::Vector2d& q = poly[(i + 1) % m];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return std::abs(twice) / 2.0;
}

// Clip the parametric segment a + t (b - a), t in [0, 1], by the open half
// space {g > 0} where g is affine with endpoint values g0, g1. Returns false
// when the remaining t-interval vanishes.
bool clip_parameter(double g0, double g1, double& tlo, double& thi) {
  if (g0 <= 0 && g1 <= 0) return false;
  if (g0 > 0 && g1 > 0) return true;
  const double r = g0 / (g0 - g1);
  if (g0 > 0)
    thi = std::min(thi, r);
  else
    tlo = std::max(tlo, r);
  return thi - tlo > 0;
}

// True when [a, b] meets the open inner region Omega_margin. Near-tangent
// segments count as missing it, which only enlarges the collar.
bool segment_meets_shrunken(const Domain& domain, double margin, const Vec& a, const Vec& b) {
  double tlo = 0.0, thi = 1.0;
  if (domain.is_box()) {
    for (int i = 0; i < domain.dimension(); ++i) {
      if (!clip_parameter(a[i] - (domain.lower()[i] + margin), b[i] - (domain.lower()[i] + margin),
                          tlo, thi))
        return false;
      if (!clip_parameter((domain.upper()[i] - margin) - a[i], (domain.upper()[i] - margin) - b[i],
                          tlo, thi))
        return false;
    }
  } else {
    const auto& normals = domain.edge_normals();
    const auto& offsets = domain.edge_offsets();
    const Eigen::Vector2d a2(a[0], a[1]), b2(b[0], b[1]);
    for (std::size_t e = 0; e < normals.size(); ++e) {
      const double c = offsets[e] - margin;
      if (!clip_parameter(c - normals[e].dot(a2), c - normals[e].dot(b2), tlo, thi)) return false;
    }
  }
  return thi - tlo > 1e-9;
}

}  // namespace

Domain Domain::box(const Vec& lower, const Vec& upper) {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw std::invalid_argument("Domain::box: lower/upper size mismatch");
  for (int i = 0; i < lower.size(); ++i)
    if (!(lower[i] < upper[i])) throw std::invalid_argument("Domain::box: empty box");
  Domain d;
  d.dim_ = static_cast<int>(lower.size());
  d.is_box_ = true;
  d.lower_ = lower;
  d.upper_ = upper;
  return d;
}

Domain Domain::convex_polygon(std::vector<Eigen::Vector2d> vertices) {
  const std::size_t m = vertices.size();
  if (m < 3) throw std::invalid_argument("Domain::convex_polygon: need at least 3 vertices");
  Domain d;
  d.dim_ = 2;
  d.is_box_ = false;
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d e1 = vertices[(i + 1) % m] - vertices[i];
    const Eigen::Vector2d e2 = vertices[(i + 2) % m] - vertices[(i + 1) % m];
    if (e1.x() * e2.y() - e1.y() * e2.x() <= 0)
      throw std::invalid_argument("Domain::convex_polygon: vertices must be strictly convex CCW");
  }
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d t = (vertices[(i + 1) % m] - vertices[i]).normalized();
    const Eigen::Vector2d n(t.y(), -t.x());  // outward for CCW order
    d.normals_.push_back(n);
    d.offsets_.push_back(n.dot(vertices[i]));
  }
  d.vertices_ = std::move(vertices);
  Vec lo(2), hi(2);
  lo << d.vertices_[0].x(), d.vertices_[0].y();
  hi = lo;
  for (const auto& v : d.vertices_) {
    lo[0] = std::min(lo[0], v.x());
    lo[1] = std::min(lo[1], v.y());
    hi[0] = std::max(hi[0], v.x());
    hi[1] = std::max(hi[1], v.y());
  }
  d.lower_ = lo;
  d.upper_ = hi;
  return d;
}

Domain Domain::disk(double radius, const Eigen::Vector2d& center, int sides) {
  if (radius <= 0 || sides < 3) throw std::invalid_argument("Domain::disk: bad parameters");
  std::vector<Eigen::Vector2d> verts;
  verts.reserve(sides);
  for (int k = 0; k < sides; ++k) {
    const double t = 2.0 * M_PI * k / sides;
    verts.emplace_back(center.x() + radius * std::cos(t), center.y() + radius * std::sin(t));
  }
  return convex_polygon(std::move(verts));
}

bool Domain::contains(const Vec& x) const {
  if (x.size() != dim_) throw std::invalid_argument("Domain::contains: dimension mismatch");
  if (is_box_) {
    for (int i = 0; i < dim_; ++i)
      if (!(lower_[i] < x[i] && x[i] < upper_[i])) return false;
    return true;
  }
  const Eigen::Vector2d p(x[0], x[1]);
  for (std::size_t e = 0; e < normals_.size(); ++e)
    if (!(normals_[e].dot(p) < offsets_[e])) return false;
  return true;
}

bool Domain::closure_contains(const Vec& x) const {
  if (x.size() != dim_) throw std::invalid_argument("Domain::closure_contains: dimension mismatch");
  if (is_box_) {
    for (int i = 0; i < dim_; ++i)
      if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
    return true;
  }
  const Eigen::Vector2d p(x[0], x[1]);
  for (std::size_t e = 0; e < normals_.size(); ++e)
    if (normals_[e].dot(p) > offsets_[e]) return false;
  return true;
}

double Domain::inner_distance(const Vec& x) const {
  if (x.size() != dim_) throw std::invalid_argument("Domain::inner_distance: dimension mismatch");
  double d = std::numeric_limits<double>::infinity();
  if (is_box_) {
    for (int i = 0; i < dim_; ++i) d = std::min({d, x[i] - lower_[i], upper_[i] - x[i]});
    return d;
  }
  const Eigen::Vector2d p(x[0], x[1]);
  for (std::size_t e = 0; e < normals_.size(); ++e) d = std::min(d, offsets_[e] - normals_[e].dot(p));
  return d;
}

std::pair<Vec, Vec> Domain::bounding_box() const { return {lower_, upper_}; }

double Domain::volume() const {
  if (is_box_) return (upper_ - lower_).prod();
  return polygon_area(vertices_);
}

Vec Domain::center() const {
  if (is_box_) return 0.5 * (lower_ + upper_);
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& v : vertices_) c += v;
  c /= static_cast<double>(vertices_.size());
  Vec out(2);
  out << c.x(), c.y();
  return out;
}

double Domain::diameter() const {
  if (is_box_) return (upper_ - lower_).norm();
  double d = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      d = std::max(d, (vertices_[i] - vertices_[j]).norm());
  return d;
}

const Vec& Domain::lower() const { return lower_; }
const Vec& Domain::upper() const { return upper_; }

const std::vector<Eigen::Vector2d>& Domain::vertices() const {
  if (is_box_) throw std::logic_error("Domain::vertices: box domain");
  return vertices_;
}

const std::vector<Eigen::Vector2d>& Domain::edge_normals() const {
  if (is_box_) throw std::logic_error("Domain::edge_normals: box domain");
  return normals_;
}

const std::vector<double>& Domain::edge_offsets() const {
  if (is_box_) throw std::logic_error("Domain::edge_offsets: box domain");
  return offsets_;
}

ShrunkenDomain::ShrunkenDomain(Domain base, double margin) : base_(std::move(base)), margin_(margin) {
  if (margin < 0) throw std::invalid_argument("ShrunkenDomain: negative margin");
}

bool ShrunkenDomain::contains(const Vec& x) const { return base_.inner_distance(x) > margin_; }

std::pair<Vec, Vec> ShrunkenDomain::bounding_box() const {
  auto [lo, hi] = base_.bounding_box();
  lo.array() += margin_;
  hi.array() -= margin_;
  return {lo, hi};
}

ShrunkenDomain shrink(const Domain& domain, double margin) { return ShrunkenDomain(domain, margin); }

double Simplex::volume() const {
  const int n = static_cast<int>(vertices.rows());
  Mat e(n, n);
  for (int j = 0; j < n; ++j) e.col(j) = vertices.col(j + 1) - vertices.col(0);
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= j;
  return std::abs(e.determinant()) / f;
}

Vec Simplex::centroid() const { return vertices.rowwise().mean(); }

Triangulation::Triangulation(double eps, MatI basis, VecI shift_index, std::vector<VecI> cells)
    : eps_(eps), basis_(std::move(basis)), shift_index_(std::move(shift_index)), cells_(std::move(cells)) {
  if (eps_ <= 0) throw std::invalid_argument("Triangulation: eps must be positive");
  if (basis_.rows() != basis_.cols()) throw std::invalid_argument("Triangulation: square basis required");
  if (shift_index_.size() != basis_.rows())
    throw std::invalid_argument("Triangulation: shift size mismatch");
  det_ = exact_det(basis_);
  if (det_ == 0) throw std::invalid_argument("Triangulation: singular basis");
}

Vec Triangulation::node_position(const VecI& m) const {
  return eps_ * (shift_index_.cast<double>() + basis_.cast<double>() * m.cast<double>());
}

NodeKey Triangulation::reference_node(const VecI& m) const {
  VecI idx = shift_index_ + basis_ * m;
  return NodeKey(idx);
}

std::vector<NodeKey> Triangulation::closure_nodes() const {
  const int n = dimension();
  std::set<NodeKey> keys;
  VecI corner(n);
  for (const VecI& cell : cells_) {
    for (int mask = 0; mask < (1 << n); ++mask) {
      for (int i = 0; i < n; ++i) corner[i] = cell[i] + ((mask >> i) & 1);
      keys.insert(reference_node(corner));
    }
  }
  return {keys.begin(), keys.end()};
}

std::size_t Triangulation::simplex_count() const {
  return cells_.size() * permutations(dimension()).size();
}

const std::vector<std::vector<int>>& permutations(int n) {
  static const std::vector<std::vector<std::vector<int>>> table = [] {
    std::vector<std::vector<std::vector<int>>> t(7);
    for (int k = 1; k <= 6; ++k) {
      std::vector<int> p(k);
      for (int i = 0; i < k; ++i) p[i] = i;
      do {
        t[k].push_back(p);
      } while (std::next_permutation(p.begin(), p.end()));
    }
    return t;
  }();
  if (n < 1 || n > 6) throw std::invalid_argument("permutations: dimension out of range");
  return table[n];
}

std::vector<VecI> chain_indices(const VecI& cell, const std::vector<int>& perm) {
  const int n = static_cast<int>(cell.size());
  std::vector<VecI> chain;
  chain.reserve(n + 1);
  chain.push_back(cell);
  VecI m = cell;
  for (int step = 0; step < n; ++step) {
    m[perm[step]] += 1;
    chain.push_back(m);
  }
  return chain;
}

std::vector<VecI> covered_cells(const Domain& domain, double eps, const MatI& basis,
                                const VecI& shift_index, double margin) {
  const int n = domain.dimension();
  if (basis.rows() != n || basis.cols() != n)
    throw std::invalid_argument("covered_cells: basis dimension mismatch");
  if (eps <= 0 || margin < 0) throw std::invalid_argument("covered_cells: bad eps or margin");
  if (exact_det(basis) == 0) throw std::invalid_argument("covered_cells: singular basis");

  auto [rlo, rhi] = domain.bounding_box();
  rlo.array() += margin;
  rhi.array() -= margin;
  for (int i = 0; i < n; ++i)
    if (!(rlo[i] < rhi[i])) return {};

  const Mat B = basis.cast<double>();
  const Mat Binv = B.inverse();
  const Vec shift = eps * shift_index.cast<double>();

  // Multi-index ranges from the region box corners pulled back to the lattice.
  VecI mlo(n), mhi(n);
  {
    Vec cmin = Vec::Constant(n, std::numeric_limits<double>::infinity());
    Vec cmax = -cmin;
    Vec corner(n);
    for (int mask = 0; mask < (1 << n); ++mask) {
      for (int i = 0; i < n; ++i) corner[i] = ((mask >> i) & 1) ? rhi[i] : rlo[i];
      const Vec m = Binv * ((corner - shift) / eps);
      cmin = cmin.cwiseMin(m);
      cmax = cmax.cwiseMax(m);
    }
    for (int i = 0; i < n; ++i) {
      mlo[i] = static_cast<int>(std::floor(cmin[i])) - 1;
      mhi[i] = static_cast<int>(std::ceil(cmax[i])) + 1;
    }
  }

  const double slack = 1e-12 * eps;
  const bool box = domain.is_box();

  // Separating-axis candidates for box domains: box normals, cell normals
  // (rows of B^{-1}), and in 3d the nine edge cross products. This is the
  // complete axis set for a pair of convex polytopes given by faces/edges.
  std::vector<Vec> axes;
  if (box) {
    for (int r = 0; r < n; ++r) axes.push_back(Binv.row(r).transpose());
    if (n == 3) {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          Eigen::Vector3d e = Eigen::Vector3d::Unit(i);
          Eigen::Vector3d c = B.col(j).head<3>();
          Eigen::Vector3d a = e.cross(c);
          if (a.norm() > 1e-12) axes.push_back(a);
        }
    }
  }

  std::vector<VecI> cells;
  VecI m = mlo;
  while (true) {
    const Vec base = shift + eps * (B * m.cast<double>());
    bool keep = true;
    if (box) {
      for (int i = 0; i < n && keep; ++i) {
        double lo = base[i], hi = base[i];
        for (int j = 0; j < n; ++j) {
          const double d = eps * B(i, j);
          if (d < 0)
            lo += d;
          else
            hi += d;
        }
        keep = overlaps(lo, hi, rlo[i], rhi[i], slack);
      }
      for (const Vec& a : axes) {
        if (!keep) break;
        double clo = a.dot(base), chi = clo;
        for (int j = 0; j < n; ++j) {
          const double d = eps * a.dot(B.col(j));
          if (d < 0)
            clo += d;
          else
            chi += d;
        }
        double blo = 0.0, bhi = 0.0;
        for (int i = 0; i < n; ++i) {
          const double p = a[i] * rlo[i], q = a[i] * rhi[i];
          blo += std::min(p, q);
          bhi += std::max(p, q);
        }
        keep = overlaps(clo, chi, blo, bhi, slack * a.norm());
      }
    } else {
      std::vector<Eigen::Vector2d> poly = {
          {base[0], base[1]},
          {base[0] + eps * B(0, 0), base[1] + eps * B(1, 0)},
          {base[0] + eps * (B(0, 0) + B(0, 1)), base[1] + eps * (B(1, 0) + B(1, 1))},
          {base[0] + eps * B(0, 1), base[1] + eps * B(1, 1)}};
      const double cell_area = polygon_area(poly);
      const auto& normals = domain.edge_normals();
      const auto& offsets = domain.edge_offsets();
      for (std::size_t e = 0; e < normals.size() && !poly.empty(); ++e)
        poly = clip_halfplane(poly, normals[e], offsets[e] - margin);
      keep = !poly.empty() && polygon_area(poly) > 1e-12 * cell_area;
    }
    if (keep) cells.push_back(m);

    int axis = 0;
    while (axis < n && m[axis] == mhi[axis]) {
      m[axis] = mlo[axis];
      ++axis;
    }
    if (axis == n) break;
    m[axis] += 1;
  }
  return cells;
}

Triangulation triangulate_covered(const Domain& domain, double eps, const MatI& basis,
                                  const VecI& shift_index, double margin) {
  return Triangulation(eps, basis, shift_index, covered_cells(domain, eps, basis, shift_index, margin));
}

void for_each_simplex(const Triangulation& tri,
                      const std::function<void(const VecI&, const std::vector<int>&,
                                               const std::vector<VecI>&)>& fn) {
  const auto& perms = permutations(tri.dimension());
  for (const VecI& cell : tri.cells())
    for (const auto& perm : perms) fn(cell, perm, chain_indices(cell, perm));
}

std::vector<Simplex> enumerate_simplices(const Triangulation& tri) {
  const int n = tri.dimension();
  std::vector<Simplex> out;
  out.reserve(tri.simplex_count());
  for_each_simplex(tri, [&](const VecI&, const std::vector<int>&, const std::vector<VecI>& chain) {
    Simplex s;
    s.vertices.resize(n, n + 1);
    for (int j = 0; j <= n; ++j) s.vertices.col(j) = tri.node_position(chain[j]);
    out.push_back(std::move(s));
  });
  return out;
}

double cell_diameter_factor(const MatI& basis) {
  const int n = static_cast<int>(basis.rows());
  const Mat B = basis.cast<double>();
  double best = 0.0;
  Vec c(n);
  int count = 1;
  for (int i = 0; i < n; ++i) count *= 3;
  for (int code = 0; code < count; ++code) {
    int rest = code;
    for (int i = 0; i < n; ++i) {
      c[i] = static_cast<double>(rest % 3 - 1);
      rest /= 3;
    }
    best = std::max(best, (B * c).norm());
  }
  return best;
}

bool segment_in_domain(const Domain& domain, const Vec& a, const Vec& b) {
  return domain.contains(a) && domain.contains(b);
}

bool segment_in_shrunken(const ShrunkenDomain& region, const Vec& a, const Vec& b) {
  return region.contains(a) && region.contains(b);
}

bool segment_in_collar(const Domain& domain, double margin, const Vec& a, const Vec& b) {
  if (!(domain.closure_contains(a) && domain.closure_contains(b))) return false;
  return !segment_meets_shrunken(domain, margin, a, b);
}

}  // namespace prelat
