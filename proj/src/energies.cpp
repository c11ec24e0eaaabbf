#include "prelat/energies.hpp"

#include "prelat/density.hpp"
#include "prelat/parallel.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace prelat {

namespace {

double power_int(double base, int n) {
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= base;
  return p;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

struct Interaction {
  VecI alpha;
  VecI xi;
  double weight;  // psi(|xi|)
};

std::vector<Interaction> collect_interactions(int dim, double eps, const Cutoff& psi,
                                              const Domain& omega) {
  std::vector<Interaction> out;
  for (const auto& [r2, w] : psi.weights) {
    const Shell shell = enumerate_shell(dim, r2);
    for (const VecI& zeta : shell.members)
      for (const VecI& xi : signed_orbit(zeta))
        for (const VecI& alpha : interacting_nodes(xi, eps, omega))
          out.push_back({alpha, xi, w});
  }
  return out;
}

// A = sqrt(G) at every node of u, computed once up front so the parallel
// passes only read.
class NodeSqrtCache {
 public:
  NodeSqrtCache(const DiscreteDeformation& u, const MetricField& G) : eps_(u.eps()) {
    for (const NodeKey& key : u.node_keys())
      values_.emplace(key, sqrt_spd(G(u.node_position(key.index()))));
  }

  const Mat& at_index(const VecI& index) const {
    auto it = values_.find(NodeKey(index));
    if (it == values_.end()) throw std::logic_error("NodeSqrtCache: node outside the domain");
    return it->second;
  }

  // Lookup by world position; positions are eps times an integer vector.
  const Mat& at_position(const Vec& x) const {
    VecI index(x.size());
    for (int i = 0; i < x.size(); ++i) index[i] = static_cast<int>(std::llround(x[i] / eps_));
    return at_index(index);
  }

  std::function<Mat(const Vec&)> as_function() const {
    return [this](const Vec& x) -> Mat { return at_position(x); };
  }

 private:
  double eps_;
  std::unordered_map<NodeKey, Mat, NodeKeyHash> values_;
};

double energy_of_interactions(const std::vector<Interaction>& interactions,
                              const DiscreteDeformation& u, const NodeSqrtCache& cache,
                              double eta, int workers) {
  const int n = u.dimension();
  const double eps = u.eps();
  const double epsn = power_int(eps, n);
  const double eta2 = eta * eta;
  return chunked_sum(interactions.size(), workers, [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const Interaction& it = interactions[i];
      const Vec du = u.at(it.alpha + it.xi) - u.at(it.alpha);
      const Mat& A = cache.at_index(it.alpha);
      const double ref = eps * (A * it.xi.cast<double>()).norm();
      const double t = std::sqrt(du.squaredNorm() + eta2) / ref - 1.0;
      acc += it.weight * epsn * t * t;
    }
    return acc;
  });
}

double check_dimensions(const DiscreteDeformation& u, const MetricField& G, const Cutoff& psi,
                        const Domain& omega) {
  if (u.dimension() != omega.dimension() || G.dimension() != omega.dimension())
    throw std::invalid_argument("discrete energy: dimension mismatch");
  psi.validate(omega.dimension());
  return u.eps();
}

}  // namespace

Cutoff Cutoff::nearest() { return Cutoff{{{1, 1.0}}}; }
Cutoff Cutoff::next_nearest() { return Cutoff{{{2, 1.0}}}; }
Cutoff Cutoff::nearest_and_next(double w1, double w2) { return Cutoff{{{1, w1}, {2, w2}}}; }

double Cutoff::weight(long radius_sq) const {
  for (const auto& [r2, w] : weights)
    if (r2 == radius_sq) return w;
  return 0.0;
}

double Cutoff::max_radius() const {
  long m = 0;
  for (const auto& [r2, w] : weights) m = std::max(m, r2);
  return std::sqrt(static_cast<double>(m));
}

void Cutoff::validate(int dim) const {
  if (dim < 1) throw std::invalid_argument("Cutoff: dimension must be positive");
  if (weights.empty()) throw std::invalid_argument("Cutoff: no interaction weights");
  long prev = 0;
  for (const auto& [r2, w] : weights) {
    if (r2 <= prev) throw std::invalid_argument("Cutoff: radii must be sorted and unique");
    if (!(w > 0)) throw std::invalid_argument("Cutoff: weights must be positive");
    prev = r2;
  }
}

DiscreteDeformation::DiscreteDeformation(double eps, int dim) : eps_(eps), dim_(dim) {
  if (eps_ <= 0) throw std::invalid_argument("DiscreteDeformation: eps must be positive");
  if (dim_ < 1 || dim_ > 3) throw std::invalid_argument("DiscreteDeformation: dimension 1..3");
}

DiscreteDeformation DiscreteDeformation::sample(const Domain& domain, double eps,
                                                const std::function<Vec(const Vec&)>& f) {
  DiscreteDeformation u(eps, domain.dimension());
  const int n = domain.dimension();
  auto [lo, hi] = domain.bounding_box();
  VecI a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = static_cast<int>(std::floor(lo[i] / eps)) - 1;
    b[i] = static_cast<int>(std::ceil(hi[i] / eps)) + 1;
  }
  VecI m = a;
  Vec x(n);
  while (true) {
    for (int i = 0; i < n; ++i) x[i] = eps * m[i];
    if (domain.contains(x)) u.set(m, f(x));
    int axis = 0;
    while (axis < n && m[axis] == b[axis]) {
      m[axis] = a[axis];
      ++axis;
    }
    if (axis == n) break;
    m[axis] += 1;
  }
  return u;
}

void DiscreteDeformation::set(const VecI& index, Vec value) {
  if (index.size() != dim_ || value.size() != dim_)
    throw std::invalid_argument("DiscreteDeformation::set: dimension mismatch");
  values_[NodeKey(index)] = std::move(value);
}

const Vec& DiscreteDeformation::at(const VecI& index) const { return at(NodeKey(index)); }

const Vec& DiscreteDeformation::at(const NodeKey& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    std::ostringstream msg;
    msg << "DiscreteDeformation::at: no value at node (";
    for (int i = 0; i < key.dim; ++i) msg << (i ? "," : "") << key.c[static_cast<std::size_t>(i)];
    msg << ")";
    throw std::out_of_range(msg.str());
  }
  return it->second;
}

bool DiscreteDeformation::has(const VecI& index) const { return values_.count(NodeKey(index)) > 0; }

Vec DiscreteDeformation::node_position(const VecI& index) const {
  return eps_ * index.cast<double>();
}

std::vector<NodeKey> DiscreteDeformation::node_keys() const {
  std::vector<NodeKey> keys;
  keys.reserve(values_.size());
  for (const auto& [key, value] : values_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  return keys;
}

PiecewiseAffineField::PiecewiseAffineField(Triangulation tri, const DiscreteDeformation& u)
    : tri_(std::move(tri)) {
  const int n = tri_.dimension();
  if (u.dimension() != n) throw std::invalid_argument("PiecewiseAffineField: dimension mismatch");
  const auto& perms = permutations(n);
  const double eps = tri_.eps();
  const Mat B = tri_.basis().cast<double>();

  // Edge matrices are shared by every cell: E_perm = eps * B * C_perm with
  // C_perm the 0/1 prefix matrix of the chain.
  std::vector<Mat> edge_inverse;
  edge_inverse.reserve(perms.size());
  for (const auto& perm : perms) {
    Mat C = Mat::Zero(n, n);
    VecI prefix = VecI::Zero(n);
    for (int step = 0; step < n; ++step) {
      prefix[perm[step]] += 1;
      C.col(step) = prefix.cast<double>();
    }
    edge_inverse.push_back((eps * B * C).inverse());
  }

  gradients_.reserve(tri_.cells().size() * perms.size());
  Mat du(n, n);
  for (std::size_t c = 0; c < tri_.cells().size(); ++c) {
    const VecI& cell = tri_.cells()[c];
    cell_of_.emplace(NodeKey(cell), c);
    for (std::size_t p = 0; p < perms.size(); ++p) {
      const auto chain = chain_indices(cell, perms[p]);
      const Vec& v0 = u.at(tri_.reference_node(chain[0]));
      for (int j = 1; j <= n; ++j) du.col(j - 1) = u.at(tri_.reference_node(chain[j])) - v0;
      gradients_.push_back(du * edge_inverse[p]);
    }
  }
  for (const NodeKey& key : tri_.closure_nodes()) values_.emplace(key, u.at(key));
}

std::ptrdiff_t PiecewiseAffineField::simplex_index_at(const Vec& x) const {
  const int n = tri_.dimension();
  const Mat B = tri_.basis().cast<double>();
  const Vec m = B.inverse() * (x / tri_.eps() - tri_.shift_index().cast<double>());
  const double tol = 1e-9;

  // Points on cell faces have an ambiguous floor; try the small set of
  // neighbouring candidates in a fixed order.
  std::vector<std::vector<int>> options(n);
  for (int i = 0; i < n; ++i) {
    const int base = static_cast<int>(std::floor(m[i]));
    const double frac = m[i] - base;
    options[i] = {base};
    if (frac <= tol) options[i].push_back(base - 1);
    if (frac >= 1.0 - tol) options[i].push_back(base + 1);
  }
  std::vector<std::size_t> choice(n, 0);
  VecI cell(n);
  while (true) {
    for (int i = 0; i < n; ++i) cell[i] = options[i][choice[i]];
    auto it = cell_of_.find(NodeKey(cell));
    if (it != cell_of_.end()) {
      // Fractional coordinates relative to this cell, sorted descending,
      // give the chain permutation of the containing simplex.
      std::vector<std::pair<double, int>> frac(n);
      for (int i = 0; i < n; ++i) {
        double f = m[i] - cell[i];
        f = std::min(1.0, std::max(0.0, f));
        frac[i] = {-f, i};
      }
      std::sort(frac.begin(), frac.end());
      std::vector<int> perm(n);
      for (int i = 0; i < n; ++i) perm[i] = frac[i].second;
      const auto& perms = permutations(n);
      std::size_t rank = 0;
      while (rank < perms.size() && perms[rank] != perm) ++rank;
      return static_cast<std::ptrdiff_t>(it->second * perms.size() + rank);
    }
    std::size_t axis = 0;
    while (axis < static_cast<std::size_t>(n) && choice[axis] + 1 == options[axis].size()) {
      choice[axis] = 0;
      ++axis;
    }
    if (axis == static_cast<std::size_t>(n)) return -1;
    choice[axis] += 1;
  }
}

bool PiecewiseAffineField::covers(const Vec& x) const { return simplex_index_at(x) >= 0; }

Vec PiecewiseAffineField::evaluate(const Vec& x) const {
  const std::ptrdiff_t idx = simplex_index_at(x);
  if (idx < 0) throw std::out_of_range("PiecewiseAffineField::evaluate: point not covered");
  const int n = tri_.dimension();
  const auto& perms = permutations(n);
  const VecI& cell = tri_.cells()[static_cast<std::size_t>(idx) / perms.size()];
  const auto it = values_.find(tri_.reference_node(cell));
  if (it == values_.end()) throw std::logic_error("PiecewiseAffineField: missing base value");
  return it->second + gradients_[static_cast<std::size_t>(idx)] * (x - tri_.node_position(cell));
}

PiecewiseAffineField extend_p1(const DiscreteDeformation& u, const Triangulation& tri) {
  return PiecewiseAffineField(tri, u);
}

Mat chain_lambda(const std::function<Mat(const Vec&)>& A, const Triangulation& tri,
                 const std::vector<VecI>& chain, const std::vector<int>& perm, bool reversed) {
  const int n = tri.dimension();
  const Mat B = tri.basis().cast<double>();
  Mat L(n, n);
  for (int j = 0; j < n; ++j) {
    int pos = 0;
    while (perm[pos] != j) ++pos;
    const int vertex = pos + (reversed ? 1 : 0);
    const Mat Av = A(tri.node_position(chain[vertex]));
    L.col(j) = B.col(j) / (Av * B.col(j)).norm();
  }
  return L;
}

double pair_term(const Vec& du, double eps, const Mat& A_at_base, const Vec& xi_world) {
  const double t = du.norm() / (eps * (A_at_base * xi_world).norm()) - 1.0;
  return t * t;
}

double discrete_energy(const DiscreteDeformation& u, const MetricField& G, const Cutoff& psi,
                       const Domain& omega, int workers) {
  check_dimensions(u, G, psi, omega);
  const auto interactions = collect_interactions(omega.dimension(), u.eps(), psi, omega);
  const NodeSqrtCache cache(u, G);
  return energy_of_interactions(interactions, u, cache, 0.0, workers);
}

double discrete_energy_smoothed(const DiscreteDeformation& u, const MetricField& G,
                                const Cutoff& psi, const Domain& omega, double eta, int workers) {
  if (eta < 0) throw std::invalid_argument("discrete_energy_smoothed: negative smoothing");
  check_dimensions(u, G, psi, omega);
  const auto interactions = collect_interactions(omega.dimension(), u.eps(), psi, omega);
  const NodeSqrtCache cache(u, G);
  return energy_of_interactions(interactions, u, cache, eta, workers);
}

namespace {

// Sum over the chain simplices of one covered triangulation of
// per_simplex_weight * W(grad u_T * lambda_T).
double triangulation_term(const PiecewiseAffineField& field, const NodeSqrtCache& cache,
                          double per_simplex_weight, int workers) {
  const Triangulation& tri = field.triangulation();
  const int n = tri.dimension();
  const auto& perms = permutations(n);
  const auto A = cache.as_function();
  const std::size_t total = field.gradients().size();
  return chunked_sum(total, workers, [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t s = lo; s < hi; ++s) {
      const VecI& cell = tri.cells()[s / perms.size()];
      const auto& perm = perms[s % perms.size()];
      const auto chain = chain_indices(cell, perm);
      const Mat lambda = chain_lambda(A, tri, chain, perm, false);
      acc += per_simplex_weight * stretch_density(field.gradients()[s] * lambda);
    }
    return acc;
  });
}

}  // namespace

EnergyReport integral_representation(const DiscreteDeformation& u, const MetricField& G,
                                     const Cutoff& psi, const Domain& omega, int workers) {
  check_dimensions(u, G, psi, omega);
  const int n = omega.dimension();
  const double eps = u.eps();
  const double epsn = power_int(eps, n);
  const NodeSqrtCache cache(u, G);

  EnergyReport report;
  report.discrete = discrete_energy(u, G, psi, omega, workers);

  double margin_max = 0.0;
  for (const auto& [r2, w] : psi.weights) {
    const double xi0 = std::sqrt(static_cast<double>(r2));
    const Shell shell = enumerate_shell(n, r2);
    double shell_sum = 0.0;
    for (const VecI& zeta : shell.members) {
      const int k = nonzero_count(zeta);
      const double per_simplex = epsn / (factorial(n) * n * k);
      for (const LatticeFamily& fam : lattice_set(zeta)) {
        // Covering margin: large enough that covered cell closures stay in
        // the domain even for bases with non-orthogonal columns.
        const double margin =
            eps * std::max(std::sqrt(static_cast<double>(n)) * xi0, cell_diameter_factor(fam.basis));
        margin_max = std::max(margin_max, margin);
        std::vector<VecI> translates = {VecI::Zero(n)};
        translates.insert(translates.end(), fam.shifts.begin(), fam.shifts.end());
        for (const VecI& tau : translates) {
          const auto field =
              extend_p1(u, triangulate_covered(omega, eps, fam.basis, tau, margin));
          shell_sum += triangulation_term(field, cache, per_simplex, workers);
        }
      }
    }
    report.shell_terms.emplace_back(r2, w * shell_sum);
    report.representation += w * shell_sum;
  }
  report.gap = report.discrete - report.representation;

  // Collar bound: interactions inside the domain whose segment misses the
  // inner region entirely. Every deficiently counted interaction is of this
  // kind, so the sum dominates the gap.
  const auto interactions = collect_interactions(n, eps, psi, omega);
  report.boundary_bound =
      chunked_sum(interactions.size(), workers, [&](std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        Vec a(n), b(n);
        for (std::size_t i = lo; i < hi; ++i) {
          const Interaction& it = interactions[i];
          for (int d = 0; d < n; ++d) {
            a[d] = eps * it.alpha[d];
            b[d] = eps * (it.alpha[d] + it.xi[d]);
          }
          if (!segment_in_collar(omega, margin_max, a, b)) continue;
          const Vec du = u.at(it.alpha + it.xi) - u.at(it.alpha);
          acc += it.weight * epsn * pair_term(du, eps, cache.at_index(it.alpha), it.xi.cast<double>());
        }
        return acc;
      });
  return report;
}

namespace {

MatI diagonal_basis_2d() {
  MatI B(2, 2);
  B << 1, -1, 1, 1;
  return B;
}

}  // namespace

double nearest_pair_representation(const DiscreteDeformation& u, const MetricField& G,
                                   const Domain& omega) {
  if (omega.dimension() != 2) throw std::invalid_argument("nearest_pair_representation: 2d only");
  const double eps = u.eps();
  const NodeSqrtCache cache(u, G);
  const auto A = cache.as_function();
  const double margin = eps * std::sqrt(2.0);
  const auto field = extend_p1(u, triangulate_covered(omega, eps, MatI::Identity(2, 2),
                                                      VecI::Zero(2), margin));
  const Triangulation& tri = field.triangulation();
  const double vol = eps * eps / 2.0;
  double acc = 0.0;
  std::size_t s = 0;
  for_each_simplex(tri, [&](const VecI&, const std::vector<int>& perm,
                            const std::vector<VecI>& chain) {
    const Mat& grad = field.gradients()[s++];
    acc += vol * (stretch_density(grad * chain_lambda(A, tri, chain, perm, false)) +
                  stretch_density(grad * chain_lambda(A, tri, chain, perm, true)));
  });
  return acc;
}

double diagonal_pair_representation(const DiscreteDeformation& u, const MetricField& G,
                                    const Domain& omega, bool literal_first_pair) {
  if (omega.dimension() != 2) throw std::invalid_argument("diagonal_pair_representation: 2d only");
  const double eps = u.eps();
  const NodeSqrtCache cache(u, G);
  const auto A = cache.as_function();
  const double margin = 2.0 * eps;
  const MatI B = diagonal_basis_2d();
  VecI tau0 = VecI::Zero(2), tau1(2);
  tau1 << 0, 1;

  const auto field0 = extend_p1(u, triangulate_covered(omega, eps, B, tau0, margin));
  const auto field1 = extend_p1(u, triangulate_covered(omega, eps, B, tau1, margin));
  const double vol = eps * eps * 2.0 / 2.0;  // |det B| = 2 per cell, two simplices

  auto lattice_half = [&](const PiecewiseAffineField& field, const PiecewiseAffineField* other) {
    const Triangulation& tri = field.triangulation();
    double acc = 0.0;
    std::size_t s = 0;
    for_each_simplex(tri, [&](const VecI&, const std::vector<int>& perm,
                              const std::vector<VecI>& chain) {
      const Mat& grad = field.gradients()[s++];
      const double forward = stretch_density(grad * chain_lambda(A, tri, chain, perm, false));
      double reversed = stretch_density(grad * chain_lambda(A, tri, chain, perm, true));
      if (other != nullptr) {
        // Printed variant: the reversed field of the other sublattice,
        // evaluated through that sublattice's own simplices where covered.
        Vec cx(2);
        cx << (tri.node_position(chain[0])[0] + tri.node_position(chain[1])[0] +
               tri.node_position(chain[2])[0]) /
                  3.0,
            (tri.node_position(chain[0])[1] + tri.node_position(chain[1])[1] +
             tri.node_position(chain[2])[1]) /
                3.0;
        const std::ptrdiff_t os = other->simplex_index_at(cx);
        if (os >= 0) {
          const Triangulation& otri = other->triangulation();
          const auto& operms = permutations(2);
          const VecI& ocell = otri.cells()[static_cast<std::size_t>(os) / operms.size()];
          const auto& operm = operms[static_cast<std::size_t>(os) % operms.size()];
          const auto ochain = chain_indices(ocell, operm);
          reversed = stretch_density(other->gradients()[static_cast<std::size_t>(os)] *
                                     chain_lambda(A, otri, ochain, operm, true));
        }
      }
      acc += 0.5 * vol * (forward + reversed);
    });
    return acc;
  };

  return lattice_half(field0, literal_first_pair ? &field1 : nullptr) + lattice_half(field1, nullptr);
}

Mat case_lambda(const Mat& A, CaseTag tag) {
  switch (tag) {
    case CaseTag::nearest2d:
      if (A.rows() != 2) throw std::invalid_argument("case_lambda: 2d case on non-2d metric");
      return lambda_nearest(A);
    case CaseTag::nearestNd:
      return lambda_nearest(A);
    case CaseTag::nextNearest2d: {
      if (A.rows() != 2) throw std::invalid_argument("case_lambda: 2d case on non-2d metric");
      return lambda_shell(A, diagonal_basis_2d(), std::sqrt(2.0));
    }
  }
  throw std::logic_error("case_lambda: unknown case");
}

std::pair<double, double> limit_functional_bounds(const AnalyticMap& u, const MetricField& G,
                                                  const Cutoff& psi, const QuadratureMesh& quad,
                                                  int workers) {
  const int n = quad.dim;
  if (u.dim != n || G.dimension() != n)
    throw std::invalid_argument("limit_functional_bounds: dimension mismatch");
  psi.validate(n);

  struct FamilyTerm {
    double coeff;
    MatI basis;
    double xi0;
  };
  std::vector<FamilyTerm> terms;
  for (const auto& [r2, w] : psi.weights) {
    const double xi0 = std::sqrt(static_cast<double>(r2));
    for (const VecI& zeta : enumerate_shell(n, r2).members) {
      const int k = nonzero_count(zeta);
      for (const LatticeFamily& fam : lattice_set(zeta)) {
        const double coeff = w * (1.0 + static_cast<double>(fam.shifts.size())) /
                             (static_cast<double>(n) * k * std::abs(static_cast<double>(fam.det)));
        terms.push_back({coeff, fam.basis, xi0});
      }
    }
  }

  auto accumulate = [&](double (*density)(const Mat&)) {
    return integrate(
        quad,
        [&](const Vec& x) {
          const Mat A = sqrt_spd(G(x));
          const Mat grad = u.gradient(x);
          double acc = 0.0;
          for (const FamilyTerm& t : terms)
            acc += t.coeff * density(grad * lambda_shell(A, t.basis, t.xi0));
          return acc;
        },
        workers);
  };
  return {accumulate(&relaxed_stretch_density), accumulate(&stretch_density)};
}

double gamma_limit_functional(const AnalyticMap& u, const MetricField& G, CaseTag tag,
                              const QuadratureMesh& quad, int workers) {
  return 2.0 * metric_deficit(u, G, tag, quad, workers);
}

double metric_deficit(const AnalyticMap& u, const MetricField& G, CaseTag tag,
                      const QuadratureMesh& quad, int workers) {
  if (u.dim != quad.dim || G.dimension() != quad.dim)
    throw std::invalid_argument("metric_deficit: dimension mismatch");
  return integrate(
      quad,
      [&](const Vec& x) {
        return relaxed_stretch_density(u.gradient(x) * case_lambda(sqrt_spd(G(x)), tag));
      },
      workers);
}

double rotation_distance_sq(const Mat& F) {
  Eigen::JacobiSVD<Mat> svd(F);
  Vec sigma = svd.singularValues();
  const int n = static_cast<int>(F.rows());
  if (F.determinant() < 0) sigma[n - 1] = -sigma[n - 1];
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = sigma[i] - 1.0;
    d += t * t;
  }
  return d;
}

double continuum_energy(const AnalyticMap& u, const MetricField& G, const QuadratureMesh& quad,
                        const std::function<double(const Mat&)>& density, int workers) {
  if (u.dim != quad.dim || G.dimension() != quad.dim)
    throw std::invalid_argument("continuum_energy: dimension mismatch");
  const std::function<double(const Mat&)> wbar =
      density ? density : std::function<double(const Mat&)>(&rotation_distance_sq);
  if (wbar(Mat::Identity(quad.dim, quad.dim)) > 1e-12)
    throw std::invalid_argument("continuum_energy: density must vanish at the identity");
  return integrate(
      quad, [&](const Vec& x) { return wbar(u.gradient(x) * sqrt_spd(G(x)).inverse()); }, workers);
}

RotationIdentity rotation_identity_check(const AnalyticMap& u, const MetricField& G,
                                         const Domain& disk, int subdivisions) {
  if (disk.is_box() || disk.dimension() != 2)
    throw std::invalid_argument("rotation_identity_check: polygonal 2d domain required");
  const QuadratureMesh quad = QuadratureMesh::polygon_fan(disk, subdivisions);

  Mat R(2, 2);
  const double c = 1.0 / std::sqrt(2.0);
  R << c, -c, c, c;

  AnalyticMap v;
  v.dim = 2;
  v.value = [u, R](const Vec& y) -> Vec { return std::sqrt(2.0) * u.value(R * y); };
  v.gradient = [u, R](const Vec& y) -> Mat { return std::sqrt(2.0) * u.gradient(R * y) * R; };

  MetricField G1(2, [G, R](const Vec& y) -> Mat { return R.transpose() * G(R * y) * R; });

  RotationIdentity out;
  out.lhs = metric_deficit(u, G, CaseTag::nextNearest2d, quad);
  out.rhs = metric_deficit(v, G1, CaseTag::nearest2d, quad);
  out.difference = out.lhs - out.rhs;
  return out;
}

}  // namespace prelat
