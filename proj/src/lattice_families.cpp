#include "prelat/lattice_families.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace prelat {

namespace {

bool lex_less(const VecI& a, const VecI& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

void descend(int dim, long remaining, int cap, VecI& partial, int pos, std::vector<VecI>& out) {
  if (pos == dim) {
    if (remaining == 0) out.push_back(partial);
    return;
  }
  const int hi = std::min<long>(cap, static_cast<long>(std::sqrt(static_cast<double>(remaining))) + 1);
  for (int v = hi; v >= 0; --v) {
    const long sq = static_cast<long>(v) * v;
    if (sq > remaining) continue;
    partial[pos] = v;
    descend(dim, remaining - sq, v, partial, pos + 1, out);
  }
  partial[pos] = 0;
}

// Adjugate of a small integer matrix: integer cofactors via exact minors.
Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> adjugate(const MatI& B) {
  const int n = static_cast<int>(B.rows());
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  MatI minor(n - 1, n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int rr = 0;
      for (int r = 0; r < n; ++r) {
        if (r == i) continue;
        int cc = 0;
        for (int c = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = B(r, c);
        }
        ++rr;
      }
      const long long cof = (((i + j) % 2) ? -1 : 1) * integer_det(minor);
      adj(j, i) = cof;  // adjugate is the transposed cofactor matrix
    }
  return adj;
}

}  // namespace

Shell enumerate_shell(int dim, long radius_sq) {
  if (dim < 1) throw std::invalid_argument("enumerate_shell: dimension must be positive");
  if (radius_sq < 1) throw std::invalid_argument("enumerate_shell: radius_sq must be >= 1");
  Shell s;
  s.dim = dim;
  s.radius_sq = radius_sq;
  VecI partial = VecI::Zero(dim);
  const int cap = static_cast<int>(std::sqrt(static_cast<double>(radius_sq))) + 1;
  descend(dim, radius_sq, cap, partial, 0, s.members);
  // DFS from the largest leading entry yields lexicographic descending order.
  return s;
}

std::vector<VecI> signed_orbit(const VecI& zeta) {
  const int n = static_cast<int>(zeta.size());
  std::vector<int> sorted(zeta.data(), zeta.data() + n);
  std::sort(sorted.begin(), sorted.end());
  std::vector<VecI> out;
  do {
    std::vector<int> nz;
    for (int i = 0; i < n; ++i)
      if (sorted[i] != 0) nz.push_back(i);
    const int k = static_cast<int>(nz.size());
    for (int mask = 0; mask < (1 << k); ++mask) {
      VecI v(n);
      for (int i = 0; i < n; ++i) v[i] = sorted[i];
      for (int b = 0; b < k; ++b)
        if ((mask >> b) & 1) v[nz[b]] = -v[nz[b]];
      out.push_back(std::move(v));
    }
  } while (std::next_permutation(sorted.begin(), sorted.end()));
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

unsigned long long orbit_size_count(const VecI& zeta) {
  const int n = static_cast<int>(zeta.size());
  std::map<int, int> mult;
  int k = 0;
  for (int i = 0; i < n; ++i) {
    mult[zeta[i]] += 1;
    if (zeta[i] != 0) ++k;
  }
  unsigned long long count = 1;
  for (int i = 2; i <= n; ++i) count *= static_cast<unsigned long long>(i);
  for (const auto& [value, m] : mult) {
    (void)value;
    unsigned long long f = 1;
    for (int i = 2; i <= m; ++i) f *= static_cast<unsigned long long>(i);
    count /= f;
  }
  return count << k;
}

int nonzero_count(const VecI& v) {
  int k = 0;
  for (int i = 0; i < v.size(); ++i)
    if (v[i] != 0) ++k;
  return k;
}

long long integer_det(const MatI& M) {
  if (M.rows() != M.cols() || M.rows() == 0)
    throw std::invalid_argument("integer_det: square matrix required");
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

MatI basis_from_vector(const VecI& xi, int sbar) {
  const int n = static_cast<int>(xi.size());
  std::vector<int> nz, zero;
  for (int i = 0; i < n; ++i) (xi[i] != 0 ? nz : zero).push_back(i);
  const int k = static_cast<int>(nz.size());
  if (k == 0) throw std::invalid_argument("basis_from_vector: zero vector");
  if (sbar < 1 || sbar > k) throw std::invalid_argument("basis_from_vector: sbar out of range");

  MatI B(n, n);
  B.col(0) = xi;
  // Columns 2 .. k: flip one other nonzero coordinate, cycling from sbar.
  for (int p = 2; p <= k; ++p) {
    VecI col = xi;
    const int offset = (p <= k - sbar + 1) ? (sbar + p - 2) : (sbar + p - k - 2);
    col[nz[offset]] = -col[nz[offset]];
    B.col(p - 1) = col;
  }
  // Columns k+1 .. n: move the sbar-th nonzero entry into each zero slot.
  for (int p = k + 1; p <= n; ++p) {
    VecI col = xi;
    col[nz[sbar - 1]] = 0;
    col[zero[p - k - 1]] = xi[nz[sbar - 1]];
    B.col(p - 1) = col;
  }
  if (integer_det(B) == 0) throw std::logic_error("basis_from_vector: singular basis");
  return B;
}

std::vector<VecI> lattice_translations(const MatI& B) {
  const int n = static_cast<int>(B.rows());
  const long long D = integer_det(B);
  if (D == 0) throw std::invalid_argument("lattice_translations: singular basis");
  const long long Dn = std::llabs(D);
  const long long s = (D > 0) ? 1 : -1;
  const auto adj = adjugate(B);

  // Scan the integer bounding box of B*[0,1]^n.
  VecI lo = VecI::Zero(n), hi = VecI::Zero(n);
  for (int i = 0; i < n; ++i) {
    long long a = 0, b = 0;
    for (int j = 0; j < n; ++j) {
      const long long e = B(i, j);
      if (e < 0)
        a += e;
      else
        b += e;
    }
    lo[i] = static_cast<int>(a);
    hi[i] = static_cast<int>(b);
  }

  std::vector<VecI> out;
  VecI p = lo;
  Eigen::Matrix<long long, Eigen::Dynamic, 1> q(n);
  while (true) {
    // q = |D| * B^{-1} p, exactly.
    for (int i = 0; i < n; ++i) {
      long long acc = 0;
      for (int j = 0; j < n; ++j) acc += adj(i, j) * p[j];
      q[i] = s * acc;
    }
    bool in_closed = true, interior = true, is_vertex = true, on_upper = false;
    for (int i = 0; i < n; ++i) {
      if (q[i] < 0 || q[i] > Dn) in_closed = false;
      if (!(q[i] > 0 && q[i] < Dn)) interior = false;
      if (q[i] != 0 && q[i] != Dn) is_vertex = false;
      if (q[i] == Dn) on_upper = true;
    }
    if (in_closed && !is_vertex && (interior || on_upper)) {
      VecI copy = p;
      out.push_back(std::move(copy));
    }
    int axis = 0;
    while (axis < n && p[axis] == hi[axis]) {
      p[axis] = lo[axis];
      ++axis;
    }
    if (axis == n) break;
    p[axis] += 1;
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

std::vector<LatticeFamily> lattice_set(const VecI& zeta) {
  const int k = nonzero_count(zeta);
  if (k == 0) throw std::invalid_argument("lattice_set: zero vector");
  std::vector<LatticeFamily> out;
  for (const VecI& xi : signed_orbit(zeta)) {
    for (int sbar = 1; sbar <= k; ++sbar) {
      LatticeFamily fam;
      fam.source = xi;
      fam.sbar = sbar;
      fam.basis = basis_from_vector(xi, sbar);
      fam.det = integer_det(fam.basis);
      fam.shifts = lattice_translations(fam.basis);
      out.push_back(std::move(fam));
    }
  }
  return out;
}

namespace {

template <typename Region>
std::vector<VecI> interacting_nodes_impl(const VecI& xi, double eps, const Region& region,
                                         const std::pair<Vec, Vec>& bb) {
  const int n = static_cast<int>(xi.size());
  if (eps <= 0) throw std::invalid_argument("interacting_nodes: eps must be positive");
  const auto& [blo, bhi] = bb;
  for (int i = 0; i < n; ++i)
    if (!(blo[i] < bhi[i])) return {};
  VecI lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = static_cast<int>(std::floor(blo[i] / eps)) - std::abs(xi[i]) - 1;
    hi[i] = static_cast<int>(std::ceil(bhi[i] / eps)) + std::abs(xi[i]) + 1;
  }
  std::vector<VecI> out;
  VecI a = lo;
  Vec pa(n), pb(n);
  while (true) {
    for (int i = 0; i < n; ++i) {
      pa[i] = eps * a[i];
      pb[i] = eps * (a[i] + xi[i]);
    }
    // Convexity: endpoint membership decides the whole closed segment.
    if (region.contains(pa) && region.contains(pb)) out.push_back(a);
    int axis = 0;
    while (axis < n && a[axis] == hi[axis]) {
      a[axis] = lo[axis];
      ++axis;
    }
    if (axis == n) break;
    a[axis] += 1;
  }
  return out;
}

}  // namespace

std::vector<VecI> interacting_nodes(const VecI& xi, double eps, const Domain& region) {
  return interacting_nodes_impl(xi, eps, region, region.bounding_box());
}

std::vector<VecI> interacting_nodes(const VecI& xi, double eps, const ShrunkenDomain& region) {
  return interacting_nodes_impl(xi, eps, region, region.bounding_box());
}

}  // namespace prelat
