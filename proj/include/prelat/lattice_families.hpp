#pragma once

#include "prelat/geometry.hpp"
#include "prelat/types.hpp"

#include <vector>

namespace prelat {

/**
 * Interaction bookkeeping for one squared radius: the canonical multisets
 * zeta with |zeta|^2 = radius_sq, their signed-permutation orbits, and the
 * integer lattice bases generated from each orbit member. Counting here is
 * deliberately without deduplication across bases; the representation
 * weights assume every (orbit member, nonzero slot) pair contributes its own
 * family.
 */

struct Shell {
  int dim = 0;
  long radius_sq = 0;
  // Canonical members: coordinates sorted descending, nonnegative.
  std::vector<VecI> members;
};

// May be empty (radius_sq not a sum of dim squares); that is a value, not an
// error. radius_sq >= 1.
Shell enumerate_shell(int dim, long radius_sq);

// All distinct vectors obtained from zeta by permuting coordinates and
// flipping signs, in lexicographic order.
std::vector<VecI> signed_orbit(const VecI& zeta);

// 2^k n! / (k_1! ... k_m!): k nonzero entries, k_i multiplicities of the
// distinct values. Matches signed_orbit().size() exactly.
unsigned long long orbit_size_count(const VecI& zeta);

int nonzero_count(const VecI& v);

// Exact integer determinant (Bareiss elimination in 64-bit).
long long integer_det(const MatI& M);

/**
 * Nonsingular integer basis built from xi != 0: column 1 is xi, the next
 * k - 1 columns flip the sign of one other nonzero coordinate each (cycling
 * from position sbar), and the remaining columns move the sbar-th nonzero
 * entry into each zero slot. Every column has the same squared length as xi
 * and |det| is a nonzero integer.
 *
 * sbar is 1-based among the nonzero coordinates in increasing coordinate
 * order, 1 <= sbar <= k.
 */
MatI basis_from_vector(const VecI& xi, int sbar);

/**
 * Unit-scale translation representatives V_B: integer points in
 * (interior of B*[0,1]^n, union the images of the upper faces {x_i = 1})
 * minus the images of the cube vertices. Containment tests are exact
 * (adjugate times point compared against the determinant, all integer).
 * Scale by eps for the lattice translates used in the representation.
 */
std::vector<VecI> lattice_translations(const MatI& B);

struct LatticeFamily {
  VecI source;                // orbit member the basis was built from
  int sbar = 1;               // nonzero slot choice
  MatI basis;
  long long det = 0;
  std::vector<VecI> shifts;   // V_B at unit scale
};

// One family per (orbit member, nonzero slot): k * |N_zeta| families, in
// deterministic order (orbit lexicographic, then sbar ascending).
std::vector<LatticeFamily> lattice_set(const VecI& zeta);

/**
 * Base nodes alpha of eps * Z^n with the closed segment
 * [eps*alpha, eps*(alpha + xi)] inside the open convex region: by convexity
 * exactly the alpha whose two endpoints are inside, which keeps the test
 * exact for boxes. Lexicographic order.
 */
std::vector<VecI> interacting_nodes(const VecI& xi, double eps, const Domain& region);
std::vector<VecI> interacting_nodes(const VecI& xi, double eps, const ShrunkenDomain& region);

}  // namespace prelat
