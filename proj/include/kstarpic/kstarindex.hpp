#pragma once

// Picard index machinery special to defining matrices: the mu/nu minor
// functions, the four minor collections and their shared gcd, the explicit
// chart-comparison system built from block data, and the product formula
// for the Picard index.

#include <vector>

#include "kstarpic/defmat.hpp"
#include "kstarpic/exactlin.hpp"
#include "kstarpic/toricpic.hpp"

namespace kstarpic {

// mu(j_0, ..., j_r) = sum_i d_{i j_i} * prod_{k != i} l_{k j_k}; the j are
// 1-based block positions.  Equals the determinant of the columns
// v_{0 j_0}, ..., v_{r j_r} up to a global sign convention.
Int mu(const DefiningMatrix& dm, const std::vector<int>& j);
Int mu_hat(const DefiningMatrix& dm);  // mu(n_0, ..., n_r)

// nu(i; j, j') = l_ij d_ij' - l_ij' d_ij, and nu_hat(i, j) = nu(i; j, n_i).
Int nu(const DefiningMatrix& dm, int i, int j, int jp);
Int nu_hat(const DefiningMatrix& dm, int i, int j);

// Explicit chart-comparison system assembled from the block data, with the
// bookkeeping needed for reduced minors.
struct HatSystem {
  int bigN_dim = 0;  // sum of chart lattice ranks
  int bigF_dim = 0;  // sum of chart ray counts
  int hatN_dim = 0;
  int hatF_dim = 0;
  IntMatrix alpha;   // dim x bigN_dim
  IntMatrix beta;    // n x bigF_dim
  IntMatrix Pblocks; // bigN_dim x bigF_dim, block-diagonal chart matrices
  IntMatrix gamma;   // bigN_dim x hatN_dim, kernel basis of alpha
  IntMatrix delta;   // bigF_dim x hatF_dim, kernel basis of beta
  IntMatrix Phat;    // hatN_dim x hatF_dim, gamma * Phat = Pblocks * delta
  // Reduced-minor bookkeeping: for each pair position (i, j), j = 1..n_i'
  // in lexicographic order, the hatN row indices of (e_ij, u_ij) and the
  // hatF column index of f_ij, plus the block entries (l_ij, d_ij).
  struct PairSlot {
    int i = 0, j = 0;
    int row_e = -1, row_u = -1;
    int col_f = -1;
    Int l, d;
  };
  std::vector<PairSlot> pairs;
};

HatSystem hat_system_explicit(const DefiningMatrix& dm);

// The four minor collections.  M_P and M_Phat are multisets (sorted with
// multiplicity); M_prime_P and M_red_Phat are sets (sorted, deduplicated,
// zero values dropped from M_prime_P by convention).
struct MinorSets {
  std::vector<Int> M_P;
  std::vector<Int> M_prime_P;
  std::vector<Int> M_Phat;
  std::vector<Int> M_red_Phat;
  Int gcd_value;  // common gcd of all four collections
};

// Compute the minor collections; the full subset enumerations for M_Phat
// and M_red_Phat are only performed when the number of row subsets is at
// most enum_cap (the gcds are always computed via the Smith route).  When
// skipped, the corresponding vectors are left empty.
MinorSets minor_sets(const DefiningMatrix& dm, long long enum_cap = 2000000);

// gcd of the maximal minors of the assembled matrix = order of the torsion
// part of the divisor class group.
Int class_group_torsion_order(const DefiningMatrix& dm);

// Picard index via the product formula: product of the local class group
// orders over all fixed-point cones divided by the torsion order of Cl.
Int picard_index_product_formula(const DefiningMatrix& dm);

}  // namespace kstarpic
