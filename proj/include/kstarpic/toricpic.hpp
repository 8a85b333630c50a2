#pragma once

// Divisor class groups, local class groups, and Picard groups of toric
// varieties given by fans, computed exactly in two independent ways: a
// direct gluing computation and one through the comparison map of charts.

#include <string>
#include <vector>

#include "kstarpic/defmat.hpp"
#include "kstarpic/exactlin.hpp"

namespace kstarpic {

// Presentation of the divisor class group Cl = Z^n / im(rays^T) with the
// coordinate data needed to express classes of lattice vectors in a fixed
// canonical (invariant-factor) coordinate system.
struct ClPresentation {
  AbelianGroup group;
  int n = 0;             // number of rays
  int dim = 0;           // lattice rank
  IntMatrix U;           // left Smith transform of rays^T (n x n)
  std::vector<Int> dvals;        // invariant factors of rays^T
  std::vector<int> torsion_rows;  // rows of U giving Z/d coordinates (d > 1)
  std::vector<int> free_rows;     // rows of U giving Z coordinates

  // Coordinates of the class of x in Z^n: first the torsion coordinates
  // (reduced into [0, d)), then the free coordinates.
  std::vector<Int> class_coords(const std::vector<Int>& x) const;
};

ClPresentation class_group_presentation(const Fan& fan);
AbelianGroup class_group(const Fan& fan);

// Chart data of one cone: canonical basis of the saturated sublattice
// spanned by its rays, the rays in that basis, and the local class group.
struct LocalChart {
  std::vector<int> cone;  // ray indices
  IntMatrix basis;        // dim x k, column-Hermite basis of lin(cone) cap N
  IntMatrix P_sigma;      // k x |cone|: cone rays in basis coordinates
  AbelianGroup group;     // local class group = coker(P_sigma^T)
  bool simplicial = false;
  Int order() const;  // |group| for finite groups; 0 marks infinite
};

LocalChart local_class_group(const Fan& fan, int cone_index);

// Canonical description of the subgroup of a finitely generated group K
// (given in invariant-factor coordinates) generated by a list of vectors:
// the column-Hermite form of the generators together with the torsion
// relations.  Two generator lists span the same subgroup iff the canonical
// forms agree.
IntMatrix subgroup_canonical(const ClPresentation& pres,
                             const std::vector<std::vector<Int>>& gens_coords);

struct PicardData {
  AbelianGroup class_group;
  std::vector<LocalChart> local;  // aligned with fan.max_cones
  Int local_order_product = 0;    // product of local class group orders
  AbelianGroup khat;              // obstruction quotient; finite here
  Int pic_index = 0;              // index of the Picard group in Cl
  int pic_rank = 0;
  bool pic_torsion_free = false;
  bool alpha_surjective = false;  // chart-sum map onto the lattice
  AbelianGroup pic_group;
  // Generators of the Picard group inside Cl, in the canonical coordinates
  // of class_group_presentation (torsion coordinates first, then free).
  std::vector<std::vector<Int>> pic_generators;
  IntMatrix pic_subgroup_hnf;  // canonical form of the generated subgroup
};

// Direct route: intersect the images of the chart presentations inside Z^n,
// then read the Picard group off as a finite-index subgroup of Cl.
PicardData picard_direct(const Fan& fan);

// Chart-comparison route: assemble the comparison map between the kernels
// of the chart-sum maps and compute the obstruction quotient from it.
PicardData picard_via_hat(const Fan& fan);

// Fan of the weighted projective space with the given positive weights
// (pairwise coprime ensures well-formedness).  dim = weights.size() - 1.
Fan wps_fan(const std::vector<Int>& weights);

}  // namespace kstarpic
