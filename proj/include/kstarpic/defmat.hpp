#pragma once

// Defining matrices of rational projective surfaces with torus action of
// complexity one: block data, assembly into an integer matrix, validation,
// the associated ambient fan, and the matching fixed-point inventory.

#include <random>
#include <string>
#include <vector>

#include "kstarpic/exactlin.hpp"

namespace kstarpic {

// Source/sink decoration: 'e' marks an elliptic fixed point (no extra ray),
// 'p' a parabolic fixed-point curve (extra ray v+ at the source and/or v- at
// the sink).
enum class DmType { ee, pe, ep, pp };

std::string dm_type_name(DmType t);
bool dm_type_from_name(const std::string& s, DmType& out);

struct DefiningMatrix {
  DmType type = DmType::ee;
  // r+1 blocks; block i has n_i >= 1 entries l_i1.. >= 1 and integers d_i1..
  std::vector<std::vector<Int>> l;
  std::vector<std::vector<Int>> d;

  int r() const { return (int)l.size() - 1; }
  int block_size(int i) const { return (int)l[i].size(); }
  int n_total() const;
  // number of extra rays: 0 (ee), 1 (pe, ep), 2 (pp)
  int m_extra() const;
  bool has_vplus() const { return type == DmType::pe || type == DmType::pp; }
  bool has_vminus() const { return type == DmType::ep || type == DmType::pp; }
};

// Column index layout of the assembled matrix: block columns v_ij in
// lexicographic (i, j) order, then v+ (if present), then v-.
int dm_col_index(const DefiningMatrix& dm, int i, int j);  // j is 1-based
int dm_vplus_index(const DefiningMatrix& dm);
int dm_vminus_index(const DefiningMatrix& dm);

// Assemble the (r+1) x (n+m) integer matrix with columns
// v_ij = l_ij e_i + d_ij e_{r+1} (where e_0 = -(e_1 + ... + e_r)),
// v+ = e_{r+1}, v- = -e_{r+1}.  Requires only shape consistency.
IntMatrix assemble(const DefiningMatrix& dm);

// Full validity check; returns a list of violations (empty = valid):
// shapes, n_i >= 1, l_ij >= 1, gcd(l_ij, d_ij) = 1, strictly decreasing
// slopes d_i1/l_i1 > ... > d_in_i/l_in_i in every block, and the columns of
// the assembled matrix generating the whole space as a cone (checked by rank
// plus exact Fourier-Motzkin elimination).
std::vector<std::string> validate(const DefiningMatrix& dm);
bool is_valid(const DefiningMatrix& dm);

// Simplicial fan of convex rational polyhedral cones, given by its rays (as
// matrix columns) and the ray-index sets of its maximal cones.
struct Fan {
  int dim = 0;
  IntMatrix rays;  // dim x nrays, columns are the primitive ray generators
  std::vector<std::vector<int>> max_cones;  // sorted ray indices
};

// Does the set of columns generate the whole space as a cone (i.e. is every
// vector a nonnegative rational combination)?  Exact: rank test plus
// Fourier-Motzkin infeasibility of the dual system.
bool cone_spans_space(const IntMatrix& cols);

// The ambient fan of a valid defining matrix.  Maximal cones in this fixed
// order: source boundary (sigma+ for ee/ep, or tau_i0 for i = 0..r for
// pe/pp), then interior tau_ij for j = 1..n_i-1 in lexicographic (i, j)
// order, then sink boundary (sigma- for ee/pe, or tau_i n_i for i = 0..r).
Fan ambient_fan(const DefiningMatrix& dm);

enum class FixedPointKind {
  elliptic_plus,
  elliptic_minus,
  hyperbolic,
  parabolic_source,
  parabolic_sink,
};

struct FixedPoint {
  FixedPointKind kind;
  int i = -1;     // block index (hyperbolic and parabolic)
  int j = -1;     // position within block (hyperbolic: 1..n_i-1)
  int cone = -1;  // index into Fan::max_cones
  std::string str() const;
};

// Fixed points aligned one-to-one with ambient_fan(dm).max_cones.
std::vector<FixedPoint> fixed_points(const DefiningMatrix& dm);

// Uniformly-shaped random valid defining matrix for property suites:
// r in {1, 2, 3}, block sizes <= 3, l_ij <= 7, |d_ij| <= 9; resamples until
// validate() passes.
DefiningMatrix random_defining_matrix(std::mt19937_64& rng);

}  // namespace kstarpic
