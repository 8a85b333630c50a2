#pragma once

// Exact integer linear algebra over GMP integers: Hermite and Smith normal
// forms with transformation matrices, kernels, cokernels, minor enumeration,
// and exact linear solving.  Everything is deterministic; no floating point.

#include <gmpxx.h>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace kstarpic {

using Int = mpz_class;
using Rat = mpq_class;

// gcd with nonnegative result; gcd(0,0) = 0.
Int igcd(const Int& a, const Int& b);
Int ilcm(const Int& a, const Int& b);
// Floor division (rounds toward -infinity); b must be nonzero.
Int fdiv(const Int& a, const Int& b);

// Dense matrix of arbitrary-precision integers, row-major.
struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Int> a;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), a((size_t)r * (size_t)c) {}

  Int& at(int i, int j) { return a[(size_t)i * cols + j]; }
  const Int& at(int i, int j) const { return a[(size_t)i * cols + j]; }

  static IntMatrix identity(int n);
  // Convenience constructor for literals in tests and fixtures.
  static IntMatrix from_rows(std::initializer_list<std::initializer_list<long long>> rws);

  bool operator==(const IntMatrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
  bool is_zero() const;
  std::string str() const;  // human-readable, for diagnostics
};

IntMatrix transpose(const IntMatrix& A);
IntMatrix mul(const IntMatrix& A, const IntMatrix& B);
IntMatrix hstack(const IntMatrix& A, const IntMatrix& B);
IntMatrix vstack(const IntMatrix& A, const IntMatrix& B);
IntMatrix neg(const IntMatrix& A);
// Columns of A selected by idx, in the given order.
IntMatrix submatrix_cols(const IntMatrix& A, const std::vector<int>& idx);
IntMatrix submatrix_rows(const IntMatrix& A, const std::vector<int>& idx);
std::vector<Int> get_col(const IntMatrix& A, int j);
std::vector<Int> get_row(const IntMatrix& A, int i);

// Determinant of a square matrix (Bareiss fraction-free elimination).
Int det(const IntMatrix& A);

int rank(const IntMatrix& A);

// Column-style Hermite normal form: canonical representative of A under
// right multiplication by unimodular matrices.  Pivots are positive and sit
// in lower-echelon position; in each pivot row the entries to the LEFT of
// the pivot are reduced into [0, pivot); zero columns are moved to the
// right end.  hnf([[2,4],[0,2]]) = [[2,0],[0,2]].
IntMatrix hnf(const IntMatrix& A);

// Row-style Hermite normal form: canonical under LEFT unimodular action.
// Equals transpose(hnf(transpose(A))).
IntMatrix hnf_row(const IntMatrix& A);

// Smith normal form: U * A * V = diag(d) with U, V unimodular, d nonnegative
// with the divisibility chain d[0] | d[1] | ... ; trailing entries zero.
struct SmithForm {
  IntMatrix U;         // rows x rows
  IntMatrix V;         // cols x cols
  std::vector<Int> d;  // min(rows, cols) entries
  int rank = 0;        // number of nonzero d
};
SmithForm snf(const IntMatrix& A);

// Basis of the integer kernel {x : A x = 0}, as columns; the basis spans a
// saturated sublattice (it is the full kernel lattice, not a finite-index
// sublattice).  Returned as the trailing columns of the SNF right transform.
IntMatrix kernel_basis(const IntMatrix& A);

// Finitely generated abelian group in invariant-factor form.
struct AbelianGroup {
  int rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1, each dividing the next

  bool operator==(const AbelianGroup& o) const = default;
  bool is_trivial() const { return rank == 0 && torsion.empty(); }
  Int torsion_order() const;
  std::string str() const;  // e.g. "Z^2 x Z/4"
};

// Cokernel Z^rows / (A * Z^cols).
AbelianGroup cokernel(const IntMatrix& A);

// All maximal minors: absolute determinants of the square submatrices formed
// by every size-min(rows,cols) subset of the longer dimension, subsets in
// lexicographic order.  Requires rows != cols to pick the direction; for
// square input the single value |det A|.
std::vector<Int> maximal_minors(const IntMatrix& A);

// gcd of all maximal minors, computed from the Smith normal form (product of
// invariant factors); 0 when rank < min(rows, cols).
Int gcd_maximal_minors(const IntMatrix& A);

// Exact integral solution X of A X = B, if one exists.
std::optional<IntMatrix> solve_exact(const IntMatrix& A, const IntMatrix& B);

// Basis (as columns, in column-HNF) of the saturation of the column span of
// A: the smallest saturated sublattice containing all columns.  Computed as
// the double orthogonal complement, so no transform inverses are needed.
IntMatrix saturated_span_basis(const IntMatrix& A);

}  // namespace kstarpic
