#include "kstarpic/exactlin.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace kstarpic {

Int igcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Int ilcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Int fdiv(const Int& a, const Int& b) {
  assert(b != 0);
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix I(n, n);
  for (int i = 0; i < n; ++i) I.at(i, i) = 1;
  return I;
}

IntMatrix IntMatrix::from_rows(std::initializer_list<std::initializer_list<long long>> rws) {
  IntMatrix A;
  A.rows = (int)rws.size();
  A.cols = A.rows ? (int)rws.begin()->size() : 0;
  A.a.reserve((size_t)A.rows * A.cols);
  for (const auto& r : rws) {
    assert((int)r.size() == A.cols);
    for (long long v : r) A.a.emplace_back((long)v);
  }
  return A;
}

bool IntMatrix::is_zero() const {
  for (const Int& v : a)
    if (v != 0) return false;
  return true;
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows; ++i) {
    os << (i ? " [" : "[");
    for (int j = 0; j < cols; ++j) os << (j ? "," : "") << at(i, j).get_str();
    os << "]" << (i + 1 < rows ? "\n" : "");
  }
  os << "]";
  return os.str();
}

IntMatrix transpose(const IntMatrix& A) {
  IntMatrix T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

IntMatrix mul(const IntMatrix& A, const IntMatrix& B) {
  assert(A.cols == B.rows);
  IntMatrix C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const Int& aik = A.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < B.cols; ++j) C.at(i, j) += aik * B.at(k, j);
    }
  return C;
}

IntMatrix hstack(const IntMatrix& A, const IntMatrix& B) {
  assert(A.rows == B.rows);
  IntMatrix C(A.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
    for (int j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
  }
  return C;
}

IntMatrix vstack(const IntMatrix& A, const IntMatrix& B) {
  assert(A.cols == B.cols);
  IntMatrix C(A.rows + B.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) C.at(A.rows + i, j) = B.at(i, j);
  return C;
}

IntMatrix neg(const IntMatrix& A) {
  IntMatrix B = A;
  for (Int& v : B.a) v = -v;
  return B;
}

IntMatrix submatrix_cols(const IntMatrix& A, const std::vector<int>& idx) {
  IntMatrix C(A.rows, (int)idx.size());
  for (int j = 0; j < (int)idx.size(); ++j) {
    assert(idx[j] >= 0 && idx[j] < A.cols);
    for (int i = 0; i < A.rows; ++i) C.at(i, j) = A.at(i, idx[j]);
  }
  return C;
}

IntMatrix submatrix_rows(const IntMatrix& A, const std::vector<int>& idx) {
  IntMatrix C((int)idx.size(), A.cols);
  for (int i = 0; i < (int)idx.size(); ++i) {
    assert(idx[i] >= 0 && idx[i] < A.rows);
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(idx[i], j);
  }
  return C;
}

std::vector<Int> get_col(const IntMatrix& A, int j) {
  std::vector<Int> v(A.rows);
  for (int i = 0; i < A.rows; ++i) v[i] = A.at(i, j);
  return v;
}

std::vector<Int> get_row(const IntMatrix& A, int i) {
  std::vector<Int> v(A.cols);
  for (int j = 0; j < A.cols; ++j) v[j] = A.at(i, j);
  return v;
}

Int det(const IntMatrix& A) {
  assert(A.rows == A.cols);
  int n = A.rows;
  if (n == 0) return 1;
  IntMatrix M = A;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (M.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (M.at(i, k) != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(M.at(k, j), M.at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int t = M.at(i, j) * M.at(k, k) - M.at(i, k) * M.at(k, j);
        // Exact by the Bareiss identity.
        Int q;
        mpz_divexact(q.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        M.at(i, j) = q;
      }
    prev = M.at(k, k);
  }
  return sign > 0 ? M.at(n - 1, n - 1) : -M.at(n - 1, n - 1);
}

namespace {

void swap_cols(IntMatrix& M, int j1, int j2) {
  if (j1 == j2) return;
  for (int i = 0; i < M.rows; ++i) std::swap(M.at(i, j1), M.at(i, j2));
}

void swap_rows(IntMatrix& M, int i1, int i2) {
  if (i1 == i2) return;
  for (int j = 0; j < M.cols; ++j) std::swap(M.at(i1, j), M.at(i2, j));
}

// col[j2] -= q * col[j1]
void addmul_col(IntMatrix& M, int j2, int j1, const Int& q) {
  if (q == 0) return;
  for (int i = 0; i < M.rows; ++i) M.at(i, j2) -= q * M.at(i, j1);
}

void addmul_row(IntMatrix& M, int i2, int i1, const Int& q) {
  if (q == 0) return;
  for (int j = 0; j < M.cols; ++j) M.at(i2, j) -= q * M.at(i1, j);
}

void negate_col(IntMatrix& M, int j) {
  for (int i = 0; i < M.rows; ++i) M.at(i, j) = -M.at(i, j);
}

void negate_row(IntMatrix& M, int i) {
  for (int j = 0; j < M.cols; ++j) M.at(i, j) = -M.at(i, j);
}

// Replace columns (j1, j2) by (p*c1 + q*c2, -(b/g)*c1 + (a/g)*c2) where
// a = M(row, j1), b = M(row, j2), g = p*a + q*b = gcd(a, b).  Afterwards
// M(row, j1) = g and M(row, j2) = 0; the transform is unimodular.
void gcd_combine_cols(IntMatrix& M, int row, int j1, int j2) {
  Int a = M.at(row, j1), b = M.at(row, j2);
  Int g, p, q;
  mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Int am = a / g, bm = b / g;
  for (int i = 0; i < M.rows; ++i) {
    Int c1 = M.at(i, j1), c2 = M.at(i, j2);
    M.at(i, j1) = p * c1 + q * c2;
    M.at(i, j2) = am * c2 - bm * c1;
  }
}

}  // namespace

IntMatrix hnf(const IntMatrix& A) {
  IntMatrix H = A;
  int pc = 0;  // next pivot column
  for (int row = 0; row < H.rows && pc < H.cols; ++row) {
    int piv = -1;
    for (int j = pc; j < H.cols; ++j)
      if (H.at(row, j) != 0) {
        piv = j;
        break;
      }
    if (piv < 0) continue;
    swap_cols(H, pc, piv);
    for (int j = pc + 1; j < H.cols; ++j)
      if (H.at(row, j) != 0) gcd_combine_cols(H, row, pc, j);
    if (H.at(row, pc) < 0) negate_col(H, pc);
    for (int j = 0; j < pc; ++j) addmul_col(H, j, pc, fdiv(H.at(row, j), H.at(row, pc)));
    ++pc;
  }
  return H;
}

IntMatrix hnf_row(const IntMatrix& A) { return transpose(hnf(transpose(A))); }

SmithForm snf(const IntMatrix& A) {
  SmithForm S;
  IntMatrix M = A;
  S.U = IntMatrix::identity(A.rows);
  S.V = IntMatrix::identity(A.cols);
  int mn = std::min(A.rows, A.cols);
  S.d.assign(mn, Int(0));

  for (int t = 0; t < mn; ++t) {
    // Pick the nonzero entry of smallest absolute value as the pivot.
    int pi = -1, pj = -1;
    Int best;
    for (int i = t; i < M.rows; ++i)
      for (int j = t; j < M.cols; ++j) {
        const Int& v = M.at(i, j);
        if (v == 0) continue;
        Int av = abs(v);
        if (pi < 0 || av < best) {
          best = av;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;  // remaining block is zero

    // Gcd descent with coefficient-size control: every sweep re-selects
    // the globally smallest pivot and reduces with nearest quotients, so
    // remainders at most halve and entries stay tame.
    for (;;) {
      swap_rows(M, t, pi);
      swap_rows(S.U, t, pi);
      swap_cols(M, t, pj);
      swap_cols(S.V, t, pj);
      if (M.at(t, t) < 0) {
        negate_row(M, t);
        negate_row(S.U, t);
      }
      const Int piv = M.at(t, t);
      bool changed = false;
      for (int i = t + 1; i < M.rows; ++i) {
        if (M.at(i, t) == 0) continue;
        Int q = fdiv(M.at(i, t), piv);
        Int r = M.at(i, t) - q * piv;
        if (2 * r > piv) q += 1;  // nearest quotient
        addmul_row(M, i, t, q);
        addmul_row(S.U, i, t, q);
        if (M.at(i, t) != 0) changed = true;
      }
      for (int j = t + 1; j < M.cols; ++j) {
        if (M.at(t, j) == 0) continue;
        Int q = fdiv(M.at(t, j), piv);
        Int r = M.at(t, j) - q * piv;
        if (2 * r > piv) q += 1;
        addmul_col(M, j, t, q);
        addmul_col(S.V, j, t, q);
        if (M.at(t, j) != 0) changed = true;
      }
      if (!changed) {
        // Row t and column t are clear; enforce that the pivot divides
        // every remaining entry (this yields the divisibility chain).
        int bi = -1;
        for (int i = t + 1; i < M.rows && bi < 0; ++i)
          for (int j = t + 1; j < M.cols; ++j)
            if (M.at(i, j) % piv != 0) {
              bi = i;
              break;
            }
        if (bi < 0) break;
        addmul_row(M, t, bi, Int(-1));  // row t += row bi
        addmul_row(S.U, t, bi, Int(-1));
      }
      // Re-pick the smallest pivot in the block and sweep again.
      pi = -1;
      pj = -1;
      for (int i = t; i < M.rows; ++i)
        for (int j = t; j < M.cols; ++j) {
          const Int& v = M.at(i, j);
          if (v == 0) continue;
          Int av = abs(v);
          if (pi < 0 || av < best) {
            best = av;
            pi = i;
            pj = j;
          }
        }
      assert(pi >= 0);  // the pivot position itself is nonzero
    }
    S.d[t] = M.at(t, t);
    S.rank = t + 1;
  }
  return S;
}

IntMatrix kernel_basis(const IntMatrix& A) {
  SmithForm S = snf(A);
  std::vector<int> idx;
  for (int j = S.rank; j < A.cols; ++j) idx.push_back(j);
  // Hermite-reduce: same lattice, canonical small-entry basis.
  return hnf(submatrix_cols(S.V, idx));
}

int rank(const IntMatrix& A) { return snf(A).rank; }

Int AbelianGroup::torsion_order() const {
  Int p = 1;
  for (const Int& t : torsion) p *= t;
  return p;
}

std::string AbelianGroup::str() const {
  std::ostringstream os;
  bool first = true;
  if (rank == 1) {
    os << "Z";
    first = false;
  } else if (rank > 1) {
    os << "Z^" << rank;
    first = false;
  }
  for (const Int& t : torsion) {
    if (!first) os << " x ";
    os << "Z/" << t.get_str();
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

AbelianGroup cokernel(const IntMatrix& A) {
  SmithForm S = snf(A);
  AbelianGroup G;
  G.rank = A.rows - S.rank;
  for (int i = 0; i < S.rank; ++i)
    if (S.d[i] > 1) G.torsion.push_back(S.d[i]);
  return G;
}

namespace {

// Visit all k-subsets of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(int n, int k, F&& f) {
  if (k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<Int> maximal_minors(const IntMatrix& A) {
  std::vector<Int> out;
  if (A.rows <= A.cols) {
    for_each_subset(A.cols, A.rows, [&](const std::vector<int>& idx) {
      out.push_back(abs(det(submatrix_cols(A, idx))));
    });
  } else {
    for_each_subset(A.rows, A.cols, [&](const std::vector<int>& idx) {
      out.push_back(abs(det(submatrix_rows(A, idx))));
    });
  }
  return out;
}

Int gcd_maximal_minors(const IntMatrix& A) {
  int mn = std::min(A.rows, A.cols);
  SmithForm S = snf(A);
  if (S.rank < mn) return 0;
  Int p = 1;
  for (int i = 0; i < mn; ++i) p *= S.d[i];
  return p;
}

std::optional<IntMatrix> solve_exact(const IntMatrix& A, const IntMatrix& B) {
  assert(A.rows == B.rows);
  SmithForm S = snf(A);
  IntMatrix UB = mul(S.U, B);
  IntMatrix Y(A.cols, B.cols);
  for (int i = 0; i < A.rows; ++i) {
    if (i < S.rank) {
      for (int j = 0; j < B.cols; ++j) {
        if (UB.at(i, j) % S.d[i] != 0) return std::nullopt;
        Y.at(i, j) = UB.at(i, j) / S.d[i];
      }
    } else {
      for (int j = 0; j < B.cols; ++j)
        if (UB.at(i, j) != 0) return std::nullopt;
    }
  }
  return mul(S.V, Y);
}

IntMatrix saturated_span_basis(const IntMatrix& A) {
  // Orthogonal complement of the column span, then its complement again:
  // the result is the saturation of the span, independent of A's generators.
  IntMatrix K1 = kernel_basis(transpose(A));   // A.rows x s
  IntMatrix K2 = kernel_basis(transpose(K1));  // A.rows x rank(A)
  return hnf(K2);
}

}  // namespace kstarpic
