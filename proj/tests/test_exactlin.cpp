#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "kstarpic/exactlin.hpp"
#include "kstarpic/selftest.hpp"

using namespace kstarpic;

namespace {

long long rnd(std::mt19937_64& rng, long long lo, long long hi) {
  return lo + (long long)(rng() % (unsigned long long)(hi - lo + 1));
}

IntMatrix random_matrix(std::mt19937_64& rng, int r, int c, long long bound) {
  IntMatrix A(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) A.at(i, j) = Int((long)rnd(rng, -bound, bound));
  return A;
}

// Random unimodular matrix: product of elementary column operations.
IntMatrix random_unimodular(std::mt19937_64& rng, int n, int ops) {
  IntMatrix V = IntMatrix::identity(n);
  for (int t = 0; t < ops; ++t) {
    int kind = (int)rnd(rng, 0, 2);
    int j1 = (int)rnd(rng, 0, n - 1), j2 = (int)rnd(rng, 0, n - 1);
    if (kind == 0 && j1 != j2) {
      for (int i = 0; i < n; ++i) std::swap(V.at(i, j1), V.at(i, j2));
    } else if (kind == 1) {
      for (int i = 0; i < n; ++i) V.at(i, j1) = -V.at(i, j1);
    } else if (j1 != j2) {
      Int k((long)rnd(rng, -3, 3));
      for (int i = 0; i < n; ++i) V.at(i, j2) += k * V.at(i, j1);
    }
  }
  return V;
}

// Shape predicate for the column-style Hermite normal form: nonzero columns
// first; pivot (= first nonzero entry) of each nonzero column positive, at
// strictly increasing row positions; in each pivot row the entries to the
// left are in [0, pivot).
bool is_column_hnf_shape(const IntMatrix& H) {
  int prev_pivot_row = -1;
  bool seen_zero_col = false;
  for (int j = 0; j < H.cols; ++j) {
    int p = -1;
    for (int i = 0; i < H.rows; ++i)
      if (H.at(i, j) != 0) {
        p = i;
        break;
      }
    if (p < 0) {
      seen_zero_col = true;
      continue;
    }
    if (seen_zero_col) return false;
    if (p <= prev_pivot_row) return false;
    prev_pivot_row = p;
    if (H.at(p, j) <= 0) return false;
    for (int j2 = 0; j2 < j; ++j2)
      if (H.at(p, j2) < 0 || H.at(p, j2) >= H.at(p, j)) return false;
  }
  return true;
}

// Independent oracle for 2x2 column HNF: breadth-first search over
// elementary column operations with bounded entries, collecting every
// reachable matrix that satisfies the shape predicate.  Canonicity of the
// Hermite form means exactly one such matrix must appear, and it must equal
// hnf(A).
std::set<std::array<long long, 4>> bfs_hnf_candidates(std::array<long long, 4> start,
                                                      long long bound) {
  std::set<std::array<long long, 4>> seen;
  std::set<std::array<long long, 4>> hits;
  std::queue<std::array<long long, 4>> q;
  seen.insert(start);
  q.push(start);
  auto ok = [bound](const std::array<long long, 4>& m) {
    for (long long v : m)
      if (v > bound || v < -bound) return false;
    return true;
  };
  while (!q.empty()) {
    auto m = q.front();
    q.pop();
    IntMatrix M(2, 2);
    M.at(0, 0) = (long)m[0];
    M.at(0, 1) = (long)m[1];
    M.at(1, 0) = (long)m[2];
    M.at(1, 1) = (long)m[3];
    if (is_column_hnf_shape(M)) hits.insert(m);
    std::vector<std::array<long long, 4>> next;
    next.push_back({m[1], m[0], m[3], m[2]});                    // swap columns
    next.push_back({-m[0], m[1], -m[2], m[3]});                  // negate col 0
    next.push_back({m[0], -m[1], m[2], -m[3]});                  // negate col 1
    next.push_back({m[0] + m[1], m[1], m[2] + m[3], m[3]});      // c0 += c1
    next.push_back({m[0] - m[1], m[1], m[2] - m[3], m[3]});      // c0 -= c1
    next.push_back({m[0], m[1] + m[0], m[2], m[3] + m[2]});      // c1 += c0
    next.push_back({m[0], m[1] - m[0], m[2], m[3] - m[2]});      // c1 -= c0
    for (auto& nm : next)
      if (ok(nm) && seen.insert(nm).second) q.push(nm);
  }
  return hits;
}

// gcd of all k x k minors by direct enumeration (independent of the Smith
// form code path).
Int minor_gcd_enum(const IntMatrix& A, int k) {
  std::vector<int> ridx(k), cidx(k);
  Int g = 0;
  std::vector<int> rsel, csel;
  // enumerate k-subsets of rows and columns
  std::vector<std::vector<int>> rsubs, csubs;
  auto gen = [](int n, int k) {
    std::vector<std::vector<int>> out;
    if (k > n) return out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      out.push_back(idx);
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
  };
  rsubs = gen(A.rows, k);
  csubs = gen(A.cols, k);
  for (const auto& rs : rsubs)
    for (const auto& cs : csubs) g = igcd(g, det(submatrix_cols(submatrix_rows(A, rs), cs)));
  return g;
}

}  // namespace

TEST_CASE("hermite form: fixed examples") {
  CHECK(hnf(IntMatrix::from_rows({{2, 4}, {0, 2}})) == IntMatrix::from_rows({{2, 0}, {0, 2}}));
  CHECK(hnf(IntMatrix::identity(3)) == IntMatrix::identity(3));
  // zero columns move to the right
  CHECK(hnf(IntMatrix::from_rows({{0, 3}, {0, 0}})) == IntMatrix::from_rows({{3, 0}, {0, 0}}));
  // negative pivots become positive
  CHECK(hnf(IntMatrix::from_rows({{-5}})) == IntMatrix::from_rows({{5}}));
  // left-of-pivot reduction into [0, pivot)
  CHECK(hnf(IntMatrix::from_rows({{1, 0}, {7, 3}})) == IntMatrix::from_rows({{1, 0}, {1, 3}}));
}

TEST_CASE("hermite form: exhaustive 2x2 against breadth-first oracle") {
  for (long long a = -2; a <= 2; ++a)
    for (long long b = -2; b <= 2; ++b)
      for (long long c = -2; c <= 2; ++c)
        for (long long d = -2; d <= 2; ++d) {
          auto hits = bfs_hnf_candidates({a, b, c, d}, 16);
          REQUIRE(hits.size() == 1);
          IntMatrix A(2, 2);
          A.at(0, 0) = (long)a;
          A.at(0, 1) = (long)b;
          A.at(1, 0) = (long)c;
          A.at(1, 1) = (long)d;
          IntMatrix H = hnf(A);
          auto m = *hits.begin();
          CHECK(H.at(0, 0) == (long)m[0]);
          CHECK(H.at(0, 1) == (long)m[1]);
          CHECK(H.at(1, 0) == (long)m[2]);
          CHECK(H.at(1, 1) == (long)m[3]);
        }
  // the running fixed example through the same oracle, wider bound
  auto hits = bfs_hnf_candidates({2, 4, 0, 2}, 32);
  REQUIRE(hits.size() == 1);
  CHECK((*hits.begin()) == std::array<long long, 4>{2, 0, 0, 2});
}

TEST_CASE("hermite form: right-unimodular invariance, idempotence, shape") {
  std::mt19937_64 rng(20240817);
  for (int t = 0; t < 300; ++t) {
    int r = (int)rnd(rng, 1, 5), c = (int)rnd(rng, 1, 6);
    IntMatrix A = random_matrix(rng, r, c, 9);
    IntMatrix H = hnf(A);
    CHECK(is_column_hnf_shape(H));
    CHECK(hnf(H) == H);
    IntMatrix V = random_unimodular(rng, c, 12);
    CHECK(hnf(mul(A, V)) == H);
    // row form: canonical under left action
    IntMatrix U = random_unimodular(rng, r, 12);
    CHECK(hnf_row(mul(transpose(U), A)) == hnf_row(A));
  }
}

TEST_CASE("smith form: transforms, chain, minor-gcd cross-check") {
  std::mt19937_64 rng(911);
  for (int t = 0; t < 200; ++t) {
    int r = (int)rnd(rng, 1, 5), c = (int)rnd(rng, 1, 5);
    IntMatrix A = random_matrix(rng, r, c, 8);
    SmithForm S = snf(A);
    CHECK(abs(det(S.U)) == 1);
    CHECK(abs(det(S.V)) == 1);
    IntMatrix D = mul(mul(S.U, A), S.V);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        if (i == j && i < (int)S.d.size())
          CHECK(D.at(i, j) == S.d[i]);
        else
          CHECK(D.at(i, j) == 0);
      }
    for (int i = 0; i + 1 < (int)S.d.size(); ++i) {
      if (S.d[i + 1] != 0) {
        REQUIRE(S.d[i] != 0);
        CHECK(S.d[i + 1] % S.d[i] == 0);
      }
    }
    // product of invariant factors up to rank equals the gcd of rank-sized
    // minors (computed by independent enumeration)
    if (S.rank > 0) {
      Int prod = 1;
      for (int i = 0; i < S.rank; ++i) prod *= S.d[i];
      CHECK(prod == minor_gcd_enum(A, S.rank));
    }
  }
  // all-k cross-check on a small sub-suite
  for (int t = 0; t < 40; ++t) {
    IntMatrix A = random_matrix(rng, 3, 4, 5);
    SmithForm S = snf(A);
    Int prod = 1;
    for (int k = 1; k <= S.rank; ++k) {
      prod *= S.d[k - 1];
      CHECK(prod == minor_gcd_enum(A, k));
    }
  }
}

TEST_CASE("kernel: exactness and saturation") {
  std::mt19937_64 rng(424242);
  for (int t = 0; t < 200; ++t) {
    int r = (int)rnd(rng, 1, 4), c = (int)rnd(rng, 1, 6);
    IntMatrix A = random_matrix(rng, r, c, 7);
    IntMatrix K = kernel_basis(A);
    CHECK(K.rows == c);
    CHECK(K.cols == c - rank(A));
    if (K.cols > 0) {
      CHECK(mul(A, K).is_zero());
      SmithForm S = snf(K);
      REQUIRE(S.rank == K.cols);
      for (int i = 0; i < S.rank; ++i) CHECK(S.d[i] == 1);  // saturated
    }
  }
  // kernel of an empty (0 x c) matrix is everything
  IntMatrix empty(0, 3);
  CHECK(kernel_basis(empty) == IntMatrix::identity(3));
}

TEST_CASE("cokernel: fixed structures") {
  CHECK(cokernel(IntMatrix::identity(2)).is_trivial());
  CHECK(cokernel(IntMatrix::from_rows({{2, 0}, {0, 3}})) ==
        AbelianGroup{0, {Int(6)}});
  CHECK(cokernel(IntMatrix::from_rows({{2, 0}, {0, 2}})) ==
        AbelianGroup{0, {Int(2), Int(2)}});
  CHECK(cokernel(IntMatrix::from_rows({{0}})) == AbelianGroup{1, {}});
  CHECK(cokernel(IntMatrix(3, 0)) == AbelianGroup{3, {}});
  CHECK(AbelianGroup{1, {Int(4)}}.str() == "Z x Z/4");
  CHECK(AbelianGroup{2, {}}.str() == "Z^2");
  CHECK(AbelianGroup{0, {}}.str() == "0");
  CHECK(AbelianGroup{0, {Int(2), Int(6)}}.str() == "Z/2 x Z/6");
}

TEST_CASE("maximal minors: fixed values and gcd route") {
  IntMatrix P = IntMatrix::from_rows({{-1, -1, 8, 0}, {-1, -1, 0, 4}, {-1, -2, 7, 3}});
  std::vector<Int> mm = maximal_minors(P);
  REQUIRE(mm.size() == 4);
  CHECK(mm[0] == 8);   // columns {0,1,2}: det(v01, v02, v11)
  CHECK(mm[1] == 4);   // columns {0,1,3}: det(v01, v02, v21)
  CHECK(mm[2] == 20);  // columns {0,2,3}: det(v01, v11, v21), the source chart
  CHECK(mm[3] == 12);  // columns {1,2,3}: det(v02, v11, v21), the sink chart
  CHECK(gcd_maximal_minors(P) == 4);

  IntMatrix Phat = IntMatrix::from_rows(
      {{1, -1, 0, 0}, {-1, 2, 0, 0}, {0, -1, 8, 0}, {0, -1, 0, 4}, {0, -2, 7, 3}});
  std::vector<Int> rm = maximal_minors(transpose(Phat));
  REQUIRE(rm.size() == 5);
  CHECK(rm[0] == 32);  // rows {0,1,2,3}
  CHECK(rm[1] == 24);  // rows {0,1,2,4}
  CHECK(rm[2] == 28);  // rows {0,1,3,4}
  CHECK(rm[3] == 12);  // rows {0,2,3,4}
  CHECK(rm[4] == 12);  // rows {1,2,3,4}
  CHECK(gcd_maximal_minors(transpose(Phat)) == 4);

  // rank-deficient: gcd of maximal minors is zero
  CHECK(gcd_maximal_minors(IntMatrix::from_rows({{1, 2}, {2, 4}})) == 0);

  // enumeration agrees with the Smith-form product on random input
  std::mt19937_64 rng(77);
  for (int t = 0; t < 120; ++t) {
    int r = (int)rnd(rng, 1, 4), c = (int)rnd(rng, 1, 5);
    IntMatrix A = random_matrix(rng, r, c, 6);
    Int g = 0;
    for (const Int& m : maximal_minors(A)) g = igcd(g, m);
    CHECK(g == gcd_maximal_minors(A));
  }
}

TEST_CASE("six-by-five chart presentation has trivial cokernel") {
  IntMatrix M = IntMatrix::from_rows({{0, 0, 0, 0, 1},
                                      {1, 0, 0, 0, 0},
                                      {0, 1, 0, 0, 0},
                                      {0, 3, 1, 0, -1},
                                      {0, 2, 0, 0, -1},
                                      {0, 0, 0, 1, 0}});
  CHECK(cokernel(transpose(M)).is_trivial());
  CHECK(gcd_maximal_minors(M) == 1);
}

TEST_CASE("exact solving") {
  std::mt19937_64 rng(5150);
  for (int t = 0; t < 200; ++t) {
    int m = (int)rnd(rng, 1, 4), k = (int)rnd(rng, 1, 4), c = (int)rnd(rng, 1, 3);
    IntMatrix A = random_matrix(rng, m, k, 6);
    IntMatrix X = random_matrix(rng, k, c, 6);
    IntMatrix B = mul(A, X);
    auto sol = solve_exact(A, B);
    REQUIRE(sol.has_value());
    CHECK(mul(A, *sol) == B);
  }
  CHECK(!solve_exact(IntMatrix::from_rows({{2}}), IntMatrix::from_rows({{1}})).has_value());
  CHECK(!solve_exact(IntMatrix::from_rows({{1}, {0}}), IntMatrix::from_rows({{0}, {1}})).has_value());
}

TEST_CASE("saturated span basis") {
  CHECK(saturated_span_basis(IntMatrix::from_rows({{2, 0}, {0, 2}})) == IntMatrix::identity(2));
  CHECK(saturated_span_basis(IntMatrix::from_rows({{2}, {4}})) ==
        IntMatrix::from_rows({{1}, {2}}));
  std::mt19937_64 rng(31337);
  for (int t = 0; t < 150; ++t) {
    int r = (int)rnd(rng, 1, 4), c = (int)rnd(rng, 1, 5);
    IntMatrix A = random_matrix(rng, r, c, 7);
    IntMatrix B = saturated_span_basis(A);
    CHECK(B.cols == rank(A));
    if (B.cols > 0) {
      // every column of A lies in the lattice spanned by B
      CHECK(solve_exact(B, A).has_value());
      SmithForm S = snf(B);
      for (int i = 0; i < S.rank; ++i) CHECK(S.d[i] == 1);
      CHECK(hnf(B) == B);  // basis is returned in canonical form
    }
  }
}

TEST_CASE("determinant: Bareiss against cofactor expansion") {
  std::mt19937_64 rng(86420);
  std::function<Int(const IntMatrix&)> cof = [&](const IntMatrix& A) -> Int {
    int n = A.rows;
    if (n == 0) return Int(1);
    if (n == 1) return A.at(0, 0);
    Int s = 0;
    std::vector<int> tail;
    for (int i = 1; i < n; ++i) tail.push_back(i);
    for (int j = 0; j < n; ++j) {
      std::vector<int> keep;
      for (int k = 0; k < n; ++k)
        if (k != j) keep.push_back(k);
      Int term = A.at(0, j) * cof(submatrix_cols(submatrix_rows(A, tail), keep));
      if (j % 2) s -= term; else s += term;
    }
    return s;
  };
  for (int t = 0; t < 150; ++t) {
    int n = (int)rnd(rng, 1, 5);
    IntMatrix A = random_matrix(rng, n, n, 8);
    CHECK(det(A) == cof(A));
  }
}

TEST_CASE("bulk randomized suite stays fast") {
  std::vector<std::string> failures;
  auto t0 = std::chrono::steady_clock::now();
  bool ok = selftest_exactlin(20260822ULL, 10000, failures);
  auto secs =
      std::chrono::duration_cast<std::chrono::duration<double>>(std::chrono::steady_clock::now() - t0)
          .count();
  for (const auto& f : failures) MESSAGE(f);
  CHECK(ok);
  CHECK(failures.empty());
  MESSAGE("bulk suite seconds: " << secs);
  CHECK(secs < 60.0);
}
