#include "kstarpic/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <sstream>
#include <utility>

#include "kstarpic/defmat.hpp"
#include "kstarpic/exactlin.hpp"
#include "kstarpic/kstarindex.hpp"
#include "kstarpic/toricpic.hpp"

namespace kstarpic {

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
      Int k((long)rnd(rng, -2, 2));
      for (int i = 0; i < n; ++i) V.at(i, j2) += k * V.at(i, j1);
    }
  }
  return V;
}

void report(std::vector<std::string>& failures, const std::string& what, const IntMatrix& A) {
  if (failures.size() >= 8) return;
  std::ostringstream os;
  os << what << " on input " << A.str();
  failures.push_back(os.str());
}

}  // namespace

bool selftest_exactlin(std::uint64_t seed, int cases, std::vector<std::string>& failures) {
  std::mt19937_64 rng(seed);
  size_t before = failures.size();
  for (int t = 0; t < cases; ++t) {
    int r = (int)rnd(rng, 1, 5), c = (int)rnd(rng, 1, 5);
    IntMatrix A = random_matrix(rng, r, c, 30);

    SmithForm S = snf(A);
    if (abs(det(S.U)) != 1 || abs(det(S.V)) != 1) {
      report(failures, "smith transform not unimodular", A);
      continue;
    }
    IntMatrix D = mul(mul(S.U, A), S.V);
    bool diag_ok = true;
    for (int i = 0; i < r && diag_ok; ++i)
      for (int j = 0; j < c && diag_ok; ++j) {
        Int want = (i == j && i < (int)S.d.size()) ? S.d[i] : Int(0);
        if (D.at(i, j) != want) diag_ok = false;
      }
    if (!diag_ok) {
      report(failures, "smith diagonalization mismatch", A);
      continue;
    }
    for (int i = 0; i + 1 < (int)S.d.size(); ++i)
      if (S.d[i + 1] != 0 && (S.d[i] == 0 || S.d[i + 1] % S.d[i] != 0)) {
        report(failures, "smith divisibility chain broken", A);
        diag_ok = false;
        break;
      }
    if (!diag_ok) continue;

    IntMatrix H = hnf(A);
    IntMatrix V = random_unimodular(rng, c, 8);
    if (hnf(mul(A, V)) != H) {
      report(failures, "hermite form not invariant under column transform", A);
      continue;
    }
    if (hnf(H) != H) {
      report(failures, "hermite form not idempotent", A);
      continue;
    }

    IntMatrix K = kernel_basis(A);
    if (K.cols != c - S.rank || (K.cols > 0 && !mul(A, K).is_zero())) {
      report(failures, "kernel basis wrong", A);
      continue;
    }
    if (K.cols > 0) {
      SmithForm SK = snf(K);
      bool sat = SK.rank == K.cols;
      for (int i = 0; i < SK.rank && sat; ++i)
        if (SK.d[i] != 1) sat = false;
      if (!sat) {
        report(failures, "kernel basis not saturated", A);
        continue;
      }
    }

    // exact solving round-trip on a system with a known solution
    IntMatrix X = random_matrix(rng, c, 2, 10);
    IntMatrix B = mul(A, X);
    auto sol = solve_exact(A, B);
    if (!sol || mul(A, *sol) != B) {
      report(failures, "exact solve failed on solvable system", A);
      continue;
    }

    // minor gcd via the Smith route agrees with direct enumeration on
    // small shapes (kept small so the whole suite stays fast)
    if ((size_t)r * c <= 16) {
      Int g = 0;
      for (const Int& m : maximal_minors(A)) g = igcd(g, m);
      if (g != gcd_maximal_minors(A)) {
        report(failures, "maximal-minor gcd mismatch", A);
        continue;
      }
    }
  }
  return failures.size() == before;
}

bool selftest_defining_matrices(std::uint64_t seed, int cases,
                                std::vector<std::string>& failures) {
  std::mt19937_64 rng(seed);
  size_t before = failures.size();
  for (int t = 0; t < cases; ++t) {
    DefiningMatrix dm = random_defining_matrix(rng);
    IntMatrix P = assemble(dm);
    if (P.rows != dm.r() + 1 || P.cols != dm.n_total() + dm.m_extra()) {
      report(failures, "assembled matrix has wrong shape", P);
      continue;
    }
    if (!is_valid(dm)) {
      report(failures, "random defining matrix fails validation", P);
      continue;
    }

    Fan fan = ambient_fan(dm);
    auto fps = fixed_points(dm);
    if (fps.size() != fan.max_cones.size()) {
      report(failures, "fixed points misaligned with fan cones", P);
      continue;
    }
    if (fan.rays != P) {
      report(failures, "fan rays differ from assembled columns", P);
      continue;
    }

    PicardData a = picard_direct(fan);
    PicardData b = picard_via_hat(fan);
    if (a.pic_index != b.pic_index || !(a.khat == b.khat) ||
        !(a.class_group == b.class_group) || !(a.pic_group == b.pic_group)) {
      report(failures, "direct and chart-comparison routes disagree", P);
      continue;
    }
    if (!a.alpha_surjective || !b.alpha_surjective || !a.pic_torsion_free) {
      report(failures, "chart-sum map unexpectedly not onto", P);
      continue;
    }
    if (a.pic_index * a.khat.torsion_order() != a.local_order_product) {
      report(failures, "index times obstruction order differs from local product", P);
      continue;
    }

    Int formula = picard_index_product_formula(dm);
    if (formula != a.pic_index) {
      report(failures, "product formula disagrees with the direct route", P);
      continue;
    }

    Int lam = class_group_torsion_order(dm);
    if (a.khat.torsion_order() != lam) {
      report(failures, "obstruction order differs from class group torsion", P);
      continue;
    }

    HatSystem hs = hat_system_explicit(dm);
    AbelianGroup kh = cokernel(transpose(hs.Phat));
    if (!(kh == a.khat)) {
      report(failures, "explicit comparison system has wrong cokernel", P);
      continue;
    }

    MinorSets ms = minor_sets(dm, 3000);
    if (ms.gcd_value != lam) {
      report(failures, "minor gcd differs from torsion order", P);
      continue;
    }
    auto gcd_of = [](const std::vector<Int>& v) {
      Int g = 0;
      for (const Int& x : v) g = igcd(g, x);
      return g;
    };
    if (gcd_of(ms.M_P) != lam || gcd_of(ms.M_prime_P) != lam) {
      report(failures, "primary minor collections have wrong gcd", P);
      continue;
    }
    if (!ms.M_Phat.empty() && gcd_of(ms.M_Phat) != lam) {
      report(failures, "comparison minors have wrong gcd", P);
      continue;
    }
    if (!ms.M_red_Phat.empty() && gcd_of(ms.M_red_Phat) != lam) {
      report(failures, "reduced minors have wrong gcd", P);
      continue;
    }
  }
  return failures.size() == before;
}

namespace {

// Random complete two-dimensional fan: distinct primitive rays sorted by
// angle (exact integer comparisons), consecutive pairs as maximal cones.
bool random_fan2d(std::mt19937_64& rng, Fan& fan) {
  int want = (int)rnd(rng, 3, 8);
  std::vector<std::pair<long long, long long>> rays;
  for (int tries = 0; tries < 200 && (int)rays.size() < want; ++tries) {
    long long x = rnd(rng, -9, 9), y = rnd(rng, -9, 9);
    if (x == 0 && y == 0) continue;
    long long g = std::gcd(x < 0 ? -x : x, y < 0 ? -y : y);
    x /= g;
    y /= g;
    bool dup = false;
    for (auto& r : rays)
      if (r.first == x && r.second == y) dup = true;
    if (!dup) rays.emplace_back(x, y);
  }
  if ((int)rays.size() < 3) return false;
  auto half = [](const std::pair<long long, long long>& v) {
    return (v.second > 0 || (v.second == 0 && v.first > 0)) ? 0 : 1;
  };
  std::sort(rays.begin(), rays.end(),
            [&](const std::pair<long long, long long>& u,
                const std::pair<long long, long long>& v) {
              if (half(u) != half(v)) return half(u) < half(v);
              return u.first * v.second - u.second * v.first > 0;
            });
  int k = (int)rays.size();
  for (int i = 0; i < k; ++i) {
    auto& u = rays[i];
    auto& v = rays[(i + 1) % k];
    if (u.first * v.second - u.second * v.first <= 0) return false;  // gap >= pi
  }
  fan = Fan();
  fan.dim = 2;
  fan.rays = IntMatrix(2, k);
  for (int i = 0; i < k; ++i) {
    fan.rays.at(0, i) = (long)rays[i].first;
    fan.rays.at(1, i) = (long)rays[i].second;
  }
  for (int i = 0; i < k; ++i) {
    std::vector<int> cone = {i, (i + 1) % k};
    std::sort(cone.begin(), cone.end());
    fan.max_cones.push_back(std::move(cone));
  }
  return true;
}

}  // namespace

bool selftest_fans2d(std::uint64_t seed, int cases, std::vector<std::string>& failures) {
  std::mt19937_64 rng(seed);
  size_t before = failures.size();
  int done = 0;
  while (done < cases) {
    Fan fan;
    if (!random_fan2d(rng, fan)) continue;
    ++done;
    int k = fan.rays.cols;

    AbelianGroup cl = class_group(fan);
    if (cl.rank != k - 2) {
      report(failures, "class group rank wrong for a complete surface fan", fan.rays);
      continue;
    }

    PicardData a = picard_direct(fan);
    PicardData b = picard_via_hat(fan);
    if (a.pic_index != b.pic_index || !(a.khat == b.khat) ||
        !(a.pic_group == b.pic_group)) {
      report(failures, "two-dimensional routes disagree", fan.rays);
      continue;
    }
    if (!a.alpha_surjective || !a.pic_torsion_free) {
      report(failures, "full-dimensional charts must cover the lattice", fan.rays);
      continue;
    }
    if (a.pic_rank != k - 2 || a.pic_group.rank != k - 2) {
      report(failures, "picard rank wrong for a complete surface fan", fan.rays);
      continue;
    }
    if (a.pic_index * a.khat.torsion_order() != a.local_order_product) {
      report(failures, "index times obstruction order differs from local product",
             fan.rays);
      continue;
    }
    Int prod = 1;
    for (const LocalChart& ch : a.local) {
      if (ch.group.rank != 0 || !ch.simplicial) {
        report(failures, "two-dimensional cone with infinite local group", fan.rays);
        prod = 0;
        break;
      }
      prod *= ch.group.torsion_order();
    }
    if (prod == 0) continue;
    if (prod != a.local_order_product) {
      report(failures, "local order product mismatch", fan.rays);
      continue;
    }
  }
  return failures.size() == before;
}

}  // namespace kstarpic
