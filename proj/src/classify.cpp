#include "kstarpic/classify.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <condition_variable>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "kstarpic/io.hpp"
#include "kstarpic/kstarindex.hpp"
#include "kstarpic/toricpic.hpp"

namespace kstarpic {

const std::vector<std::string> kNontoricCaseLabels = {"eAeA", "eAeD", "eAeE", "eDeD",
                                                      "eDeE", "eEeE", "eDp", "eEp"};

namespace {

long long llgcd(long long a, long long b) { return std::gcd(a, b); }

// Flat, comma-free serialization (keys are embedded in CSV fields).
std::string matrix_flat(const IntMatrix& A) {
  std::ostringstream os;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      if (i || j) os << "_";
      os << A.at(i, j).get_str();
    }
  return os.str();
}

}  // namespace

std::string fwpp_canonical_key(const IntMatrix& P) {
  assert(P.rows == 2 && P.cols == 3);
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::string best;
  for (const auto& pm : perms) {
    IntMatrix Pp = submatrix_cols(P, {pm[0], pm[1], pm[2]});
    std::string s = matrix_flat(hnf_row(Pp));
    if (best.empty() || s < best) best = s;
  }
  return "t2x3|" + best;
}

std::vector<FwppRecord> classify_fwpp(long long iota) {
  std::vector<FwppRecord> out;
  std::set<std::string> seen;
  for (long long n = 1; n * n <= iota; ++n) {
    if (iota % (n * n) != 0) continue;
    long long q = iota / (n * n);  // = w0 * w1 * w2
    for (long long w2 = 1; w2 * w2 * w2 <= q; ++w2) {
      if (q % w2 != 0) continue;
      long long q2 = q / w2;
      for (long long w1 = w2; w1 * w1 <= q2; ++w1) {
        if (q2 % w1 != 0) continue;
        long long w0 = q2 / w1;
        if (w0 < w1) continue;
        if (llgcd(w0, w1) != 1 || llgcd(w0, w2) != 1 || llgcd(w1, w2) != 1) continue;
        for (long long x = 0; x < n * w2; ++x) {
          if (llgcd(x, n * w2) != 1) continue;
          if ((w0 + x * w1) % w2 != 0) continue;
          long long c = (w0 + x * w1) / w2;
          if (llgcd(c, n * w1) != 1) continue;
          FwppRecord rec;
          rec.iota = iota;
          rec.n = n;
          rec.w = {w0, w1, w2};
          rec.x = x;
          rec.P = IntMatrix(2, 3);
          rec.P.at(0, 0) = 1;
          rec.P.at(0, 1) = (long)x;
          rec.P.at(0, 2) = (long)-c;
          rec.P.at(1, 1) = (long)(n * w2);
          rec.P.at(1, 2) = (long)(-n * w1);
          rec.local_orders = {n * w0, n * w1, n * w2};
          // cheap invariants of the construction
          assert(std::llabs((long long)(x * (-n * w1) - (-c) * (n * w2))) == n * w0);
          rec.key = fwpp_canonical_key(rec.P);
          if (seen.insert(rec.key).second) out.push_back(std::move(rec));
        }
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const FwppRecord& a, const FwppRecord& b) { return a.key < b.key; });
  return out;
}

namespace {

// --- canonical keys for defining matrices ---

// One admissible presentation change: optionally flip the orientation
// (negate all d, reverse every block, swap the roles of v+ and v-), then
// relabel the blocks by a permutation.
DefiningMatrix apply_variant(const DefiningMatrix& dm, bool flip, const std::vector<int>& perm) {
  DefiningMatrix v;
  v.type = dm.type;
  if (flip) {
    switch (dm.type) {
      case DmType::ee: v.type = DmType::ee; break;
      case DmType::pe: v.type = DmType::ep; break;
      case DmType::ep: v.type = DmType::pe; break;
      case DmType::pp: v.type = DmType::pp; break;
    }
  }
  int r = dm.r();
  v.l.resize(r + 1);
  v.d.resize(r + 1);
  for (int i = 0; i <= r; ++i) {
    const auto& lsrc = dm.l[perm[i]];
    const auto& dsrc = dm.d[perm[i]];
    int ni = (int)lsrc.size();
    v.l[i].resize(ni);
    v.d[i].resize(ni);
    for (int j = 0; j < ni; ++j) {
      if (flip) {
        v.l[i][j] = lsrc[ni - 1 - j];
        v.d[i][j] = -dsrc[ni - 1 - j];
      } else {
        v.l[i][j] = lsrc[j];
        v.d[i][j] = dsrc[j];
      }
    }
  }
  return v;
}

std::string dm_serialize_normal(const DefiningMatrix& dm) {
  // The residual presentation freedom (for a fixed block order and
  // orientation) consists of the slide moves: shift every d entry of block i
  // by c_i times the matching l entry, where the c_i sum to zero.  A unique
  // representative is obtained by moving the leading d of each block except
  // block 0 into [0, l) and letting block 0 absorb the balancing shift.
  DefiningMatrix v = dm;
  Int c0 = 0;
  for (int i = 1; i <= v.r(); ++i) {
    Int ci = -fdiv(v.d[i][0], v.l[i][0]);
    for (size_t j = 0; j < v.d[i].size(); ++j) v.d[i][j] += ci * v.l[i][j];
    c0 -= ci;
  }
  for (size_t j = 0; j < v.d[0].size(); ++j) v.d[0][j] += c0 * v.l[0][j];
  std::ostringstream os;
  os << dm_type_name(v.type) << "|";
  for (int i = 0; i <= v.r(); ++i) os << (i ? "_" : "") << v.block_size(i);
  os << "|";
  for (int i = 0; i <= v.r(); ++i)
    for (size_t j = 0; j < v.l[i].size(); ++j) os << v.l[i][j] << "_";
  os << "|";
  for (int i = 0; i <= v.r(); ++i)
    for (size_t j = 0; j < v.d[i].size(); ++j) os << v.d[i][j] << "_";
  return os.str();
}

}  // namespace

std::string dm_canonical_key(const DefiningMatrix& dm) {
  int r = dm.r();
  std::vector<int> perm(r + 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    for (int flip = 0; flip < 2; ++flip) {
      DefiningMatrix v = apply_variant(dm, flip != 0, perm);
      std::string s = dm_serialize_normal(v);
      if (best.empty() || s < best) best = s;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return "m" + std::to_string(dm.m_extra()) + "|" + best;
}

namespace {

// Reduced singularity tuple at an elliptic point: the block orders with all
// trivial entries dropped.
std::vector<long long> reduced_tuple(std::vector<long long> t) {
  std::vector<long long> out;
  for (long long v : t)
    if (v > 1) out.push_back(v);
  std::sort(out.rbegin(), out.rend());
  return out;
}

// A = cyclic, D = dihedral (y,2,2), E = platonic (z,3,2) with z in 3..5.
char tuple_class(const std::vector<long long>& reduced) {
  if (reduced.size() <= 2) return 'A';
  if (reduced.size() == 3) {
    if (reduced[1] == 2 && reduced[2] == 2) return 'D';
    if (reduced[1] == 3 && reduced[2] == 2 && reduced[0] >= 3 && reduced[0] <= 5) return 'E';
  }
  return '?';
}

}  // namespace

std::string dm_case_label(const DefiningMatrix& dm) {
  int r = dm.r();
  if (dm.type == DmType::ee) {
    std::vector<long long> tp, tm;
    tp.push_back(dm.l[0].front().get_si());
    tm.push_back(dm.l[0].back().get_si());
    for (int i = 1; i <= r; ++i) {
      tp.push_back(dm.l[i].front().get_si());
      tm.push_back(dm.l[i].back().get_si());
    }
    char a = tuple_class(reduced_tuple(tp));
    char b = tuple_class(reduced_tuple(tm));
    if (a > b) std::swap(a, b);
    return std::string("e") + a + "e" + b;
  }
  if (dm.type == DmType::ep) {
    std::vector<long long> tp;
    for (int i = 0; i <= r; ++i) tp.push_back(dm.l[i].front().get_si());
    char a = tuple_class(reduced_tuple(tp));
    return std::string("e") + a + "p";
  }
  if (dm.type == DmType::pe) {
    std::vector<long long> tm;
    for (int i = 0; i <= r; ++i) tm.push_back(dm.l[i].back().get_si());
    char a = tuple_class(reduced_tuple(tm));
    return std::string("e") + a + "p";
  }
  return "?";
}

namespace {

// ----- non-toric engine: source/sink elliptic types -----
//
// Shape: n_0 = 2, n_i = 1 for i >= 1, r in {2, 3}.  A class with Picard
// index iota determines the factorization iota = lambda * w01 * w02 * M
// (torsion order, the two block-0 weights, the hyperbolic local order);
// conversely each ordered factorization is scanned against the finite list
// of singularity-type patterns, each of which pins down the block orders.

struct EePattern {
  // l01, l02 and the tail l_1..l_r; entries -1..-3 mark the free
  // parameters x/y/z (resolved by the solver below)
  std::vector<long long> shape;
};

struct EeCandidate {
  long long l01 = 0, l02 = 0;
  std::vector<long long> tail;
};

// Solve one pattern against a factorization (lambda, w01, w02, M): returns
// the fully determined block-order candidates.
void ee_candidates(long long lambda, long long w01, long long w02, long long M,
                   std::vector<EeCandidate>& out) {
  auto push = [&](long long l01, long long l02, std::vector<long long> tail) {
    for (long long v : tail)
      if (v < 2) return;
    if (l01 < 1 || l02 < 1) return;
    // hard filter: M * L = lambda * S
    long long L = 1, S = l01 * w01 + l02 * w02;
    for (long long v : tail) L *= v;
    if (M * L != lambda * S) return;
    out.push_back({l01, l02, std::move(tail)});
  };
  auto divq = [](long long a, long long b, long long& q) {
    if (b == 0 || a % b != 0) return false;
    q = a / b;
    return true;
  };
  long long t;

  // (1, 1 | x1, x2):  M x1 x2 = lambda (w01 + w02)
  if (divq(lambda * (w01 + w02), M, t) && t >= 4) {
    for (long long x1 = 2; x1 * x1 <= t; ++x1)
      if (t % x1 == 0 && t / x1 >= 2) push(1, 1, {x1, t / x1});
  }
  // (1, y | 2, 2):  4 M = lambda (w01 + y w02)
  if (divq(4 * M, lambda, t) && divq(t - w01, w02, t)) push(1, t, {2, 2});
  // (1, 2 | y, 2):  2 y M = lambda (w01 + 2 w02)
  if (divq(lambda * (w01 + 2 * w02), 2 * M, t)) push(1, 2, {t, 2});
  // (1, z | 3, 2):  6 M = lambda (w01 + z w02), z in 3..5
  if (divq(6 * M, lambda, t) && divq(t - w01, w02, t) && t >= 3 && t <= 5) push(1, t, {3, 2});
  // (1, 3 | z, 2):  2 z M = lambda (w01 + 3 w02)
  if (divq(lambda * (w01 + 3 * w02), 2 * M, t) && t >= 3 && t <= 5) push(1, 3, {t, 2});
  // (1, 2 | z, 3):  3 z M = lambda (w01 + 2 w02)
  if (divq(lambda * (w01 + 2 * w02), 3 * M, t) && t >= 3 && t <= 5) push(1, 2, {t, 3});
  // (2, 2 | y, 2):  y M = lambda (w01 + w02)
  if (divq(lambda * (w01 + w02), M, t)) push(2, 2, {t, 2});
  // (y1, y2 | 2, 2):  4 M = lambda (y1 w01 + y2 w02)
  if (divq(4 * M, lambda, t)) {
    for (long long y1 = 2; y1 * w01 + 2 * w02 <= t; ++y1) {
      long long rem = t - y1 * w01, y2;
      if (divq(rem, w02, y2) && y2 >= 2) push(y1, y2, {2, 2});
    }
  }
  // (1, 1 | y, 2, 2):  4 y M = lambda (w01 + w02)
  if (divq(lambda * (w01 + w02), 4 * M, t)) push(1, 1, {t, 2, 2});
  // (2, 3 | z, 2):  2 z M = lambda (2 w01 + 3 w02)
  if (divq(lambda * (2 * w01 + 3 * w02), 2 * M, t) && t >= 3 && t <= 5) push(2, 3, {t, 2});
  // (2, z | 3, 2):  6 M = lambda (2 w01 + z w02)
  if (divq(6 * M, lambda, t) && divq(t - 2 * w01, w02, t) && t >= 3 && t <= 5) push(2, t, {3, 2});
  // (2, 2 | z, 3):  3 z M = 2 lambda (w01 + w02)
  if (divq(2 * lambda * (w01 + w02), 3 * M, t) && t >= 3 && t <= 5) push(2, 2, {t, 3});
  // (z1, z2 | 3, 2):  6 M = lambda (z1 w01 + z2 w02)
  for (long long z1 = 3; z1 <= 5; ++z1)
    for (long long z2 = 3; z2 <= 5; ++z2)
      if (lambda * (z1 * w01 + z2 * w02) == 6 * M) push(z1, z2, {3, 2});
  // (3, 3 | z, 2):  2 z M = 3 lambda (w01 + w02)
  if (divq(3 * lambda * (w01 + w02), 2 * M, t) && t >= 3 && t <= 5) push(3, 3, {t, 2});
  // (1, 1 | z, 3, 2):  6 z M = lambda (w01 + w02)
  if (divq(lambda * (w01 + w02), 6 * M, t) && t >= 3 && t <= 5) push(1, 1, {t, 3, 2});
}

// Full certification of a candidate defining matrix for the classification:
// every structural claim (validity, minor gcd, the positive primitive
// relation of the columns, the per-cone local orders, and the product
// formula for the Picard index) is recomputed from first principles and
// compared with the values the search assumed.  Candidates built from a
// wrong factorization fail here and are found again under their true one.
bool certify_nontoric(const DefiningMatrix& dm, long long iota, const Int& lambda,
                      const std::vector<Int>& expected_weights,
                      const std::vector<Int>& expected_locals) {
  if (!is_valid(dm)) return false;
  IntMatrix P = assemble(dm);
  if (gcd_maximal_minors(P) != lambda) return false;
  IntMatrix K = kernel_basis(P);
  if (K.cols != 1) return false;
  std::vector<Int> w = get_col(K, 0);
  bool all_neg = true;
  for (const Int& v : w)
    if (v >= 0) all_neg = false;
  if (all_neg)
    for (Int& v : w) v = -v;
  if (w != expected_weights) return false;
  Int wg = 0;
  for (const Int& v : w) wg = igcd(wg, v);
  if (wg != 1) return false;

  Fan fan = ambient_fan(dm);
  if (fan.max_cones.size() != expected_locals.size()) return false;
  Int prod = 1;
  for (int c = 0; c < (int)fan.max_cones.size(); ++c) {
    LocalChart ch = local_class_group(fan, c);
    if (ch.group.rank != 0) return false;
    if (ch.group.torsion_order() != expected_locals[(size_t)c]) return false;
    prod *= expected_locals[(size_t)c];
  }
  if (prod % lambda != 0) return false;
  if (Int(prod / lambda) != Int((long)iota)) return false;
  return true;
}

void nontoric_ee(long long iota, std::set<std::string>& seen, std::vector<NontoricRecord>& out) {
  std::vector<long long> divs;
  for (long long d = 1; d * d <= iota; ++d)
    if (iota % d == 0) {
      divs.push_back(d);
      if (d != iota / d) divs.push_back(iota / d);
    }
  std::sort(divs.begin(), divs.end());

  std::vector<EeCandidate> cands;
  for (long long lambda : divs) {
    long long q1 = iota / lambda;
    for (long long w01 : divs) {
      if (q1 % w01 != 0) continue;
      long long q2 = q1 / w01;
      for (long long w02 : divs) {
        if (q2 % w02 != 0) continue;
        long long M = q2 / w02;
        cands.clear();
        ee_candidates(lambda, w01, w02, M, cands);
        for (const EeCandidate& cd : cands) {
          long long S = cd.l01 * w01 + cd.l02 * w02;
          long long L = 1;
          for (long long v : cd.tail) L *= v;
          bool ok = true;
          std::vector<long long> wtail;
          for (long long lv : cd.tail) {
            if (S % lv != 0) {
              ok = false;
              break;
            }
            wtail.push_back(S / lv);
          }
          if (!ok) continue;
          long long g = llgcd(w01, w02);
          for (long long wv : wtail) g = llgcd(g, wv);
          if (g != 1) continue;
          int rr = (int)cd.tail.size();
          // enumerate the interior d parameters
          std::vector<long long> dv(rr, 0);
          std::function<void(int)> rec = [&](int pos) {
            if (pos == rr) {
              long long D = 0;
              for (int i = 0; i < rr; ++i) D += dv[i] * (L / cd.tail[i]);
              long long num1 = lambda * w02 - cd.l01 * D;
              long long num2 = -lambda * w01 - cd.l02 * D;
              if (num1 % L != 0 || num2 % L != 0) return;
              long long d01 = num1 / L, d02 = num2 / L;
              if (llgcd(std::abs(d01), cd.l01) != 1 || llgcd(std::abs(d02), cd.l02) != 1) return;
              DefiningMatrix dm;
              dm.type = DmType::ee;
              dm.l.resize(rr + 1);
              dm.d.resize(rr + 1);
              dm.l[0] = {Int((long)cd.l01), Int((long)cd.l02)};
              dm.d[0] = {Int((long)d01), Int((long)d02)};
              for (int i = 0; i < rr; ++i) {
                dm.l[i + 1] = {Int((long)cd.tail[i])};
                dm.d[i + 1] = {Int((long)dv[i])};
              }
              std::vector<Int> wvec = {Int((long)w01), Int((long)w02)};
              for (long long wv : wtail) wvec.push_back(Int((long)wv));
              // fan cone order: sigma+, the single interior cone, sigma-
              std::vector<Int> locals = {Int((long)(lambda * w02)), Int((long)M),
                                         Int((long)(lambda * w01))};
              if (!certify_nontoric(dm, iota, Int((long)lambda), wvec, locals)) {
                log_msg(2, "discarded uncertified candidate at iota=" + std::to_string(iota));
                return;
              }
              std::string key = dm_canonical_key(dm);
              if (!seen.insert(key).second) return;
              NontoricRecord rec2;
              rec2.iota = iota;
              rec2.case_label = dm_case_label(dm);
              rec2.dm = dm;
              rec2.lambda = Int((long)lambda);
              rec2.weights = wvec;
              rec2.local_orders = locals;
              rec2.key = key;
              out.push_back(std::move(rec2));
              return;
            }
            for (long long d = 0; d < cd.tail[pos]; ++d) {
              if (llgcd(d, cd.tail[pos]) != 1) continue;
              dv[pos] = d;
              rec(pos + 1);
            }
          };
          rec(0);
        }
      }
    }
  }
}

// ----- non-toric engine: parabolic sink -----
//
// Shape: all n_i = 1, r = 2, sink curve (type ep); the block orders form
// one of the multisets {y,2,2} or {z,3,2}, assigned descending.
void nontoric_ep(long long iota, std::set<std::string>& seen, std::vector<NontoricRecord>& out) {
  std::vector<std::array<long long, 3>> lsets;
  for (long long y = 2; 4 * y <= iota; ++y)
    if (iota % (4 * y) == 0) lsets.push_back({y, 2, 2});
  for (long long z = 3; z <= 5; ++z)
    if (iota % (6 * z) == 0) lsets.push_back({z, 3, 2});
  for (auto ls : lsets) {
    std::sort(ls.rbegin(), ls.rend());
    long long L = ls[0] * ls[1] * ls[2];
    long long wminus = iota / L;
    long long lam = std::lcm(std::lcm(ls[0], ls[1]), ls[2]);
    for (long long Sp = lam; Sp <= L; Sp += lam) {
      if (L % Sp != 0) continue;
      long long lambda = L / Sp;
      std::array<long long, 3> w{Sp / ls[0], Sp / ls[1], Sp / ls[2]};
      for (long long d1 = 0; d1 < ls[1]; ++d1) {
        if (llgcd(d1, ls[1]) != 1) continue;
        for (long long d2 = 0; d2 < ls[2]; ++d2) {
          if (llgcd(d2, ls[2]) != 1) continue;
          long long num = wminus - w[1] * d1 - w[2] * d2;
          if (num % w[0] != 0) continue;
          long long d0 = num / w[0];
          if (llgcd(std::abs(d0), ls[0]) != 1) continue;
          long long g = llgcd(llgcd(llgcd(w[0], w[1]), w[2]), wminus);
          if (g != 1) continue;
          DefiningMatrix dm;
          dm.type = DmType::ep;
          dm.l = {{Int((long)ls[0])}, {Int((long)ls[1])}, {Int((long)ls[2])}};
          dm.d = {{Int((long)d0)}, {Int((long)d1)}, {Int((long)d2)}};
          std::vector<Int> wvec = {Int((long)w[0]), Int((long)w[1]), Int((long)w[2]),
                                   Int((long)wminus)};
          // fan cone order: sigma+, then the sink boundary cones tau_i
          std::vector<Int> locals = {Int((long)(lambda * wminus)), Int((long)ls[0]),
                                     Int((long)ls[1]), Int((long)ls[2])};
          if (!certify_nontoric(dm, iota, Int((long)lambda), wvec, locals)) {
            log_msg(2, "discarded uncertified sink candidate at iota=" + std::to_string(iota));
            continue;
          }
          if (lambda > 1)
            log_msg(1, "nontrivial torsion " + std::to_string(lambda) +
                           " in sink-curve class at iota=" + std::to_string(iota));
          std::string key = dm_canonical_key(dm);
          if (!seen.insert(key).second) continue;
          NontoricRecord rec;
          rec.iota = iota;
          rec.case_label = dm_case_label(dm);
          rec.dm = dm;
          rec.lambda = Int((long)lambda);
          rec.weights = wvec;
          rec.local_orders = locals;
          rec.key = key;
          out.push_back(std::move(rec));
        }
      }
    }
  }
}

}  // namespace

std::vector<NontoricRecord> classify_nontoric(long long iota) {
  std::vector<NontoricRecord> out;
  std::set<std::string> seen;
  nontoric_ee(iota, seen, out);
  nontoric_ep(iota, seen, out);
  std::sort(out.begin(), out.end(), [](const NontoricRecord& a, const NontoricRecord& b) {
    if (a.case_label != b.case_label) return a.case_label < b.case_label;
    return a.key < b.key;
  });
  return out;
}

long long CensusRow::total() const {
  long long t = toric;
  for (const auto& [k, v] : nontoric) t += v;
  return t;
}

void run_census(const CensusOptions& opt) {
  struct Slot {
    bool ready = false;
    std::string error;
    CensusRow row;
    std::vector<FwppRecord> toric_recs;
    std::vector<NontoricRecord> nontoric_recs;
  };
  const long long lo = opt.resume_from + 1;
  if (lo > opt.max_iota) return;
  const long long count = opt.max_iota - lo + 1;
  std::vector<Slot> slots((size_t)count);
  std::mutex mtx;
  std::condition_variable cv;
  std::atomic<long long> next{lo};
  std::set<std::string> case_filter(opt.cases.begin(), opt.cases.end());

  auto worker = [&]() {
    for (;;) {
      long long iota = next.fetch_add(1);
      if (iota > opt.max_iota) return;
      Slot s;
      s.row.iota = iota;
      try {
        for (const auto& lbl : kNontoricCaseLabels) s.row.nontoric[lbl] = 0;
        if (opt.toric) {
          s.toric_recs = classify_fwpp(iota);
          s.row.toric = (long long)s.toric_recs.size();
        }
        if (opt.nontoric) {
          auto recs = classify_nontoric(iota);
          for (auto& rec : recs) {
            if (!case_filter.empty() && !case_filter.count(rec.case_label)) continue;
            s.row.nontoric[rec.case_label] += 1;
            s.nontoric_recs.push_back(std::move(rec));
          }
        }
      } catch (const std::exception& e) {
        s.error = e.what();
      }
      {
        std::lock_guard<std::mutex> lk(mtx);
        slots[(size_t)(iota - lo)] = std::move(s);
        slots[(size_t)(iota - lo)].ready = true;
      }
      cv.notify_all();
    }
  };

  int nthreads = std::max(1, opt.threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);

  std::string first_error;
  for (long long iota = lo; iota <= opt.max_iota; ++iota) {
    std::unique_lock<std::mutex> lk(mtx);
    cv.wait(lk, [&] { return slots[(size_t)(iota - lo)].ready; });
    Slot s = std::move(slots[(size_t)(iota - lo)]);
    lk.unlock();
    if (!s.error.empty()) {
      first_error = "census failed at index " + std::to_string(iota) + ": " + s.error;
      next.store(opt.max_iota + 1);  // stop handing out further work
      break;
    }
    if (opt.on_row) opt.on_row(s.row);
    if (opt.on_records) opt.on_records(iota, s.toric_recs, s.nontoric_recs);
    log_msg(2, "census row " + std::to_string(iota) + " done");
  }
  for (auto& th : pool) th.join();
  if (!first_error.empty()) throw std::runtime_error(first_error);
}

}  // namespace kstarpic
