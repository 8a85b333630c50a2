#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kstarpic/classify.hpp"
#include "kstarpic/defmat.hpp"
#include "kstarpic/exactlin.hpp"
#include "kstarpic/kstarindex.hpp"
#include "kstarpic/toricpic.hpp"

using namespace kstarpic;

namespace {

DefiningMatrix sample_ee() {
  DefiningMatrix dm;
  dm.type = DmType::ee;
  dm.l = {{1, 1}, {8}, {4}};
  dm.d = {{-1, -2}, {7}, {3}};
  return dm;
}

Fan fan_from_plane_matrix(const IntMatrix& P) {
  Fan f;
  f.dim = 2;
  f.rays = P;
  f.max_cones = {{0, 1}, {1, 2}, {0, 2}};
  return f;
}

std::map<std::string, long long> nontoric_counts(long long max_iota) {
  std::map<std::string, long long> cc;
  for (long long i = 1; i <= max_iota; ++i)
    for (const auto& r : classify_nontoric(i)) cc[r.case_label] += 1;
  return cc;
}

// Orientation flip of the block data: negate all d, reverse every block,
// and swap the roles of the two ends.
DefiningMatrix flipped(const DefiningMatrix& dm) {
  DefiningMatrix v = dm;
  if (dm.type == DmType::pe) v.type = DmType::ep;
  if (dm.type == DmType::ep) v.type = DmType::pe;
  for (size_t i = 0; i < v.l.size(); ++i) {
    std::reverse(v.l[i].begin(), v.l[i].end());
    std::reverse(v.d[i].begin(), v.d[i].end());
    for (auto& x : v.d[i]) x = -x;
  }
  return v;
}

}  // namespace

TEST_CASE("toric stream: counts through index ten") {
  std::vector<long long> per;
  long long total = 0;
  for (long long i = 1; i <= 10; ++i) {
    auto recs = classify_fwpp(i);
    per.push_back((long long)recs.size());
    total += (long long)recs.size();
  }
  CHECK(per == std::vector<long long>{1, 1, 1, 1, 1, 2, 1, 2, 2, 2});
  CHECK(total == 14);
}

TEST_CASE("toric stream: records carry consistent normal-form data") {
  for (long long i : {1LL, 6LL, 10LL, 30LL, 60LL}) {
    auto recs = classify_fwpp(i);
    std::set<std::string> keys;
    for (const auto& r : recs) {
      CHECK(r.iota == i);
      CHECK(r.n * r.n * r.w[0] * r.w[1] * r.w[2] == i);
      CHECK(r.w[0] >= r.w[1]);
      CHECK(r.w[1] >= r.w[2]);
      CHECK(std::gcd(r.w[0], r.w[1]) == 1);
      CHECK(std::gcd(r.w[0], r.w[2]) == 1);
      CHECK(std::gcd(r.w[1], r.w[2]) == 1);
      for (int k = 0; k < 3; ++k) CHECK(r.local_orders[(size_t)k] == r.n * r.w[(size_t)k]);
      CHECK(r.key == fwpp_canonical_key(r.P));
      CHECK(keys.insert(r.key).second);  // unique within the index
    }
    CHECK(std::is_sorted(recs.begin(), recs.end(),
                         [](const FwppRecord& a, const FwppRecord& b) { return a.key < b.key; }));
  }
}

TEST_CASE("toric stream: every class recomputes to its claimed index") {
  long long checked = 0;
  for (long long i = 1; i <= 200; ++i) {
    for (const auto& r : classify_fwpp(i)) {
      Fan fan = fan_from_plane_matrix(r.P);
      PicardData a = picard_direct(fan);
      CHECK(a.pic_index == Int((long)i));
      CHECK(picard_via_hat(fan).pic_index == Int((long)i));
      AbelianGroup expected_cl{1, {}};
      if (r.n > 1) expected_cl.torsion = {Int((long)r.n)};
      CHECK(a.class_group == expected_cl);
      std::vector<Int> orders;
      for (const auto& ch : a.local) orders.push_back(ch.order());
      std::sort(orders.begin(), orders.end());
      std::vector<Int> expected_orders;
      for (int k = 2; k >= 0; --k) expected_orders.push_back(Int((long)(r.n * r.w[(size_t)k])));
      CHECK(orders == expected_orders);
      ++checked;
    }
  }
  CHECK(checked == 578);
}

TEST_CASE("toric key: invariance under lattice and relabeling moves") {
  std::mt19937_64 rng(31337ULL);
  auto recs = classify_fwpp(12);
  REQUIRE(!recs.empty());
  for (const auto& r : recs) {
    for (int t = 0; t < 20; ++t) {
      // Random unimodular 2x2 and a random column shuffle.
      long a = 1, b = 0, c = 0, d = 1;
      for (int s = 0; s < 6; ++s) {
        long k = (long)(rng() % 5) - 2;
        if (rng() & 1) { a += k * c; b += k * d; }
        else { c += k * a; d += k * b; }
      }
      if (rng() & 1) { a = -a; b = -b; }
      IntMatrix Q(2, 3);
      std::vector<int> perm{0, 1, 2};
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int j = 0; j < 3; ++j) {
        Q.at(0, perm[(size_t)j]) = Int(a) * r.P.at(0, j) + Int(b) * r.P.at(1, j);
        Q.at(1, perm[(size_t)j]) = Int(c) * r.P.at(0, j) + Int(d) * r.P.at(1, j);
      }
      CHECK(fwpp_canonical_key(Q) == r.key);
    }
  }
}

TEST_CASE("non-toric stream: counts through index ten, by case") {
  auto cc = nontoric_counts(10);
  CHECK(cc["eAeA"] == 5);
  CHECK(cc["eAeD"] == 4);
  CHECK(cc["eAeE"] == 10);
  CHECK(cc["eDeD"] == 1);
  CHECK(cc["eDeE"] == 0);
  CHECK(cc["eEeE"] == 0);
  CHECK(cc["eDp"] == 1);
  CHECK(cc["eEp"] == 0);
}

TEST_CASE("non-toric stream: counts through index one hundred, by case") {
  auto cc = nontoric_counts(100);
  CHECK(cc["eAeA"] == 260);
  CHECK(cc["eAeD"] == 129);
  CHECK(cc["eAeE"] == 39);
  CHECK(cc["eDeD"] == 117);
  CHECK(cc["eDeE"] == 4);
  CHECK(cc["eEeE"] == 15);
  CHECK(cc["eDp"] == 28);
  CHECK(cc["eEp"] == 5);
}

TEST_CASE("non-toric stream: the unique class of index one") {
  auto recs = classify_nontoric(1);
  REQUIRE(recs.size() == 1);
  const auto& r = recs[0];
  CHECK(r.case_label == "eAeE");
  CHECK(r.dm.type == DmType::ee);
  CHECK(r.dm.l == std::vector<std::vector<Int>>{{1, 5}, {3}, {2}});
  CHECK(r.dm.d == std::vector<std::vector<Int>>{{-1, -6}, {2}, {1}});
  CHECK(r.lambda == 1);
  CHECK(r.weights == std::vector<Int>{1, 1, 2, 3});
  CHECK(r.local_orders == std::vector<Int>{1, 1, 1});
}

TEST_CASE("non-toric stream: small fixed classes") {
  // The single two-end dihedral-dihedral class up to index ten.
  auto recs4 = classify_nontoric(4);
  bool found_dd = false;
  for (const auto& r : recs4)
    if (r.case_label == "eDeD") {
      found_dd = true;
      CHECK(r.dm.type == DmType::ee);
      CHECK(r.dm.l == std::vector<std::vector<Int>>{{1, 1}, {2}, {2}, {2}});
      CHECK(r.dm.d == std::vector<std::vector<Int>>{{-1, -2}, {1}, {1}, {1}});
      CHECK(r.lambda == 4);
      CHECK(r.local_orders == std::vector<Int>{4, 1, 4});
    }
  CHECK(found_dd);
  // The single parabolic-sink class up to index ten.
  auto recs8 = classify_nontoric(8);
  bool found_dp = false;
  for (const auto& r : recs8)
    if (r.case_label == "eDp") {
      found_dp = true;
      CHECK(r.dm.type == DmType::ep);
      CHECK(r.dm.l == std::vector<std::vector<Int>>{{2}, {2}, {2}});
      CHECK(r.dm.d == std::vector<std::vector<Int>>{{-1}, {1}, {1}});
      CHECK(r.lambda == 4);
      CHECK(r.local_orders == std::vector<Int>{4, 2, 2, 2});
    }
  CHECK(found_dp);
}

TEST_CASE("non-toric stream: records satisfy their own certificates") {
  for (long long i : {1LL, 4LL, 8LL, 12LL, 30LL, 60LL}) {
    auto recs = classify_nontoric(i);
    std::set<std::string> keys;
    for (const auto& r : recs) {
      CHECK(is_valid(r.dm));
      CHECK(gcd_maximal_minors(assemble(r.dm)) == r.lambda);
      CHECK(picard_index_product_formula(r.dm) == Int((long)i));
      CHECK(dm_canonical_key(r.dm) == r.key);
      CHECK(dm_case_label(r.dm) == r.case_label);
      CHECK(keys.insert(r.key).second);
      Fan fan = ambient_fan(r.dm);
      REQUIRE(fan.max_cones.size() == r.local_orders.size());
      for (size_t c = 0; c < fan.max_cones.size(); ++c)
        CHECK(local_class_group(fan, (int)c).order() == r.local_orders[c]);
    }
    CHECK(std::is_sorted(recs.begin(), recs.end(),
                         [](const NontoricRecord& a, const NontoricRecord& b) {
                           return a.case_label != b.case_label ? a.case_label < b.case_label
                                                              : a.key < b.key;
                         }));
  }
}

TEST_CASE("the worked example appears in the census at index sixty") {
  DefiningMatrix dm = sample_ee();
  std::string key = dm_canonical_key(dm);
  auto recs = classify_nontoric(60);
  bool found = false;
  for (const auto& r : recs)
    if (r.key == key) {
      found = true;
      CHECK(r.case_label == "eAeA");
      CHECK(r.lambda == 4);
    }
  CHECK(found);
}

TEST_CASE("defining-matrix key: invariance under admissible presentations") {
  std::vector<DefiningMatrix> fixtures;
  fixtures.push_back(sample_ee());
  for (const auto& r : classify_nontoric(8)) fixtures.push_back(r.dm);
  std::mt19937_64 rng(987ULL);
  for (const auto& dm : fixtures) {
    std::string key = dm_canonical_key(dm);
    // Orientation flip.
    CHECK(dm_canonical_key(flipped(dm)) == key);
    // Block relabeling.
    {
      DefiningMatrix v = dm;
      std::vector<int> perm((size_t)dm.r() + 1);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (size_t i = 0; i < perm.size(); ++i) {
        v.l[i] = dm.l[(size_t)perm[i]];
        v.d[i] = dm.d[(size_t)perm[i]];
      }
      CHECK(dm_canonical_key(v) == key);
    }
    // Slide moves: shift block data by c_i times l, with the c_i summing
    // to zero across the blocks.
    for (int t = 0; t < 10; ++t) {
      DefiningMatrix v = dm;
      long csum = 0;
      for (int i = 1; i <= dm.r(); ++i) {
        long ci = (long)(rng() % 7) - 3;
        csum += ci;
        for (size_t j = 0; j < v.d[(size_t)i].size(); ++j)
          v.d[(size_t)i][j] += Int(ci) * v.l[(size_t)i][j];
      }
      for (size_t j = 0; j < v.d[0].size(); ++j) v.d[0][j] += Int(-csum) * v.l[0][j];
      CHECK(dm_canonical_key(v) == key);
    }
  }
}

TEST_CASE("defining-matrix key: distinct data separates") {
  DefiningMatrix a = sample_ee();
  DefiningMatrix b = sample_ee();
  b.d = {{-1, -2}, {5}, {3}};  // different interior slope
  REQUIRE(is_valid(b));
  CHECK(dm_canonical_key(a) != dm_canonical_key(b));
}

TEST_CASE("census: merge order, determinism, and filters") {
  auto run = [](int threads, long long lo, long long hi,
                const std::vector<std::string>& cases) {
    std::ostringstream os;
    CensusOptions opt;
    opt.max_iota = hi;
    opt.resume_from = lo;
    opt.threads = threads;
    opt.cases = cases;
    opt.on_row = [&](const CensusRow& row) {
      os << row.iota << ":" << row.toric;
      for (const auto& [k, v] : row.nontoric) os << "," << k << "=" << v;
      os << ";";
    };
    opt.on_records = [&](long long iota, const std::vector<FwppRecord>& fw,
                         const std::vector<NontoricRecord>& nt) {
      os << iota << "[";
      for (const auto& r : fw) os << r.key << "|";
      for (const auto& r : nt) os << r.key << "|";
      os << "]";
    };
    run_census(opt);
    return os.str();
  };
  std::string one = run(1, 0, 40, {});
  CHECK(one == run(4, 0, 40, {}));   // thread count cannot change output
  CHECK(one == run(1, 0, 40, {}));   // idempotent
  // A resumed run continues exactly where the prefix stopped.
  std::string head = run(1, 0, 15, {});
  std::string tail = run(1, 15, 40, {});
  CHECK(head + tail == one);
  // Case filters keep the column layout but count and emit only the
  // requested labels.
  {
    CensusOptions opt;
    opt.max_iota = 40;
    opt.cases = {"eDeD"};
    long long kept = 0, dropped = 0, records = 0;
    opt.on_row = [&](const CensusRow& row) {
      for (const auto& [k, v] : row.nontoric) (k == "eDeD" ? kept : dropped) += v;
    };
    opt.on_records = [&](long long, const std::vector<FwppRecord>&,
                         const std::vector<NontoricRecord>& nt) {
      for (const auto& r : nt) {
        CHECK(r.case_label == "eDeD");
        ++records;
      }
    };
    run_census(opt);
    CHECK(dropped == 0);
    CHECK(kept == nontoric_counts(40)["eDeD"]);
    CHECK(records == kept);
  }
}

TEST_CASE("census row totals") {
  CensusOptions opt;
  opt.max_iota = 10;
  long long grand = 0;
  opt.on_row = [&](const CensusRow& row) {
    long long s = row.toric;
    for (const auto& [k, v] : row.nontoric) s += v;
    CHECK(row.total() == s);
    grand += s;
  };
  run_census(opt);
  CHECK(grand == 14 + 21);
}
