#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

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

IntMatrix mat(int rows, int cols, std::vector<long> entries) {
  IntMatrix A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) A.at(i, j) = entries[(size_t)(i * cols + j)];
  return A;
}

std::vector<Int> ints(std::vector<long> v) {
  std::vector<Int> out;
  for (long x : v) out.push_back(x);
  return out;
}

}  // namespace

TEST_CASE("mu and nu minor functions on the worked example") {
  DefiningMatrix dm = sample_ee();
  // mu(j0, j1, j2) = sum_i d_{i j_i} prod_{k != i} l_{k j_k}
  CHECK(mu(dm, {1, 1, 1}) == 20);
  CHECK(mu(dm, {2, 1, 1}) == -12);
  CHECK(mu_hat(dm) == -12);
  // nu(0; 1, 2) = l_01 d_02 - l_02 d_01
  CHECK(nu(dm, 0, 1, 2) == -1);
  CHECK(nu_hat(dm, 0, 1) == -1);
  // Blocks of size one have no proper nu values; nu(i; j, j) vanishes.
  CHECK(nu(dm, 1, 1, 1) == 0);
}

TEST_CASE("mu agrees with column determinants") {
  std::mt19937_64 rng(20260822ULL);
  for (int t = 0; t < 40; ++t) {
    DefiningMatrix dm = random_defining_matrix(rng);
    IntMatrix P = assemble(dm);
    int r = dm.r();
    // Pick the top ray of each block; mu of that tuple must equal the
    // determinant of those columns up to sign.
    std::vector<int> j(static_cast<size_t>(r) + 1, 1);
    IntMatrix S(P.rows, r + 1);
    for (int i = 0; i <= r; ++i) {
      int col = dm_col_index(dm, i, 1);
      for (int row = 0; row < P.rows; ++row) S.at(row, i) = P.at(row, col);
    }
    Int det = maximal_minors(S)[0];  // absolute determinant
    Int m = mu(dm, j);
    CHECK((m == det || m == -det));
  }
}

TEST_CASE("explicit chart-comparison system of the worked example") {
  DefiningMatrix dm = sample_ee();
  HatSystem hs = hat_system_explicit(dm);
  CHECK(hs.bigN_dim == 8);
  CHECK(hs.bigF_dim == 8);
  CHECK(hs.hatN_dim == 5);
  CHECK(hs.hatF_dim == 4);
  CHECK(hs.Phat == mat(5, 4, {1, -1, 0, 0, -1, 2, 0, 0, 0, -1, 8, 0, 0, -1, 0, 4, 0, -2, 7, 3}));
  // Defining identity of the comparison matrix.
  CHECK(mul(hs.gamma, hs.Phat) == mul(hs.Pblocks, hs.delta));
  // gamma and delta are kernel bases of the chart-sum maps.
  CHECK(mul(hs.alpha, hs.gamma).is_zero());
  CHECK(mul(hs.beta, hs.delta).is_zero());
  CHECK(kernel_basis(hs.alpha).cols == hs.hatN_dim);
  CHECK(kernel_basis(hs.beta).cols == hs.hatF_dim);
  // Pair bookkeeping: one slot for the single proper pair of block 0.
  REQUIRE(hs.pairs.size() == 1);
  CHECK(hs.pairs[0].i == 0);
  CHECK(hs.pairs[0].j == 1);
  CHECK(hs.pairs[0].l == 1);
  CHECK(hs.pairs[0].d == -1);
}

TEST_CASE("chart-comparison identities on random data") {
  std::mt19937_64 rng(424242ULL);
  for (int t = 0; t < 25; ++t) {
    DefiningMatrix dm = random_defining_matrix(rng);
    HatSystem hs = hat_system_explicit(dm);
    CHECK(mul(hs.gamma, hs.Phat) == mul(hs.Pblocks, hs.delta));
    CHECK(mul(hs.alpha, hs.gamma).is_zero());
    CHECK(mul(hs.beta, hs.delta).is_zero());
    // The comparison cokernel reproduces the obstruction group.
    Fan fan = ambient_fan(dm);
    PicardData pd = picard_direct(fan);
    CHECK(cokernel(transpose(hs.Phat)) == pd.khat);
  }
}

TEST_CASE("minor collections of the worked example") {
  DefiningMatrix dm = sample_ee();
  MinorSets ms = minor_sets(dm);
  CHECK(ms.M_P == ints({4, 8, 12, 20}));
  CHECK(ms.M_prime_P == ints({4, 8, 12}));
  CHECK(ms.M_Phat == ints({12, 12, 24, 28, 32}));
  CHECK(ms.M_red_Phat == ints({12, 24, 28, 32}));
  CHECK(ms.gcd_value == 4);
}

TEST_CASE("minor collections: the four gcds agree") {
  std::mt19937_64 rng(55555ULL);
  auto gcd_of = [](const std::vector<Int>& v) {
    Int g = 0;
    for (const Int& x : v) g = igcd(g, x);
    return g;
  };
  for (int t = 0; t < 25; ++t) {
    DefiningMatrix dm = random_defining_matrix(rng);
    MinorSets ms = minor_sets(dm, 3000);
    CHECK(ms.gcd_value == class_group_torsion_order(dm));
    CHECK(gcd_of(ms.M_P) == ms.gcd_value);
    if (!ms.M_prime_P.empty()) CHECK(gcd_of(ms.M_prime_P) == ms.gcd_value);
    if (!ms.M_Phat.empty()) CHECK(gcd_of(ms.M_Phat) == ms.gcd_value);
    if (!ms.M_red_Phat.empty()) CHECK(gcd_of(ms.M_red_Phat) == ms.gcd_value);
  }
}

TEST_CASE("enumeration cap skips listings but keeps the gcd") {
  DefiningMatrix dm = sample_ee();
  MinorSets ms = minor_sets(dm, 1);  // 5 row subsets > 1: listing suppressed
  CHECK(ms.M_Phat.empty());
  CHECK(ms.M_red_Phat.empty());
  CHECK(ms.gcd_value == 4);
  CHECK(ms.M_P == ints({4, 8, 12, 20}));
}

TEST_CASE("torsion order and the product formula on the worked example") {
  DefiningMatrix dm = sample_ee();
  CHECK(class_group_torsion_order(dm) == 4);
  CHECK(picard_index_product_formula(dm) == 60);
  // Numerator of the product formula: local orders 20, 1, 12.
  Fan fan = ambient_fan(dm);
  Int prod = 1;
  for (size_t c = 0; c < fan.max_cones.size(); ++c)
    prod *= local_class_group(fan, (int)c).order();
  CHECK(prod == 240);
  CHECK(prod / class_group_torsion_order(dm) == 60);
}

TEST_CASE("product formula agrees with both chart routes") {
  std::mt19937_64 rng(777777ULL);
  for (int t = 0; t < 40; ++t) {
    DefiningMatrix dm = random_defining_matrix(rng);
    Fan fan = ambient_fan(dm);
    PicardData a = picard_direct(fan);
    PicardData b = picard_via_hat(fan);
    Int f = picard_index_product_formula(dm);
    CHECK(f == a.pic_index);
    CHECK(f == b.pic_index);
    CHECK(a.pic_index * a.khat.torsion_order() == a.local_order_product);
  }
}
