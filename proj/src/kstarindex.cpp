#include "kstarpic/kstarindex.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace kstarpic {

Int mu(const DefiningMatrix& dm, const std::vector<int>& j) {
  int r = dm.r();
  assert((int)j.size() == r + 1);
  Int s = 0;
  for (int i = 0; i <= r; ++i) {
    assert(j[i] >= 1 && j[i] <= dm.block_size(i));
    Int term = dm.d[i][j[i] - 1];
    for (int k = 0; k <= r; ++k)
      if (k != i) term *= dm.l[k][j[k] - 1];
    s += term;
  }
  return s;
}

Int mu_hat(const DefiningMatrix& dm) {
  std::vector<int> j;
  for (int i = 0; i <= dm.r(); ++i) j.push_back(dm.block_size(i));
  return mu(dm, j);
}

Int nu(const DefiningMatrix& dm, int i, int j, int jp) {
  return dm.l[i][j - 1] * dm.d[i][jp - 1] - dm.l[i][jp - 1] * dm.d[i][j - 1];
}

Int nu_hat(const DefiningMatrix& dm, int i, int j) { return nu(dm, i, j, dm.block_size(i)); }

namespace {

// Symbolic coordinate bookkeeping for the chart stack of the ambient fan.
struct ChartCoords {
  int r = 0;
  bool vp = false, vm = false;
  int bigN = 0, bigF = 0;
  // sigma+/sigma- chart coordinates (absent index -1)
  std::vector<int> eplus, eminus;  // size r+1, index 0 unused (expanded)
  int uplus = -1, uminus = -1;
  // tau_{i,j} chart coordinates, j in 0..n_i (outer j where the chart exists)
  std::vector<std::vector<int>> ec, uc;
  // ray slots: fplus[i][j] for f_ij^+ (j = 1..n_i+1), fminus[i][j] for
  // f_ij^- (j = 0..n_i); absent -1
  std::vector<std::vector<int>> fplus, fminus;
};

ChartCoords chart_coords(const DefiningMatrix& dm) {
  ChartCoords cc;
  int r = dm.r();
  cc.r = r;
  cc.vp = dm.has_vplus();
  cc.vm = dm.has_vminus();
  cc.eplus.assign(r + 1, -1);
  cc.eminus.assign(r + 1, -1);
  cc.ec.assign(r + 1, {});
  cc.uc.assign(r + 1, {});
  cc.fplus.assign(r + 1, {});
  cc.fminus.assign(r + 1, {});
  for (int i = 0; i <= r; ++i) {
    cc.ec[i].assign(dm.block_size(i) + 1, -1);
    cc.uc[i].assign(dm.block_size(i) + 1, -1);
    cc.fplus[i].assign(dm.block_size(i) + 2, -1);
    cc.fminus[i].assign(dm.block_size(i) + 1, -1);
  }
  int oN = 0, oF = 0;
  auto tau_chart = [&](int i, int j) {
    cc.ec[i][j] = oN++;
    cc.uc[i][j] = oN++;
    cc.fminus[i][j] = oF++;      // slot of ray v_ij (or v+ when j = 0)
    cc.fplus[i][j + 1] = oF++;   // slot of ray v_{i,j+1} (or v- when j+1 = n_i+1)
  };
  // source boundary
  if (!cc.vp) {
    for (int i = 1; i <= r; ++i) cc.eplus[i] = oN++;
    cc.uplus = oN++;
    for (int i = 0; i <= r; ++i) cc.fplus[i][1] = oF++;
  } else {
    for (int i = 0; i <= r; ++i) tau_chart(i, 0);
  }
  // interior
  for (int i = 0; i <= r; ++i)
    for (int j = 1; j < dm.block_size(i); ++j) tau_chart(i, j);
  // sink boundary
  if (!cc.vm) {
    for (int i = 1; i <= r; ++i) cc.eminus[i] = oN++;
    cc.uminus = oN++;
    for (int i = 0; i <= r; ++i) cc.fminus[i][dm.block_size(i)] = oF++;
  } else {
    for (int i = 0; i <= r; ++i) tau_chart(i, dm.block_size(i));
  }
  cc.bigN = oN;
  cc.bigF = oF;
  return cc;
}

}  // namespace

HatSystem hat_system_explicit(const DefiningMatrix& dm) {
  if (!is_valid(dm)) throw std::runtime_error("hat_system_explicit: invalid defining matrix");
  const int r = dm.r();
  const int n = dm.n_total();
  const ChartCoords cc = chart_coords(dm);
  const DmType ty = dm.type;

  HatSystem hs;
  hs.bigN_dim = cc.bigN;
  hs.bigF_dim = cc.bigF;

  // symbolic writers into bigN column vectors, handling the e_0 expansions
  auto add_eplus = [&](IntMatrix& M, int col, const Int& coef, int i) {
    if (i == 0) {
      for (int k = 1; k <= r; ++k) M.at(cc.eplus[k], col) -= coef;
    } else {
      M.at(cc.eplus[i], col) += coef;
    }
  };
  auto add_eminus = [&](IntMatrix& M, int col, const Int& coef, int i) {
    if (i == 0) {
      for (int k = 1; k <= r; ++k) M.at(cc.eminus[k], col) -= coef;
    } else {
      M.at(cc.eminus[i], col) += coef;
    }
  };

  // --- alpha: chart lattices onto the ambient lattice Z^{r+1} ---
  hs.alpha = IntMatrix(r + 1, cc.bigN);
  auto alpha_e = [&](int col, int i) {
    if (i == 0) {
      for (int k = 0; k < r; ++k) hs.alpha.at(k, col) = -1;
    } else {
      hs.alpha.at(i - 1, col) = 1;
    }
  };
  if (!cc.vp) {
    for (int i = 1; i <= r; ++i) alpha_e(cc.eplus[i], i);
    hs.alpha.at(r, cc.uplus) = 1;
  }
  if (!cc.vm) {
    for (int i = 1; i <= r; ++i) alpha_e(cc.eminus[i], i);
    hs.alpha.at(r, cc.uminus) = 1;
  }
  for (int i = 0; i <= r; ++i)
    for (int j = 0; j <= dm.block_size(i); ++j)
      if (cc.ec[i][j] >= 0) {
        alpha_e(cc.ec[i][j], i);
        hs.alpha.at(r, cc.uc[i][j]) = 1;
      }

  // --- beta: chart ray slots onto the global ray slots ---
  hs.beta = IntMatrix(n + dm.m_extra(), cc.bigF);
  for (int i = 0; i <= r; ++i) {
    int ni = dm.block_size(i);
    for (int j = 1; j <= ni; ++j) {
      if (cc.fplus[i][j] >= 0) hs.beta.at(dm_col_index(dm, i, j), cc.fplus[i][j]) = 1;
      if (cc.fminus[i][j] >= 0) hs.beta.at(dm_col_index(dm, i, j), cc.fminus[i][j]) = 1;
    }
    if (cc.fminus[i][0] >= 0) hs.beta.at(dm_vplus_index(dm), cc.fminus[i][0]) = 1;
    if (cc.fplus[i][ni + 1] >= 0) hs.beta.at(dm_vminus_index(dm), cc.fplus[i][ni + 1]) = 1;
  }

  // --- block-diagonal chart matrices ---
  // (l, d) of ray v_ij extended by the boundary conventions
  auto lval = [&](int i, int j) -> Int {
    if (j == 0 || j == dm.block_size(i) + 1) return 0;
    return dm.l[i][j - 1];
  };
  auto dval = [&](int i, int j) -> Int {
    if (j == 0) return 1;
    if (j == dm.block_size(i) + 1) return -1;
    return dm.d[i][j - 1];
  };
  hs.Pblocks = IntMatrix(cc.bigN, cc.bigF);
  if (!cc.vp) {
    for (int i = 0; i <= r; ++i) {
      int col = cc.fplus[i][1];
      add_eplus(hs.Pblocks, col, dm.l[i][0], i);
      hs.Pblocks.at(cc.uplus, col) += dm.d[i][0];
    }
  }
  if (!cc.vm) {
    for (int i = 0; i <= r; ++i) {
      int ni = dm.block_size(i);
      int col = cc.fminus[i][ni];
      add_eminus(hs.Pblocks, col, dm.l[i][ni - 1], i);
      hs.Pblocks.at(cc.uminus, col) += dm.d[i][ni - 1];
    }
  }
  for (int i = 0; i <= r; ++i)
    for (int j = 0; j <= dm.block_size(i); ++j)
      if (cc.ec[i][j] >= 0) {
        int cminus = cc.fminus[i][j], cplus = cc.fplus[i][j + 1];
        hs.Pblocks.at(cc.ec[i][j], cminus) = lval(i, j);
        hs.Pblocks.at(cc.uc[i][j], cminus) = dval(i, j);
        hs.Pblocks.at(cc.ec[i][j], cplus) = lval(i, j + 1);
        hs.Pblocks.at(cc.uc[i][j], cplus) = dval(i, j + 1);
      }

  // --- hat lattice layout ---
  // pair slots (e_ij, u_ij) for j = 1..n_i' with n_i' = n_i - 1 in the
  // ee case and n_i otherwise; then the r+1 extra coordinates for ee/pp
  auto nprime = [&](int i) {
    return ty == DmType::ee ? dm.block_size(i) - 1 : dm.block_size(i);
  };
  std::vector<std::vector<int>> ehat(r + 1), uhat(r + 1);
  int oNh = 0;
  for (int i = 0; i <= r; ++i) {
    ehat[i].assign(nprime(i) + 1, -1);
    uhat[i].assign(nprime(i) + 1, -1);
    for (int j = 1; j <= nprime(i); ++j) {
      ehat[i][j] = oNh++;
      uhat[i][j] = oNh++;
    }
  }
  // extra coordinates: ee has (te_1..te_r, tu); pp has (tu_1..tu_r, te)
  std::vector<int> tilde_e(r + 1, -1);
  std::vector<int> tilde_u(r + 1, -1);  // pp: tu_i for i = 1..r
  int tilde_u_ee = -1, tilde_e_pp = -1;
  if (ty == DmType::ee) {
    for (int i = 1; i <= r; ++i) tilde_e[i] = oNh++;
    tilde_u_ee = oNh++;
  } else if (ty == DmType::pp) {
    for (int i = 1; i <= r; ++i) tilde_u[i] = oNh++;
    tilde_e_pp = oNh++;
  }
  hs.hatN_dim = oNh;

  std::vector<std::vector<int>> fhat(r + 1);
  int oFh = 0;
  for (int i = 0; i <= r; ++i) {
    fhat[i].assign(dm.block_size(i) + 1, -1);
    for (int j = 1; j <= dm.block_size(i); ++j) fhat[i][j] = oFh++;
  }
  std::vector<int> fhat_minus(r + 1, -1), fhat_plus(r + 1, -1);
  if (cc.vp)
    for (int i = 1; i <= r; ++i) fhat_minus[i] = oFh++;
  if (cc.vm)
    for (int i = 1; i <= r; ++i) fhat_plus[i] = oFh++;
  hs.hatF_dim = oFh;

  // --- gamma: hat lattice into the chart-sum lattice (kernel of alpha) ---
  hs.gamma = IntMatrix(cc.bigN, hs.hatN_dim);
  auto gam_pair = [&](int i, int j, bool topPlus, bool botMinus) {
    // e-hat column: (previous chart e) - (chart tau_ij e); u-hat likewise.
    int ce = ehat[i][j], cu = uhat[i][j];
    // source side term
    if (topPlus && j == 1) {
      add_eplus(hs.gamma, ce, 1, i);
      hs.gamma.at(cc.uplus, cu) += 1;
    } else {
      hs.gamma.at(cc.ec[i][j - 1], ce) += 1;
      hs.gamma.at(cc.uc[i][j - 1], cu) += 1;
    }
    // sink side term
    if (botMinus && j == nprime(i)) {
      add_eminus(hs.gamma, ce, -1, i);
      hs.gamma.at(cc.uminus, cu) -= 1;
    } else {
      hs.gamma.at(cc.ec[i][j], ce) -= 1;
      hs.gamma.at(cc.uc[i][j], cu) -= 1;
    }
  };
  for (int i = 0; i <= r; ++i)
    for (int j = 1; j <= nprime(i); ++j) {
      switch (ty) {
        case DmType::ee: gam_pair(i, j, true, false); break;   // j <= n_i - 1
        case DmType::pe: gam_pair(i, j, false, true); break;   // j = n_i hits sigma-
        case DmType::ep: gam_pair(i, j, true, false); break;   // j = 1 hits sigma+
        case DmType::pp: gam_pair(i, j, false, false); break;  // tau charts only
      }
    }
  if (ty == DmType::ee) {
    for (int i = 1; i <= r; ++i) {
      add_eplus(hs.gamma, tilde_e[i], 1, i);
      add_eminus(hs.gamma, tilde_e[i], -1, i);
    }
    hs.gamma.at(cc.uplus, tilde_u_ee) += 1;
    hs.gamma.at(cc.uminus, tilde_u_ee) -= 1;
  } else if (ty == DmType::pp) {
    for (int i = 1; i <= r; ++i) {
      hs.gamma.at(cc.uc[i][dm.block_size(i)], tilde_u[i]) += 1;
      hs.gamma.at(cc.uc[i - 1][dm.block_size(i - 1)], tilde_u[i]) -= 1;
    }
    for (int i = 0; i <= r; ++i) hs.gamma.at(cc.ec[i][0], tilde_e_pp) += 1;
  }

  // --- delta: hat ray slots into the chart slot sum (kernel of beta) ---
  hs.delta = IntMatrix(cc.bigF, hs.hatF_dim);
  for (int i = 0; i <= r; ++i)
    for (int j = 1; j <= dm.block_size(i); ++j) {
      hs.delta.at(cc.fplus[i][j], fhat[i][j]) = 1;
      hs.delta.at(cc.fminus[i][j], fhat[i][j]) = -1;
    }
  if (cc.vp)
    for (int i = 1; i <= r; ++i) {
      hs.delta.at(cc.fminus[i - 1][0], fhat_minus[i]) = 1;
      hs.delta.at(cc.fminus[i][0], fhat_minus[i]) = -1;
    }
  if (cc.vm)
    for (int i = 1; i <= r; ++i) {
      hs.delta.at(cc.fplus[i - 1][dm.block_size(i - 1) + 1], fhat_plus[i]) = 1;
      hs.delta.at(cc.fplus[i][dm.block_size(i) + 1], fhat_plus[i]) = -1;
    }

  // --- the comparison matrix itself ---
  hs.Phat = IntMatrix(hs.hatN_dim, hs.hatF_dim);
  auto add_tilde_e = [&](int col, const Int& coef, int i) {
    // ee only; te_0 = -(te_1 + ... + te_r)
    if (i == 0) {
      for (int k = 1; k <= r; ++k) hs.Phat.at(tilde_e[k], col) -= coef;
    } else {
      hs.Phat.at(tilde_e[i], col) += coef;
    }
  };
  for (int i = 0; i <= r; ++i) {
    int ni = dm.block_size(i);
    for (int j = 1; j <= ni; ++j) {
      int col = fhat[i][j];
      if (ty == DmType::ee && j == ni) {
        // l (te_i - sum_k ehat_ik) + d (tu - sum_k uhat_ik), k = 1..n_i-1
        add_tilde_e(col, dm.l[i][j - 1], i);
        hs.Phat.at(tilde_u_ee, col) += dm.d[i][j - 1];
        for (int k = 1; k <= ni - 1; ++k) {
          hs.Phat.at(ehat[i][k], col) -= dm.l[i][j - 1];
          hs.Phat.at(uhat[i][k], col) -= dm.d[i][j - 1];
        }
      } else {
        hs.Phat.at(ehat[i][j], col) += dm.l[i][j - 1];
        hs.Phat.at(uhat[i][j], col) += dm.d[i][j - 1];
      }
    }
  }
  auto uhat_block_sum = [&](int col, int i, const Int& sign) {
    for (int k = 1; k <= dm.block_size(i); ++k) hs.Phat.at(uhat[i][k], col) += sign;
  };
  if (cc.vp)
    for (int i = 1; i <= r; ++i) {
      int col = fhat_minus[i];
      uhat_block_sum(col, i - 1, 1);
      uhat_block_sum(col, i, -1);
      if (ty == DmType::pp) hs.Phat.at(tilde_u[i], col) -= 1;
    }
  if (cc.vm)
    for (int i = 1; i <= r; ++i) {
      int col = fhat_plus[i];
      if (ty == DmType::pp) {
        hs.Phat.at(tilde_u[i], col) += 1;
      } else {
        uhat_block_sum(col, i - 1, 1);
        uhat_block_sum(col, i, -1);
      }
    }

  // pair bookkeeping for reduced minors
  for (int i = 0; i <= r; ++i)
    for (int j = 1; j <= nprime(i); ++j) {
      HatSystem::PairSlot ps;
      ps.i = i;
      ps.j = j;
      ps.row_e = ehat[i][j];
      ps.row_u = uhat[i][j];
      ps.col_f = fhat[i][j];
      ps.l = dm.l[i][j - 1];
      ps.d = dm.d[i][j - 1];
      hs.pairs.push_back(ps);
    }

  // structural identities of the construction
  assert(mul(hs.alpha, hs.gamma).is_zero());
  assert(mul(hs.beta, hs.delta).is_zero());
  assert(mul(hs.gamma, hs.Phat) == mul(hs.Pblocks, hs.delta));
  assert(mul(hs.alpha, hs.Pblocks) == mul(assemble(dm), hs.beta));
  return hs;
}

namespace {

long long binom(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long b = 1;
  for (long long t = 1; t <= k; ++t) {
    if (b > (4LL << 60) / (n - k + t)) return 4LL << 60;  // saturate
    b = b * (n - k + t) / t;
  }
  return b;
}

}  // namespace

MinorSets minor_sets(const DefiningMatrix& dm, long long enum_cap) {
  if (!is_valid(dm)) throw std::runtime_error("minor_sets: invalid defining matrix");
  MinorSets ms;
  IntMatrix P = assemble(dm);
  ms.M_P = maximal_minors(P);
  std::sort(ms.M_P.begin(), ms.M_P.end());
  ms.gcd_value = gcd_maximal_minors(P);

  // closed-form collection from the block data
  std::set<Int> mp;
  int r = dm.r();
  if (dm.type == DmType::ee) {
    mp.insert(abs(mu_hat(dm)));
    for (int i1 = 0; i1 <= r; ++i1)
      for (int i0 = 0; i0 <= r; ++i0) {
        if (i0 == i1) continue;
        // choices of j_i for every block i != i1
        std::vector<int> blocks;
        for (int i = 0; i <= r; ++i)
          if (i != i1) blocks.push_back(i);
        std::vector<int> j(blocks.size(), 1);
        for (;;) {
          Int term = 1;
          int j_i0 = 0;
          for (size_t b = 0; b < blocks.size(); ++b)
            if (blocks[b] == i0) j_i0 = j[b];
          term = abs(nu_hat(dm, i0, j_i0));
          for (size_t b = 0; b < blocks.size(); ++b)
            if (blocks[b] != i0) term *= dm.l[blocks[b]][j[b] - 1];
          if (term != 0) mp.insert(term);
          size_t b = 0;
          while (b < blocks.size()) {
            if (j[b] < dm.block_size(blocks[b])) {
              ++j[b];
              break;
            }
            j[b] = 1;
            ++b;
          }
          if (b == blocks.size()) break;
        }
      }
  } else {
    for (int i1 = 0; i1 <= r; ++i1) {
      std::vector<int> blocks;
      for (int i = 0; i <= r; ++i)
        if (i != i1) blocks.push_back(i);
      std::vector<int> j(blocks.size(), 1);
      for (;;) {
        Int term = 1;
        for (size_t b = 0; b < blocks.size(); ++b) term *= dm.l[blocks[b]][j[b] - 1];
        mp.insert(term);
        size_t b = 0;
        while (b < blocks.size()) {
          if (j[b] < dm.block_size(blocks[b])) {
            ++j[b];
            break;
          }
          j[b] = 1;
          ++b;
        }
        if (b == blocks.size()) break;
      }
    }
  }
  ms.M_prime_P.assign(mp.begin(), mp.end());

  HatSystem hs = hat_system_explicit(dm);
  if (binom(hs.hatN_dim, hs.hatF_dim) <= enum_cap) {
    ms.M_Phat = maximal_minors(transpose(hs.Phat));
    std::sort(ms.M_Phat.begin(), ms.M_Phat.end());
    // reduced minors: for each row subset remove, per pair slot with
    // exactly one of its two rows selected, that row and the pair's column
    std::set<Int> red;
    std::vector<int> idx(hs.hatF_dim);
    for (int i = 0; i < hs.hatF_dim; ++i) idx[i] = i;
    std::vector<char> in_a(hs.hatN_dim, 0);
    for (;;) {
      std::fill(in_a.begin(), in_a.end(), 0);
      for (int v : idx) in_a[v] = 1;
      std::vector<int> drop_rows, drop_cols;
      for (const auto& ps : hs.pairs) {
        bool e_in = in_a[ps.row_e], u_in = in_a[ps.row_u];
        if (e_in != u_in) {
          drop_rows.push_back(e_in ? ps.row_e : ps.row_u);
          drop_cols.push_back(ps.col_f);
        }
      }
      std::vector<int> rows, cols;
      for (int v : idx)
        if (std::find(drop_rows.begin(), drop_rows.end(), v) == drop_rows.end())
          rows.push_back(v);
      for (int c = 0; c < hs.hatF_dim; ++c)
        if (std::find(drop_cols.begin(), drop_cols.end(), c) == drop_cols.end())
          cols.push_back(c);
      assert(rows.size() == cols.size());
      red.insert(abs(det(submatrix_rows(submatrix_cols(hs.Phat, cols), rows))));
      // next subset (lexicographic)
      int i = hs.hatF_dim - 1;
      while (i >= 0 && idx[i] == hs.hatN_dim - hs.hatF_dim + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int k = i + 1; k < hs.hatF_dim; ++k) idx[k] = idx[k - 1] + 1;
    }
    ms.M_red_Phat.assign(red.begin(), red.end());
  }
  return ms;
}

Int class_group_torsion_order(const DefiningMatrix& dm) {
  return gcd_maximal_minors(assemble(dm));
}

Int picard_index_product_formula(const DefiningMatrix& dm) {
  Fan fan = ambient_fan(dm);
  Int prod = 1;
  for (int c = 0; c < (int)fan.max_cones.size(); ++c) {
    LocalChart ch = local_class_group(fan, c);
    if (ch.group.rank != 0)
      throw std::runtime_error("picard_index_product_formula: infinite local class group");
    prod *= ch.group.torsion_order();
  }
  Int tors = class_group_torsion_order(dm);
  if (tors == 0 || prod % tors != 0)
    throw std::runtime_error("picard_index_product_formula: torsion order must divide the product");
  return prod / tors;
}

}  // namespace kstarpic
