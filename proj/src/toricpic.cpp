#include "kstarpic/toricpic.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace kstarpic {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::runtime_error(what);
}

// Fans fed into the Picard machinery must have pairwise distinct primitive
// rays and cones that together span the space as a cone (non-degeneracy).
void check_fan(const Fan& fan) {
  require(fan.rays.rows == fan.dim, "fan: ray matrix has wrong number of rows");
  for (int j = 0; j < fan.rays.cols; ++j) {
    Int g = 0;
    for (int i = 0; i < fan.dim; ++i) g = igcd(g, fan.rays.at(i, j));
    require(g == 1, "fan: rays must be primitive");
  }
  for (int j1 = 0; j1 < fan.rays.cols; ++j1)
    for (int j2 = j1 + 1; j2 < fan.rays.cols; ++j2) {
      bool same = true;
      for (int i = 0; i < fan.dim; ++i)
        if (fan.rays.at(i, j1) != fan.rays.at(i, j2)) same = false;
      require(!same, "fan: duplicate rays");
    }
  require(!fan.max_cones.empty(), "fan: no cones");
  std::vector<bool> used(fan.rays.cols, false);
  for (const auto& c : fan.max_cones) {
    require(!c.empty(), "fan: empty cone");
    for (int idx : c) {
      require(idx >= 0 && idx < fan.rays.cols, "fan: cone index out of range");
      used[idx] = true;
    }
  }
  for (bool u : used) require(u, "fan: unused ray");
  require(cone_spans_space(fan.rays), "fan: rays do not generate the space as a cone");
}

}  // namespace

std::vector<Int> ClPresentation::class_coords(const std::vector<Int>& x) const {
  assert((int)x.size() == n);
  std::vector<Int> y(n, Int(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y[i] += U.at(i, j) * x[j];
  std::vector<Int> out;
  for (int i : torsion_rows) {
    Int v = y[i] % dvals[i];
    if (v < 0) v += dvals[i];
    out.push_back(v);
  }
  for (int i : free_rows) out.push_back(y[i]);
  return out;
}

ClPresentation class_group_presentation(const Fan& fan) {
  check_fan(fan);
  ClPresentation pres;
  pres.n = fan.rays.cols;
  pres.dim = fan.dim;
  IntMatrix A = transpose(fan.rays);  // n x dim
  SmithForm S = snf(A);
  pres.U = S.U;
  pres.dvals.assign(pres.n, Int(0));
  for (int i = 0; i < (int)S.d.size(); ++i) pres.dvals[i] = S.d[i];
  for (int i = 0; i < pres.n; ++i) {
    if (i < S.rank) {
      if (S.d[i] > 1) {
        pres.torsion_rows.push_back(i);
        pres.group.torsion.push_back(S.d[i]);
      }
    } else {
      pres.free_rows.push_back(i);
    }
  }
  pres.group.rank = pres.n - S.rank;
  return pres;
}

AbelianGroup class_group(const Fan& fan) { return class_group_presentation(fan).group; }

Int LocalChart::order() const { return group.rank > 0 ? Int(0) : group.torsion_order(); }

LocalChart local_class_group(const Fan& fan, int cone_index) {
  require(cone_index >= 0 && cone_index < (int)fan.max_cones.size(),
          "local_class_group: cone index out of range");
  LocalChart ch;
  ch.cone = fan.max_cones[cone_index];
  IntMatrix rays_sigma = submatrix_cols(fan.rays, ch.cone);
  ch.basis = saturated_span_basis(rays_sigma);
  auto sol = solve_exact(ch.basis, rays_sigma);
  assert(sol.has_value());  // rays lie in the saturation of their own span
  ch.P_sigma = *sol;
  ch.group = cokernel(transpose(ch.P_sigma));
  ch.simplicial = (int)ch.cone.size() == ch.basis.cols;
  return ch;
}

IntMatrix subgroup_canonical(const ClPresentation& pres,
                             const std::vector<std::vector<Int>>& gens_coords) {
  int t = (int)pres.torsion_rows.size();
  int f = (int)pres.free_rows.size();
  IntMatrix G(t + f, (int)gens_coords.size() + t);
  for (int j = 0; j < (int)gens_coords.size(); ++j) {
    assert((int)gens_coords[j].size() == t + f);
    for (int i = 0; i < t + f; ++i) G.at(i, j) = gens_coords[j][i];
  }
  // torsion relations: d_i e_i
  for (int i = 0; i < t; ++i)
    G.at(i, (int)gens_coords.size() + i) = pres.dvals[pres.torsion_rows[i]];
  IntMatrix H = hnf(G);
  // strip zero columns for a shape-independent canonical form
  std::vector<int> keep;
  for (int j = 0; j < H.cols; ++j) {
    bool nz = false;
    for (int i = 0; i < H.rows; ++i)
      if (H.at(i, j) != 0) nz = true;
    if (nz) keep.push_back(j);
  }
  return submatrix_cols(H, keep);
}

namespace {

// Shared first phase of both Picard routes.
struct ChartStack {
  ClPresentation pres;
  std::vector<LocalChart> charts;
  Int local_product = 1;
  int sum_k = 0;  // total chart lattice rank
  int sum_n = 0;  // total chart ray count
};

ChartStack build_charts(const Fan& fan) {
  ChartStack st;
  st.pres = class_group_presentation(fan);
  for (int c = 0; c < (int)fan.max_cones.size(); ++c) {
    LocalChart ch = local_class_group(fan, c);
    require(ch.group.rank == 0, "picard: infinite local class group (non-simplicial cone)");
    st.local_product *= ch.group.torsion_order();
    st.sum_k += ch.basis.cols;
    st.sum_n += (int)ch.cone.size();
    st.charts.push_back(std::move(ch));
  }
  return st;
}

// Presentation of the obstruction quotient as a cokernel over the direct
// sum of the chart class groups: Z^{sum_n} modulo the chart relations and
// the classes coming from the global lattice Z^n.
AbelianGroup khat_from_quotient(const Fan& fan, const ChartStack& st) {
  int n = fan.rays.cols;
  IntMatrix M(st.sum_n, st.sum_k + n);
  int ro = 0, co = 0;
  for (const LocalChart& ch : st.charts) {
    int nc = (int)ch.cone.size(), k = ch.basis.cols;
    for (int a = 0; a < nc; ++a) {
      for (int b = 0; b < k; ++b) M.at(ro + a, co + b) = ch.P_sigma.at(b, a);
      M.at(ro + a, st.sum_k + ch.cone[a]) = 1;
    }
    ro += nc;
    co += k;
  }
  return cokernel(M);
}

void finish_common(PicardData& pd, const Fan& fan, const ChartStack& st) {
  pd.class_group = st.pres.group;
  pd.local = st.charts;
  pd.local_order_product = st.local_product;
  require(pd.khat.rank == 0, "picard: obstruction quotient must be finite");
  Int kh = pd.khat.torsion_order();
  require(st.local_product % kh == 0, "picard: obstruction order must divide local product");
  pd.pic_index = st.local_product / kh;
  pd.pic_rank = fan.rays.cols - fan.dim;
}

}  // namespace

PicardData picard_direct(const Fan& fan) {
  PicardData pd;
  ChartStack st = build_charts(fan);
  int n = fan.rays.cols;

  // W = { x in Z^n : for every cone, the restriction of x to the cone's
  // rays lies in the image of P_sigma^T }.  Solve the combined system
  // R_sigma x = P_sigma^T m_sigma over all cones simultaneously.
  IntMatrix E(st.sum_n, n + st.sum_k);
  int ro = 0, co = 0;
  for (const LocalChart& ch : st.charts) {
    int nc = (int)ch.cone.size(), k = ch.basis.cols;
    for (int a = 0; a < nc; ++a) {
      E.at(ro + a, ch.cone[a]) = 1;
      for (int b = 0; b < k; ++b) E.at(ro + a, n + co + b) = -ch.P_sigma.at(b, a);
    }
    ro += nc;
    co += k;
  }
  IntMatrix K = kernel_basis(E);
  std::vector<int> xrows(n);
  for (int i = 0; i < n; ++i) xrows[i] = i;
  IntMatrix W = hnf(submatrix_rows(K, xrows));
  std::vector<int> nz;
  for (int j = 0; j < W.cols; ++j) {
    bool any = false;
    for (int i = 0; i < n; ++i)
      if (W.at(i, j) != 0) any = true;
    if (any) nz.push_back(j);
  }
  IntMatrix BW = submatrix_cols(W, nz);
  require(BW.cols == n, "picard: glued subgroup has unexpected rank");

  // index of W in Z^n = |det| of the triangular Hermite basis
  Int idx = 1;
  {
    Int dd = det(BW);
    idx = abs(dd);
    require(idx != 0, "picard: glued subgroup basis degenerate");
  }

  IntMatrix A0 = transpose(fan.rays);  // n x dim
  auto Y = solve_exact(BW, A0);
  require(Y.has_value(), "picard: ray classes must lie in the glued subgroup");
  pd.pic_group = cokernel(*Y);
  pd.pic_torsion_free = pd.pic_group.torsion.empty();
  pd.khat = khat_from_quotient(fan, st);
  pd.alpha_surjective = [&] {
    IntMatrix alpha(fan.dim, st.sum_k);
    int c0 = 0;
    for (const LocalChart& ch : st.charts) {
      for (int i = 0; i < fan.dim; ++i)
        for (int b = 0; b < ch.basis.cols; ++b) alpha.at(i, c0 + b) = ch.basis.at(i, b);
      c0 += ch.basis.cols;
    }
    return cokernel(alpha).is_trivial();
  }();
  finish_common(pd, fan, st);
  require(pd.pic_index == idx, "picard: index mismatch between routes");
  require(pd.pic_group.rank == pd.pic_rank, "picard: rank mismatch");

  for (int j = 0; j < BW.cols; ++j) pd.pic_generators.push_back(st.pres.class_coords(get_col(BW, j)));
  pd.pic_subgroup_hnf = subgroup_canonical(st.pres, pd.pic_generators);
  return pd;
}

PicardData picard_via_hat(const Fan& fan) {
  PicardData pd;
  ChartStack st = build_charts(fan);
  int n = fan.rays.cols;

  IntMatrix alpha(fan.dim, st.sum_k);
  IntMatrix beta(n, st.sum_n);
  IntMatrix Pblocks(st.sum_k, st.sum_n);
  int co_k = 0, co_n = 0;
  for (const LocalChart& ch : st.charts) {
    int nc = (int)ch.cone.size(), k = ch.basis.cols;
    for (int i = 0; i < fan.dim; ++i)
      for (int b = 0; b < k; ++b) alpha.at(i, co_k + b) = ch.basis.at(i, b);
    for (int a = 0; a < nc; ++a) {
      beta.at(ch.cone[a], co_n + a) = 1;
      for (int b = 0; b < k; ++b) Pblocks.at(co_k + b, co_n + a) = ch.P_sigma.at(b, a);
    }
    co_k += k;
    co_n += nc;
  }
  IntMatrix gamma = kernel_basis(alpha);
  IntMatrix delta = kernel_basis(beta);
  IntMatrix Pd = mul(Pblocks, delta);
  auto Phat = solve_exact(gamma, Pd);
  require(Phat.has_value(), "picard: comparison map must lift to the kernel lattice");
  // commuting square: gamma * Phat = Pblocks * delta
  assert(mul(gamma, *Phat) == Pd);

  pd.alpha_surjective = cokernel(alpha).is_trivial();
  if (pd.alpha_surjective) {
    // chart-sum map onto the lattice: the comparison matrix presents the
    // obstruction quotient directly, and the Picard group is free.
    pd.khat = cokernel(transpose(*Phat));
    pd.pic_torsion_free = true;
    finish_common(pd, fan, st);
    pd.pic_group.rank = pd.pic_rank;
  } else {
    // degenerate case: fall back to the quotient presentation and take the
    // group structure from the direct route.
    PicardData direct = picard_direct(fan);
    pd.khat = direct.khat;
    pd.pic_torsion_free = direct.pic_torsion_free;
    finish_common(pd, fan, st);
    pd.pic_group = direct.pic_group;
  }
  return pd;
}

Fan wps_fan(const std::vector<Int>& weights) {
  int k = (int)weights.size();
  require(k >= 2, "wps_fan: need at least two weights");
  Int g = 0;
  for (const Int& w : weights) {
    require(w >= 1, "wps_fan: weights must be positive");
    g = igcd(g, w);
  }
  require(g == 1, "wps_fan: weights must be coprime");
  IntMatrix wcol(k, 1);
  for (int i = 0; i < k; ++i) wcol.at(i, 0) = weights[i];
  SmithForm S = snf(wcol);
  assert(S.d[0] == 1);  // coprime weights
  // U * w = e_1, so rows 2..k of U give the quotient lattice map
  Fan fan;
  fan.dim = k - 1;
  fan.rays = IntMatrix(k - 1, k);
  for (int i = 0; i < k - 1; ++i)
    for (int j = 0; j < k; ++j) fan.rays.at(i, j) = S.U.at(i + 1, j);
  for (int drop = 0; drop < k; ++drop) {
    std::vector<int> cone;
    for (int j = 0; j < k; ++j)
      if (j != drop) cone.push_back(j);
    fan.max_cones.push_back(std::move(cone));
  }
  check_fan(fan);
  return fan;
}

}  // namespace kstarpic
