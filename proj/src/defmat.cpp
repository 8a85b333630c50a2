#include "kstarpic/defmat.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>

namespace kstarpic {

std::string dm_type_name(DmType t) {
  switch (t) {
    case DmType::ee: return "ee";
    case DmType::pe: return "pe";
    case DmType::ep: return "ep";
    case DmType::pp: return "pp";
  }
  return "?";
}

bool dm_type_from_name(const std::string& s, DmType& out) {
  if (s == "ee") out = DmType::ee;
  else if (s == "pe") out = DmType::pe;
  else if (s == "ep") out = DmType::ep;
  else if (s == "pp") out = DmType::pp;
  else return false;
  return true;
}

int DefiningMatrix::n_total() const {
  int n = 0;
  for (const auto& b : l) n += (int)b.size();
  return n;
}

int DefiningMatrix::m_extra() const {
  return (has_vplus() ? 1 : 0) + (has_vminus() ? 1 : 0);
}

int dm_col_index(const DefiningMatrix& dm, int i, int j) {
  assert(i >= 0 && i < (int)dm.l.size());
  assert(j >= 1 && j <= dm.block_size(i));
  int off = 0;
  for (int k = 0; k < i; ++k) off += dm.block_size(k);
  return off + (j - 1);
}

int dm_vplus_index(const DefiningMatrix& dm) {
  assert(dm.has_vplus());
  return dm.n_total();
}

int dm_vminus_index(const DefiningMatrix& dm) {
  assert(dm.has_vminus());
  return dm.n_total() + (dm.has_vplus() ? 1 : 0);
}

IntMatrix assemble(const DefiningMatrix& dm) {
  int r = dm.r();
  IntMatrix P(r + 1, dm.n_total() + dm.m_extra());
  int col = 0;
  for (int i = 0; i <= r; ++i) {
    for (int j = 0; j < dm.block_size(i); ++j, ++col) {
      if (i == 0) {
        for (int row = 0; row < r; ++row) P.at(row, col) = -dm.l[0][j];
      } else {
        P.at(i - 1, col) = dm.l[i][j];
      }
      P.at(r, col) = dm.d[i][j];
    }
  }
  if (dm.has_vplus()) P.at(r, col++) = 1;
  if (dm.has_vminus()) P.at(r, col++) = -1;
  return P;
}

namespace {

// One linear constraint a . phi >= b, stored as (a_0, ..., a_{k-1}, b).
using FmRow = std::vector<Int>;

bool fm_normalize(FmRow& row) {
  // returns false if the row is the contradiction 0 >= b with b > 0
  int k = (int)row.size() - 1;
  Int g = 0;
  bool zero = true;
  for (int t = 0; t < k; ++t) {
    if (row[t] != 0) zero = false;
    g = igcd(g, row[t]);
  }
  if (zero) return row[k] <= 0;
  g = igcd(g, row[k]);
  if (g > 1)
    for (Int& v : row) v /= g;
  return true;
}

// Exact Fourier-Motzkin feasibility over the rationals.
bool fm_feasible(std::vector<FmRow> rows, int nvars) {
  std::vector<bool> eliminated(nvars, false);
  // prune and deduplicate
  auto clean = [&](std::vector<FmRow>& rs) -> bool {
    std::set<FmRow> seen;
    std::vector<FmRow> out;
    for (FmRow& r : rs) {
      bool nonzero = false;
      for (int t = 0; t < nvars; ++t)
        if (r[t] != 0) nonzero = true;
      if (!fm_normalize(r)) return false;
      if (!nonzero) continue;  // tautology 0 >= b with b <= 0
      if (seen.insert(r).second) out.push_back(std::move(r));
    }
    rs = std::move(out);
    return true;
  };
  if (!clean(rows)) return false;

  for (int step = 0; step < nvars; ++step) {
    // pick the remaining variable with the fewest pos*neg pairs
    int best = -1;
    long long best_cost = 0;
    for (int t = 0; t < nvars; ++t) {
      if (eliminated[t]) continue;
      long long np = 0, nn = 0;
      for (const FmRow& r : rows) {
        if (r[t] > 0) ++np;
        else if (r[t] < 0) ++nn;
      }
      long long cost = np * nn;
      if (best < 0 || cost < best_cost) {
        best = t;
        best_cost = cost;
      }
    }
    if (best < 0) break;
    eliminated[best] = true;
    std::vector<FmRow> zero_rows, pos_rows, neg_rows;
    for (FmRow& r : rows) {
      if (r[best] > 0) pos_rows.push_back(std::move(r));
      else if (r[best] < 0) neg_rows.push_back(std::move(r));
      else zero_rows.push_back(std::move(r));
    }
    rows = std::move(zero_rows);
    for (const FmRow& p : pos_rows)
      for (const FmRow& n : neg_rows) {
        FmRow r(nvars + 1);
        const Int &ap = p[best], &an = n[best];
        for (int t = 0; t <= nvars; ++t) r[t] = (-an) * p[t] + ap * n[t];
        rows.push_back(std::move(r));
      }
    if (!clean(rows)) return false;
  }
  // all remaining rows have zero coefficients and passed normalization
  return true;
}

}  // namespace

bool cone_spans_space(const IntMatrix& cols) {
  int dim = cols.rows;
  if (rank(cols) < dim) return false;
  // The dual cone is {0} iff the system  phi . c_j >= 0 for all j  together
  // with  phi . (sum_j c_j) >= 1  has no rational solution.
  std::vector<FmRow> rows;
  FmRow s(dim + 1, Int(0));
  for (int j = 0; j < cols.cols; ++j) {
    FmRow r(dim + 1, Int(0));
    for (int i = 0; i < dim; ++i) {
      r[i] = cols.at(i, j);
      s[i] += cols.at(i, j);
    }
    rows.push_back(std::move(r));
  }
  s[dim] = 1;
  rows.push_back(std::move(s));
  return !fm_feasible(std::move(rows), dim);
}

std::vector<std::string> validate(const DefiningMatrix& dm) {
  std::vector<std::string> bad;
  auto say = [&](const std::string& m) { bad.push_back(m); };
  if (dm.l.size() != dm.d.size()) {
    say("block lists l and d have different lengths");
    return bad;
  }
  if (dm.l.size() < 2) {
    say("need at least two blocks (r >= 1)");
    return bad;
  }
  for (size_t i = 0; i < dm.l.size(); ++i) {
    if (dm.l[i].size() != dm.d[i].size()) {
      say("block " + std::to_string(i) + ": l and d have different lengths");
      return bad;
    }
    if (dm.l[i].empty()) say("block " + std::to_string(i) + " is empty");
  }
  if (!bad.empty()) return bad;
  for (size_t i = 0; i < dm.l.size(); ++i) {
    for (size_t j = 0; j < dm.l[i].size(); ++j) {
      std::string pos = "(" + std::to_string(i) + "," + std::to_string(j + 1) + ")";
      if (dm.l[i][j] < 1) say("l" + pos + " must be >= 1");
      else if (igcd(dm.l[i][j], dm.d[i][j]) != 1) say("gcd(l, d) != 1 at " + pos);
    }
    for (size_t j = 0; j + 1 < dm.l[i].size(); ++j) {
      if (dm.l[i][j] < 1 || dm.l[i][j + 1] < 1) continue;
      // d_ij / l_ij > d_i,j+1 / l_i,j+1  for positive denominators
      if (!(dm.d[i][j] * dm.l[i][j + 1] > dm.d[i][j + 1] * dm.l[i][j]))
        say("slopes not strictly decreasing in block " + std::to_string(i) + " at position " +
            std::to_string(j + 1));
    }
  }
  if (!bad.empty()) return bad;
  if (!cone_spans_space(assemble(dm)))
    say("columns do not generate the whole space as a cone");
  return bad;
}

bool is_valid(const DefiningMatrix& dm) { return validate(dm).empty(); }

Fan ambient_fan(const DefiningMatrix& dm) {
  assert(is_valid(dm));
  int r = dm.r();
  Fan fan;
  fan.dim = r + 1;
  fan.rays = assemble(dm);
  auto add = [&](std::vector<int> cone) {
    std::sort(cone.begin(), cone.end());
    fan.max_cones.push_back(std::move(cone));
  };
  // source boundary
  if (!dm.has_vplus()) {
    std::vector<int> c;
    for (int i = 0; i <= r; ++i) c.push_back(dm_col_index(dm, i, 1));
    add(c);
  } else {
    for (int i = 0; i <= r; ++i) add({dm_vplus_index(dm), dm_col_index(dm, i, 1)});
  }
  // interior
  for (int i = 0; i <= r; ++i)
    for (int j = 1; j < dm.block_size(i); ++j)
      add({dm_col_index(dm, i, j), dm_col_index(dm, i, j + 1)});
  // sink boundary
  if (!dm.has_vminus()) {
    std::vector<int> c;
    for (int i = 0; i <= r; ++i) c.push_back(dm_col_index(dm, i, dm.block_size(i)));
    add(c);
  } else {
    for (int i = 0; i <= r; ++i) add({dm_col_index(dm, i, dm.block_size(i)), dm_vminus_index(dm)});
  }
  return fan;
}

std::string FixedPoint::str() const {
  switch (kind) {
    case FixedPointKind::elliptic_plus: return "elliptic+";
    case FixedPointKind::elliptic_minus: return "elliptic-";
    case FixedPointKind::hyperbolic:
      return "hyperbolic(" + std::to_string(i) + "," + std::to_string(j) + ")";
    case FixedPointKind::parabolic_source: return "parabolic(" + std::to_string(i) + ",source)";
    case FixedPointKind::parabolic_sink: return "parabolic(" + std::to_string(i) + ",sink)";
  }
  return "?";
}

std::vector<FixedPoint> fixed_points(const DefiningMatrix& dm) {
  int r = dm.r();
  std::vector<FixedPoint> out;
  int cone = 0;
  if (!dm.has_vplus()) {
    out.push_back({FixedPointKind::elliptic_plus, -1, -1, cone++});
  } else {
    for (int i = 0; i <= r; ++i) out.push_back({FixedPointKind::parabolic_source, i, 0, cone++});
  }
  for (int i = 0; i <= r; ++i)
    for (int j = 1; j < dm.block_size(i); ++j)
      out.push_back({FixedPointKind::hyperbolic, i, j, cone++});
  if (!dm.has_vminus()) {
    out.push_back({FixedPointKind::elliptic_minus, -1, -1, cone++});
  } else {
    for (int i = 0; i <= r; ++i)
      out.push_back({FixedPointKind::parabolic_sink, i, dm.block_size(i), cone++});
  }
  return out;
}

DefiningMatrix random_defining_matrix(std::mt19937_64& rng) {
  auto rnd = [&](long long lo, long long hi) {
    return lo + (long long)(rng() % (unsigned long long)(hi - lo + 1));
  };
  for (int attempt = 0; attempt < 100000; ++attempt) {
    DefiningMatrix dm;
    dm.type = (DmType)rnd(0, 3);
    int r = (int)rnd(1, 3);
    dm.l.resize(r + 1);
    dm.d.resize(r + 1);
    bool ok = true;
    for (int i = 0; i <= r && ok; ++i) {
      int ni = (int)rnd(1, 3);
      // distinct slopes d/l, sorted strictly decreasing
      std::vector<std::pair<Int, Int>> entries;  // (l, d)
      std::set<std::pair<long long, long long>> slopes_seen;
      for (int j = 0; j < ni; ++j) {
        bool placed = false;
        for (int tries = 0; tries < 60 && !placed; ++tries) {
          long long lv = rnd(1, 7), dv = rnd(-9, 9);
          if (igcd(Int((long)lv), Int((long)dv)) != 1) continue;
          // slope key in lowest terms for distinctness
          long long sg = std::gcd(std::abs(dv), lv);
          if (sg == 0) sg = 1;
          if (!slopes_seen.insert({dv / sg, lv / sg}).second) continue;
          entries.push_back({Int((long)lv), Int((long)dv)});
          placed = true;
        }
        if (!placed) ok = false;
      }
      if (!ok) break;
      std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.second * b.first > b.second * a.first;  // d/l descending
      });
      for (auto& e : entries) {
        dm.l[i].push_back(e.first);
        dm.d[i].push_back(e.second);
      }
    }
    if (!ok) continue;
    if (is_valid(dm)) return dm;
  }
  assert(false && "failed to sample a valid defining matrix");
  return DefiningMatrix{};
}

}  // namespace kstarpic
