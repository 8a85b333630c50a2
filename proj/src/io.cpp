#include "kstarpic/io.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace kstarpic {

namespace {

const long long kSafeMax = (1LL << 53) - 1;

std::string join_ints(const std::vector<Int>& v, char sep) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << sep;
    os << v[i].get_str();
  }
  return os.str();
}

std::string join_ll(const long long* v, size_t k, char sep) {
  std::ostringstream os;
  for (size_t i = 0; i < k; ++i) {
    if (i) os << sep;
    os << v[i];
  }
  return os.str();
}

std::string matrix_csv_field(const IntMatrix& A) {
  std::ostringstream os;
  for (int i = 0; i < A.rows; ++i) {
    if (i) os << ";";
    for (int j = 0; j < A.cols; ++j) {
      if (j) os << "_";
      os << A.at(i, j).get_str();
    }
  }
  return os.str();
}

}  // namespace

nlohmann::json int_to_json(const Int& v) {
  if (v.fits_slong_p()) {
    long long x = v.get_si();
    if (x <= kSafeMax && x >= -kSafeMax) return nlohmann::json(x);
  }
  return nlohmann::json(v.get_str());
}

Int int_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Int((long)j.get<long long>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw std::runtime_error("expected an integer or decimal string, got: " + j.dump());
}

nlohmann::json matrix_to_json(const IntMatrix& A) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < A.rows; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < A.cols; ++j) row.push_back(int_to_json(A.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

IntMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::runtime_error("matrix must be an array of rows");
  int r = (int)j.size();
  int c = r ? (int)j.at(0).size() : 0;
  IntMatrix A(r, c);
  for (int i = 0; i < r; ++i) {
    if (!j.at(i).is_array() || (int)j.at(i).size() != c)
      throw std::runtime_error("matrix rows must be arrays of equal length");
    for (int k = 0; k < c; ++k) A.at(i, k) = int_from_json(j.at(i).at(k));
  }
  return A;
}

nlohmann::json dm_to_json(const DefiningMatrix& dm) {
  nlohmann::json j;
  j["type"] = dm_type_name(dm.type);
  nlohmann::json l = nlohmann::json::array(), d = nlohmann::json::array();
  for (size_t i = 0; i < dm.l.size(); ++i) {
    nlohmann::json li = nlohmann::json::array(), di = nlohmann::json::array();
    for (const Int& v : dm.l[i]) li.push_back(int_to_json(v));
    for (const Int& v : dm.d[i]) di.push_back(int_to_json(v));
    l.push_back(std::move(li));
    d.push_back(std::move(di));
  }
  j["l"] = std::move(l);
  j["d"] = std::move(d);
  return j;
}

DefiningMatrix dm_from_json(const nlohmann::json& j) {
  DefiningMatrix dm;
  if (!j.is_object() || !j.contains("type") || !j.contains("l") || !j.contains("d"))
    throw std::runtime_error("defining matrix needs fields: type, l, d");
  if (!dm_type_from_name(j.at("type").get<std::string>(), dm.type))
    throw std::runtime_error("unknown type (expected ee, pe, ep or pp): " +
                             j.at("type").get<std::string>());
  const auto& l = j.at("l");
  const auto& d = j.at("d");
  if (!l.is_array() || !d.is_array() || l.size() != d.size() || l.empty())
    throw std::runtime_error("fields l and d must be equal-length arrays of blocks");
  for (size_t i = 0; i < l.size(); ++i) {
    if (!l.at(i).is_array() || !d.at(i).is_array() || l.at(i).size() != d.at(i).size())
      throw std::runtime_error("block " + std::to_string(i) + ": l and d lengths differ");
    std::vector<Int> li, di;
    for (const auto& v : l.at(i)) li.push_back(int_from_json(v));
    for (const auto& v : d.at(i)) di.push_back(int_from_json(v));
    dm.l.push_back(std::move(li));
    dm.d.push_back(std::move(di));
  }
  return dm;
}

nlohmann::json fan_to_json(const Fan& fan) {
  nlohmann::json j;
  j["dim"] = fan.dim;
  nlohmann::json rays = nlohmann::json::array();
  for (int c = 0; c < fan.rays.cols; ++c) {
    nlohmann::json ray = nlohmann::json::array();
    for (int i = 0; i < fan.rays.rows; ++i) ray.push_back(int_to_json(fan.rays.at(i, c)));
    rays.push_back(std::move(ray));
  }
  j["rays"] = std::move(rays);
  j["max_cones"] = fan.max_cones;
  return j;
}

Fan fan_from_json(const nlohmann::json& j) {
  Fan fan;
  if (!j.is_object() || !j.contains("rays") || !j.contains("max_cones"))
    throw std::runtime_error("fan needs fields: rays, max_cones");
  const auto& rays = j.at("rays");
  if (!rays.is_array() || rays.empty())
    throw std::runtime_error("field rays must be a nonempty array of lattice vectors");
  int dim = (int)rays.at(0).size();
  if (j.contains("dim")) dim = j.at("dim").get<int>();
  fan.dim = dim;
  fan.rays = IntMatrix(dim, (int)rays.size());
  for (int c = 0; c < (int)rays.size(); ++c) {
    if (!rays.at(c).is_array() || (int)rays.at(c).size() != dim)
      throw std::runtime_error("ray " + std::to_string(c) + " must have " +
                               std::to_string(dim) + " coordinates");
    for (int i = 0; i < dim; ++i) fan.rays.at(i, c) = int_from_json(rays.at(c).at(i));
  }
  for (const auto& cone : j.at("max_cones")) {
    std::vector<int> idx;
    for (const auto& v : cone) {
      int k = v.get<int>();
      if (k < 0 || k >= fan.rays.cols)
        throw std::runtime_error("cone ray index out of range: " + std::to_string(k));
      idx.push_back(k);
    }
    std::sort(idx.begin(), idx.end());
    fan.max_cones.push_back(std::move(idx));
  }
  if (fan.max_cones.empty()) throw std::runtime_error("fan has no maximal cones");
  return fan;
}

nlohmann::json group_to_json(const AbelianGroup& g) {
  nlohmann::json j;
  j["rank"] = g.rank;
  nlohmann::json t = nlohmann::json::array();
  for (const Int& v : g.torsion) t.push_back(int_to_json(v));
  j["torsion"] = std::move(t);
  j["name"] = g.str();
  return j;
}

nlohmann::json picard_to_json(const PicardData& p) {
  nlohmann::json j;
  j["class_group"] = group_to_json(p.class_group);
  nlohmann::json locals = nlohmann::json::array();
  for (const LocalChart& ch : p.local) {
    nlohmann::json lc;
    lc["cone"] = ch.cone;
    lc["group"] = group_to_json(ch.group);
    lc["order"] = int_to_json(ch.order());
    lc["simplicial"] = ch.simplicial;
    locals.push_back(std::move(lc));
  }
  j["local_class_groups"] = std::move(locals);
  j["local_order_product"] = int_to_json(p.local_order_product);
  j["comparison_quotient"] = group_to_json(p.khat);
  j["picard_index"] = int_to_json(p.pic_index);
  j["picard_rank"] = p.pic_rank;
  j["picard_torsion_free"] = p.pic_torsion_free;
  j["chart_sum_surjective"] = p.alpha_surjective;
  j["picard_group"] = group_to_json(p.pic_group);
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : p.pic_generators) {
    nlohmann::json gv = nlohmann::json::array();
    for (const Int& v : g) gv.push_back(int_to_json(v));
    gens.push_back(std::move(gv));
  }
  j["picard_generators"] = std::move(gens);
  j["picard_subgroup_hnf"] = matrix_to_json(p.pic_subgroup_hnf);
  return j;
}

std::string fwpp_csv_header() { return "iota,n,w0,w1,w2,x,local_orders,matrix,key"; }

std::string fwpp_csv_row(const FwppRecord& rec) {
  std::ostringstream os;
  os << rec.iota << "," << rec.n << "," << rec.w[0] << "," << rec.w[1] << "," << rec.w[2]
     << "," << rec.x << "," << join_ll(rec.local_orders.data(), 3, '_') << ","
     << matrix_csv_field(rec.P) << "," << rec.key;
  return os.str();
}

std::string nontoric_csv_header() {
  return "iota,case,type,r,l_blocks,d_blocks,lambda,weights,local_orders,key";
}

std::string nontoric_csv_row(const NontoricRecord& rec) {
  std::ostringstream os;
  os << rec.iota << "," << rec.case_label << "," << dm_type_name(rec.dm.type) << ","
     << rec.dm.r() << ",";
  for (size_t i = 0; i < rec.dm.l.size(); ++i)
    os << (i ? ";" : "") << join_ints(rec.dm.l[i], '_');
  os << ",";
  for (size_t i = 0; i < rec.dm.d.size(); ++i)
    os << (i ? ";" : "") << join_ints(rec.dm.d[i], '_');
  os << "," << rec.lambda.get_str() << "," << join_ints(rec.weights, '_') << ","
     << join_ints(rec.local_orders, '_') << "," << rec.key;
  return os.str();
}

std::string census_csv_header(const std::vector<std::string>& cases, bool with_toric) {
  std::ostringstream os;
  os << "iota";
  if (with_toric) os << ",toric";
  for (const auto& c : cases) os << "," << c;
  os << ",total,cumulative_total";
  return os.str();
}

std::string census_csv_row(const CensusRow& row, const std::vector<std::string>& cases,
                           bool with_toric, long long cumulative) {
  std::ostringstream os;
  os << row.iota;
  long long total = 0;
  if (with_toric) {
    os << "," << row.toric;
    total += row.toric;
  }
  for (const auto& c : cases) {
    auto it = row.nontoric.find(c);
    long long v = it == row.nontoric.end() ? 0 : it->second;
    os << "," << v;
    total += v;
  }
  os << "," << total << "," << cumulative;
  return os.str();
}

int log_level() {
  static int lvl = [] {
    const char* env = std::getenv("KSTAR_LOG");
    if (!env) return 0;
    int v = std::atoi(env);
    return v < 0 ? 0 : (v > 2 ? 2 : v);
  }();
  return lvl;
}

void log_msg(int level, const std::string& msg) {
  if (log_level() >= level) std::cerr << "[kstarpic] " << msg << "\n";
}

}  // namespace kstarpic
