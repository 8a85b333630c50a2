#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "kstarpic/classify.hpp"
#include "kstarpic/defmat.hpp"
#include "kstarpic/exactlin.hpp"
#include "kstarpic/io.hpp"
#include "kstarpic/kstarindex.hpp"
#include "kstarpic/selftest.hpp"
#include "kstarpic/toricpic.hpp"

namespace {

using namespace kstarpic;

// Input problems (unreadable files, malformed JSON, invalid data) exit 2;
// internal invariant failures exit 1; success exits 0.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("JSON parse error in " + path + ": " + e.what());
  }
}

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open output file: " + out_path);
  out << text;
}

nlohmann::json minor_sets_to_json(const MinorSets& ms) {
  auto arr = [](const std::vector<Int>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const Int& x : v) a.push_back(int_to_json(x));
    return a;
  };
  nlohmann::json j;
  j["matrix_minors"] = arr(ms.M_P);
  j["matrix_minors_closed_form"] = arr(ms.M_prime_P);
  if (!ms.M_Phat.empty()) j["comparison_minors"] = arr(ms.M_Phat);
  if (!ms.M_red_Phat.empty()) j["comparison_minors_reduced"] = arr(ms.M_red_Phat);
  j["enumeration_skipped"] = ms.M_Phat.empty();
  j["gcd"] = int_to_json(ms.gcd_value);
  return j;
}

int cmd_analyze(const std::string& in_path, const std::string& out_path) {
  DefiningMatrix dm = dm_from_json(load_json(in_path));
  auto violations = validate(dm);
  if (!violations.empty()) {
    std::cerr << "invalid defining matrix:\n";
    for (const auto& v : violations) std::cerr << "  - " << v << "\n";
    return 2;
  }
  Fan fan = ambient_fan(dm);
  PicardData direct = picard_direct(fan);
  PicardData hat = picard_via_hat(fan);
  Int formula = picard_index_product_formula(dm);
  if (direct.pic_index != hat.pic_index || !(direct.khat == hat.khat) ||
      formula != direct.pic_index) {
    std::cerr << "internal invariant failure: Picard index routes disagree on input "
              << dm_to_json(dm).dump() << "\n";
    return 1;
  }
  MinorSets ms = minor_sets(dm);

  nlohmann::json j;
  j["input"] = dm_to_json(dm);
  j["matrix"] = matrix_to_json(assemble(dm));
  j["fan"] = fan_to_json(fan);
  nlohmann::json fps = nlohmann::json::array();
  for (const auto& fp : fixed_points(dm)) fps.push_back(fp.str());
  j["fixed_points"] = std::move(fps);
  j["picard"] = picard_to_json(direct);
  j["picard_index"] = int_to_json(direct.pic_index);
  j["picard_index_product_formula"] = int_to_json(formula);
  j["minor_sets"] = minor_sets_to_json(ms);
  write_text(out_path, j.dump(2) + "\n");
  return 0;
}

int cmd_toric(const std::string& in_path, const std::string& out_path) {
  Fan fan = fan_from_json(load_json(in_path));
  PicardData direct, hat;
  try {
    direct = picard_direct(fan);
    hat = picard_via_hat(fan);
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    if (msg.rfind("fan:", 0) == 0 || msg.rfind("picard: infinite", 0) == 0) {
      std::cerr << "invalid fan: " << msg << "\n";
      return 2;
    }
    throw;
  }
  if (direct.pic_index != hat.pic_index || !(direct.khat == hat.khat)) {
    std::cerr << "internal invariant failure: Picard index routes disagree on input "
              << fan_to_json(fan).dump() << "\n";
    return 1;
  }
  nlohmann::json j;
  j["fan"] = fan_to_json(fan);
  j["picard"] = picard_to_json(direct);
  j["routes_agree"] = true;
  write_text(out_path, j.dump(2) + "\n");
  return 0;
}

// ---- classification stream runner with CSV resume support ----

struct StreamState {
  long long completed = 0;
  long long cumulative = 0;
  std::uint64_t offset = 0;
};

std::string state_path(const std::string& out) { return out + ".state"; }

bool load_state(const std::string& out, StreamState& st) {
  std::ifstream in(state_path(out));
  if (!in) return false;
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    st.completed = j.at("completed").get<long long>();
    st.cumulative = j.value("cumulative", 0LL);
    st.offset = j.at("offset").get<std::uint64_t>();
    return true;
  } catch (const nlohmann::json::exception&) {
    return false;
  }
}

void save_state(const std::string& out, const StreamState& st) {
  nlohmann::json j;
  j["completed"] = st.completed;
  j["cumulative"] = st.cumulative;
  j["offset"] = st.offset;
  std::string tmp = state_path(out) + ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    o << j.dump() << "\n";
  }
  std::filesystem::rename(tmp, state_path(out));
}

enum class StreamKind { toric, nontoric, census };

int run_stream(StreamKind kind, long long max_iota, int threads, const std::string& out,
               const std::string& format, bool resume,
               const std::vector<std::string>& cases) {
  if (format != "csv" && format != "json")
    throw InputError("unsupported format (expected csv or json): " + format);
  if (resume && out.empty()) throw InputError("--resume requires --out");
  if (resume && format != "csv") throw InputError("--resume requires --format csv");
  for (const auto& c : cases)
    if (std::find(kNontoricCaseLabels.begin(), kNontoricCaseLabels.end(), c) ==
        kNontoricCaseLabels.end())
      throw InputError("unknown case label: " + c);

  std::vector<std::string> case_cols =
      cases.empty() ? kNontoricCaseLabels : [&] {
        std::vector<std::string> v;
        for (const auto& c : kNontoricCaseLabels)
          if (std::find(cases.begin(), cases.end(), c) != cases.end()) v.push_back(c);
        return v;
      }();

  StreamState st;
  bool resuming = false;
  if (resume && load_state(out, st) && std::filesystem::exists(out)) {
    std::filesystem::resize_file(out, st.offset);
    resuming = true;
    if (st.completed >= max_iota) {
      log_msg(1, "nothing to resume: already completed through " +
                     std::to_string(st.completed));
      return 0;
    }
  } else {
    st = StreamState{};
  }

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out.empty() && format == "csv") {
    file.open(out, std::ios::binary | (resuming ? std::ios::app : std::ios::trunc));
    if (!file) throw InputError("cannot open output file: " + out);
    os = &file;
  }

  const bool with_toric = kind != StreamKind::nontoric;
  const bool with_nontoric = kind != StreamKind::toric;
  nlohmann::json json_records = nlohmann::json::array();

  if (format == "csv" && !resuming) {
    switch (kind) {
      case StreamKind::toric: *os << fwpp_csv_header() << "\n"; break;
      case StreamKind::nontoric: *os << nontoric_csv_header() << "\n"; break;
      case StreamKind::census: *os << census_csv_header(case_cols, true) << "\n"; break;
    }
  }

  CensusOptions opt;
  opt.max_iota = max_iota;
  opt.threads = threads;
  opt.toric = with_toric;
  opt.nontoric = with_nontoric;
  opt.cases = cases;
  opt.resume_from = resuming ? st.completed : 0;
  opt.on_row = [&](const CensusRow& row) {
    if (kind != StreamKind::census) return;
    long long total = row.toric;
    for (const auto& c : case_cols) {
      auto it = row.nontoric.find(c);
      total += it == row.nontoric.end() ? 0 : it->second;
    }
    st.cumulative += total;
    if (format == "csv") {
      *os << census_csv_row(row, case_cols, true, st.cumulative) << "\n";
    } else {
      nlohmann::json j;
      j["iota"] = row.iota;
      j["toric"] = row.toric;
      for (const auto& c : case_cols) j[c] = row.nontoric.at(c);
      j["total"] = total;
      j["cumulative_total"] = st.cumulative;
      json_records.push_back(std::move(j));
    }
  };
  opt.on_records = [&](long long iota, const std::vector<FwppRecord>& toric_recs,
                       const std::vector<NontoricRecord>& nontoric_recs) {
    if (kind == StreamKind::toric) {
      for (const auto& rec : toric_recs) {
        if (format == "csv") {
          *os << fwpp_csv_row(rec) << "\n";
        } else {
          nlohmann::json j;
          j["iota"] = rec.iota;
          j["n"] = rec.n;
          j["w"] = {rec.w[0], rec.w[1], rec.w[2]};
          j["x"] = rec.x;
          j["matrix"] = matrix_to_json(rec.P);
          j["local_orders"] = {rec.local_orders[0], rec.local_orders[1],
                               rec.local_orders[2]};
          j["key"] = rec.key;
          json_records.push_back(std::move(j));
        }
      }
    } else if (kind == StreamKind::nontoric) {
      for (const auto& rec : nontoric_recs) {
        if (format == "csv") {
          *os << nontoric_csv_row(rec) << "\n";
        } else {
          nlohmann::json j;
          j["iota"] = rec.iota;
          j["case"] = rec.case_label;
          j["defining_matrix"] = dm_to_json(rec.dm);
          j["lambda"] = int_to_json(rec.lambda);
          nlohmann::json w = nlohmann::json::array(), lo = nlohmann::json::array();
          for (const Int& v : rec.weights) w.push_back(int_to_json(v));
          for (const Int& v : rec.local_orders) lo.push_back(int_to_json(v));
          j["weights"] = std::move(w);
          j["local_orders"] = std::move(lo);
          j["key"] = rec.key;
          json_records.push_back(std::move(j));
        }
      }
    }
    os->flush();
    if (!out.empty() && format == "csv") {
      st.completed = iota;
      st.offset = (std::uint64_t)file.tellp();
      save_state(out, st);
    }
    if (log_level() >= 1 && iota % 100 == 0)
      log_msg(1, "completed index " + std::to_string(iota));
  };

  run_census(opt);
  if (format == "json") write_text(out, json_records.dump(2) + "\n");
  return 0;
}

int cmd_verify(std::uint64_t seed, int count) {
  std::vector<std::string> failures;
  struct Suite {
    const char* name;
    bool ok;
  };
  std::vector<Suite> suites;
  int dm_cases = count >= 5 ? count / 5 : 1;
  suites.push_back({"integer linear algebra", selftest_exactlin(seed, count, failures)});
  suites.push_back(
      {"defining matrices", selftest_defining_matrices(seed + 1, dm_cases, failures)});
  suites.push_back({"surface fans", selftest_fans2d(seed + 2, dm_cases, failures)});
  bool all_ok = true;
  for (const auto& s : suites) {
    std::cout << (s.ok ? "PASS" : "FAIL") << "  " << s.name << "\n";
    all_ok = all_ok && s.ok;
  }
  if (!all_ok) {
    std::cerr << "failures:\n";
    for (const auto& f : failures) std::cerr << "  - " << f << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Divisor class groups, Picard groups and Picard indices of rational "
      "projective surfaces with torus action, with classification by Picard "
      "index"};
  app.require_subcommand(1);

  std::string in_path, out_path, format = "csv";
  long long max_index = 10;
  int threads = 1;
  bool resume = false;
  std::vector<std::string> cases;
  std::uint64_t seed = 20260822ULL;
  int count = 1000;

  auto* analyze = app.add_subcommand(
      "analyze", "Analyze a defining matrix (JSON file) and report all invariants");
  analyze->add_option("input", in_path, "defining matrix JSON file")->required();
  analyze->add_option("--out", out_path, "output file (default stdout)");

  auto* toric = app.add_subcommand(
      "toric", "Analyze a toric variety given by a fan (JSON file)");
  toric->add_option("input", in_path, "fan JSON file")->required();
  toric->add_option("--out", out_path, "output file (default stdout)");

  auto add_stream_flags = [&](CLI::App* c, bool with_cases) {
    c->add_option("--max-index", max_index, "largest Picard index to classify")
        ->required();
    c->add_option("--out", out_path, "output file (default stdout)");
    c->add_option("--format", format, "csv or json (default csv)");
    c->add_option("--threads", threads, "worker threads (default 1)");
    c->add_flag("--resume", resume, "resume an interrupted run (needs --out, csv)");
    if (with_cases)
      c->add_option("--cases", cases, "restrict to these case labels")->delimiter(',');
  };
  auto* ctoric = app.add_subcommand(
      "classify-toric", "Classify toric classes (fake weighted projective planes)");
  add_stream_flags(ctoric, false);
  auto* cnon = app.add_subcommand("classify-nontoric",
                                  "Classify non-toric classes by singularity case");
  add_stream_flags(cnon, true);
  auto* census = app.add_subcommand(
      "census", "Count all classes per Picard index (toric and non-toric)");
  add_stream_flags(census, true);

  auto* verify = app.add_subcommand(
      "verify", "Run the randomized property suites and report pass/fail");
  verify->add_option("--count", count, "cases for the core suite (default 1000)");
  verify->add_option("--seed", seed, "base random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(in_path, out_path);
    if (app.got_subcommand(toric)) return cmd_toric(in_path, out_path);
    if (app.got_subcommand(ctoric))
      return run_stream(StreamKind::toric, max_index, threads, out_path, format, resume,
                        {});
    if (app.got_subcommand(cnon))
      return run_stream(StreamKind::nontoric, max_index, threads, out_path, format,
                        resume, cases);
    if (app.got_subcommand(census))
      return run_stream(StreamKind::census, max_index, threads, out_path, format, resume,
                        cases);
    if (app.got_subcommand(verify)) return cmd_verify(seed, count);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal invariant failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
