#pragma once

// Classification of log del Pezzo surfaces of Picard number one with torus
// action by Picard index: the toric (fake weighted projective plane) stream
// and the non-toric complexity-one stream, with canonical-form
// deduplication, certification, and census aggregation.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kstarpic/defmat.hpp"
#include "kstarpic/exactlin.hpp"

namespace kstarpic {

// One toric class: a fake weighted projective plane, presented by a 2x3
// generator matrix in normal form together with its classifying data.
struct FwppRecord {
  long long iota = 0;                    // Picard index
  long long n = 0;                       // unipotent order parameter
  std::array<long long, 3> w{};          // well-formed weights, descending
  long long x = 0;                       // normal-form off-diagonal entry
  IntMatrix P;                           // 2 x 3 ray matrix
  std::array<long long, 3> local_orders{};
  std::string key;                       // canonical isomorphism key
};

// All isomorphism classes of fake weighted projective planes with Picard
// index exactly iota, deterministically ordered.
std::vector<FwppRecord> classify_fwpp(long long iota);

// One non-toric class, named by its singularity-type case label.
struct NontoricRecord {
  long long iota = 0;
  std::string case_label;  // eAeA, eAeD, eAeE, eDeD, eDeE, eEeE, eDp, eEp
  DefiningMatrix dm;
  Int lambda;                    // gcd of the maximal minors of the matrix
  std::vector<Int> weights;      // positive primitive relation of the columns
  std::vector<Int> local_orders; // per ambient-fan cone
  std::string key;               // canonical isomorphism key
};

// All non-toric classes with Picard index exactly iota, deterministically
// ordered.  Every emitted record has been re-certified from scratch
// (validity, minor gcd, local data, product formula).
std::vector<NontoricRecord> classify_nontoric(long long iota);

extern const std::vector<std::string> kNontoricCaseLabels;

// Census row: per-index class counts.
struct CensusRow {
  long long iota = 0;
  long long toric = 0;
  std::map<std::string, long long> nontoric;  // by case label
  long long total() const;
};

struct CensusOptions {
  long long max_iota = 10;
  int threads = 1;
  bool toric = true;
  bool nontoric = true;
  std::vector<std::string> cases;  // empty = all case labels
  long long resume_from = 0;       // skip iota <= resume_from
  // Called in increasing iota order from the merge thread.
  std::function<void(const CensusRow&)> on_row;
  std::function<void(long long iota, const std::vector<FwppRecord>&,
                     const std::vector<NontoricRecord>&)> on_records;
};

// Run the census over 1..max_iota with a deterministic in-order merge; the
// callbacks see identical sequences regardless of thread count.
void run_census(const CensusOptions& opt);

// Canonical isomorphism key of a fake weighted projective plane generator
// matrix (2x3, primitive columns spanning a complete fan).
std::string fwpp_canonical_key(const IntMatrix& P);

// Canonical isomorphism key of a defining matrix: minimum over the
// admissible symmetries (source-sink orientation swap and block
// permutations) of the slide-normalized block data.
std::string dm_canonical_key(const DefiningMatrix& dm);

// Case label of an (ee) or (ep) defining matrix from its leading block data.
std::string dm_case_label(const DefiningMatrix& dm);

}  // namespace kstarpic
