#pragma once

// Serialization: JSON input/output for defining matrices, fans, and
// analysis reports; CSV output for classification streams; logging.

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

#include "kstarpic/classify.hpp"
#include "kstarpic/defmat.hpp"
#include "kstarpic/exactlin.hpp"
#include "kstarpic/kstarindex.hpp"
#include "kstarpic/toricpic.hpp"

namespace kstarpic {

// Integers are emitted as JSON numbers while they fit safely into a double
// (|v| < 2^53) and as decimal strings beyond that; both forms are accepted
// on input.
nlohmann::json int_to_json(const Int& v);
Int int_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const IntMatrix& A);
IntMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json dm_to_json(const DefiningMatrix& dm);
DefiningMatrix dm_from_json(const nlohmann::json& j);

nlohmann::json fan_to_json(const Fan& fan);
Fan fan_from_json(const nlohmann::json& j);

nlohmann::json group_to_json(const AbelianGroup& g);
nlohmann::json picard_to_json(const PicardData& p);

// CSV rows; all writers emit LF line endings and no trailing separators.
std::string fwpp_csv_header();
std::string fwpp_csv_row(const FwppRecord& rec);
std::string nontoric_csv_header();
std::string nontoric_csv_row(const NontoricRecord& rec);
std::string census_csv_header(const std::vector<std::string>& cases, bool with_toric);
std::string census_csv_row(const CensusRow& row, const std::vector<std::string>& cases,
                           bool with_toric, long long cumulative);

// Leveled logging to stderr, controlled by the KSTAR_LOG environment
// variable: 0 = silent (default), 1 = progress, 2 = debug.
int log_level();
void log_msg(int level, const std::string& msg);

}  // namespace kstarpic
