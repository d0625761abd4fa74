#pragma once

#include <map>
#include <set>
#include <string>

#include "json.hpp"
#include "psadf/maxplus.hpp"
#include "psadf/model_io.hpp"
#include "psadf/optimize.hpp"
#include "psadf/symbolic.hpp"

namespace psadf {

// Every numeric leaf in report JSON is an exact "num/den" string; the decimal
// throughput rendering is informative only. Matrix entries use null for -inf.

nlohmann::json matrix_to_json(const maxplus::Matrix& m);
maxplus::Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json symbolic_matrix_to_json(const SymbolicMatrix& m);
// Entries are parsed back from canonical polynomial strings; factors listed
// in `durations` take the duration slot. The region is carried by the caller,
// not the JSON.
SymbolicMatrix symbolic_matrix_from_json(const nlohmann::json& j, const Region& region,
                                         const std::set<std::string>& durations);

// Full report for a parametric analysis.
nlohmann::json report_json(const ModelFile& m, const ThroughputAnalysis& an);

// Report for concrete models: per-scenario matrices (empty map for plain
// dataflow graphs), the combined matrix, and the cycle data.
nlohmann::json report_json(const ModelFile& m,
                           const std::map<std::string, maxplus::Matrix>& scenario_matrices,
                           const maxplus::Matrix& combined, const maxplus::Mpag& mpag,
                           const maxplus::CycleMean& cm, const Rational& throughput);

// Renders either report shape as readable text.
std::string report_text(const nlohmann::json& report);

// Row-labeled grid "t1: [a, -inf, ...]" shared by reports and command output.
std::string matrix_text(const maxplus::Matrix& m, const std::string& indent);
std::string matrix_text(const SymbolicMatrix& m, const std::string& indent);

}  // namespace psadf
