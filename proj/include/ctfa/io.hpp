#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ctfa/corr.hpp"
#include "ctfa/estimate.hpp"
#include "ctfa/pipeline.hpp"
#include "ctfa/simgen.hpp"
#include "ctfa/structure.hpp"

namespace ctfa {

struct CsvTable {
    std::vector<std::string> header;  // empty when the file has none
    Matrix values;
};

/// Comma-separated numbers with '.' decimals. The first row is a header iff
/// any of its fields fails to parse as a number. Throws ParseError.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::string& path);

void write_csv(std::ostream& out, const Matrix& values, const std::vector<std::string>& header = {});

/// Square numeric CSV interpreted as a correlation matrix.
CorrelationMatrix read_correlation_csv(const std::string& path,
                                       CorrelationKind kind = CorrelationKind::Sample);

using json = nlohmann::json;

// 0-based indices everywhere.
json to_json(const FactorStructure& s);
FactorStructure structure_from_json(const json& j);
json to_json(const FactorParams& theta);
json to_json(const FitResult& fit);
json to_json(const CandidateRecord& record);
json to_json(const CtResult& result);
json to_json(const SimConfig& cfg);
SimConfig sim_config_from_json(const json& j);

}  // namespace ctfa
