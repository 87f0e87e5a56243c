#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pacsafe/analysis.hpp"

namespace pacsafe {

std::string_view to_string(OracleSemantics semantics);
OracleSemantics parse_semantics(std::string_view text);

/// Column order of every CSV this library writes.
const std::vector<std::string>& csv_columns();

std::string csv_header();
std::string csv_row(const AnalysisReport& report);
std::string table_csv(const std::vector<TableRow>& rows);

/// Header-keyed records; throws ValidationError on ragged rows.
std::vector<std::map<std::string, std::string>> parse_csv(std::string_view text);

/// One JSON object on a single line.
std::string report_json_line(const AnalysisReport& report);

}  // namespace pacsafe
