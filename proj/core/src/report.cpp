#include "pacsafe/report.hpp"

#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "pacsafe/errors.hpp"

namespace pacsafe {

std::string_view to_string(OracleSemantics semantics) {
  return semantics == OracleSemantics::AllSafe ? "all-safe" : "paper-literal";
}

OracleSemantics parse_semantics(std::string_view text) {
  if (text == "all-safe") return OracleSemantics::AllSafe;
  if (text == "paper-literal") return OracleSemantics::PaperLiteral;
  throw ValidationError("unknown oracle semantics '" + std::string(text) + "'");
}

namespace {

std::string fixed(double value, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

nlohmann::json big_json(const BigInt& value) {
  if (value >= 0 && value <= std::numeric_limits<std::uint64_t>::max()) return value.convert_to<std::uint64_t>();
  return value.str();
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "format_version", "example", "N",       "d",         "L",         "confidence",       "P_V",
      "P_L",            "P_exact", "x_S_exact", "x_S_formula", "h",  "seed",      "alphabet_size",    "M",
      "monomials",      "oracle_semantics", "clipped", "queries"};
  return columns;
}

std::string csv_header() {
  std::string line;
  for (const auto& c : csv_columns()) line += (line.empty() ? "" : ",") + c;
  return line + "\n";
}

std::string csv_row(const AnalysisReport& r) {
  const std::vector<std::string> cells = {
      std::to_string(r.format_version),
      r.model_name,
      std::to_string(r.n),
      r.x_s_used().str(),
      std::to_string(r.samples),
      fixed(r.confidence),
      fixed(r.p_v),
      fixed(r.p_l),
      r.p_exact ? fixed(*r.p_exact) : std::string(),
      r.x_s_exact ? r.x_s_exact->str() : std::string("upper-bound"),
      r.x_s_formula.str(),
      fixed(r.h),
      std::to_string(r.seed),
      std::to_string(r.alphabet_size),
      r.total_paths.str(),
      std::to_string(r.monomials),
      std::string(to_string(r.semantics)),
      r.clipped ? "1" : "0",
      std::to_string(r.total_queries),
  };
  std::string line;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k].find_first_of(",\n\"") != std::string::npos) {
      throw ValidationError("CSV cell contains a delimiter: '" + cells[k] + "'");
    }
    line += (k == 0 ? "" : ",") + cells[k];
  }
  return line + "\n";
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::string out = csv_header();
  for (const auto& row : rows) out += csv_row(row.report);
  return out;
}

std::vector<std::map<std::string, std::string>> parse_csv(std::string_view text) {
  auto split = [](std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };

  std::vector<std::map<std::string, std::string>> records;
  std::vector<std::string> header;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto cells = split(line);
    if (header.empty()) {
      header = std::move(cells);
      continue;
    }
    if (cells.size() != header.size()) throw ValidationError("ragged CSV row: '" + std::string(line) + "'");
    std::map<std::string, std::string> record;
    for (std::size_t k = 0; k < cells.size(); ++k) record[header[k]] = cells[k];
    records.push_back(std::move(record));
  }
  return records;
}

std::string report_json_line(const AnalysisReport& r) {
  nlohmann::json j;
  j["format_version"] = r.format_version;
  j["model"] = r.model_name;
  j["n"] = r.n;
  j["alphabet_size"] = r.alphabet_size;
  j["L"] = r.samples;
  j["x_S_formula"] = big_json(r.x_s_formula);
  j["x_S_exact"] = r.x_s_exact ? big_json(*r.x_s_exact) : nlohmann::json("upper-bound");
  j["M"] = big_json(r.total_paths);
  j["P_V"] = r.p_v;
  j["P_L"] = r.p_l;
  j["P_L_std_error"] = r.p_l_std_error;
  j["P_exact"] = r.p_exact ? nlohmann::json(*r.p_exact) : nlohmann::json(nullptr);
  j["exact_safe_paths"] = r.exact_safe_paths ? big_json(*r.exact_safe_paths) : nlohmann::json(nullptr);
  j["h"] = r.h;
  j["confidence"] = r.confidence;
  j["clipped"] = r.clipped;
  j["seed"] = r.seed;
  j["oracle_semantics"] = std::string(to_string(r.semantics));
  j["monomials"] = r.monomials;
  j["iterations"] = r.iterations;
  j["target_confidence"] = r.target_confidence ? nlohmann::json(*r.target_confidence) : nlohmann::json(nullptr);
  j["target_met"] = r.target_met;
  j["queries"] = r.total_queries;
  j["stats"] = {
      {"examples_drawn", r.stats.examples_drawn},
      {"examples_skipped_implied", r.stats.examples_skipped_implied},
      {"monomials_added", r.stats.monomials_added},
      {"sample_attempts", r.stats.sample_attempts},
      {"oracle_calls", r.stats.oracle_calls},
      {"oracle_sequence_queries", r.stats.oracle_sequence_queries},
      {"oracle_cap_hits", r.stats.oracle_cap_hits},
      {"wall_time_s", r.stats.wall_time.count()},
  };
  return j.dump();
}

}  // namespace pacsafe
