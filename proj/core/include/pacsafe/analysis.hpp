#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pacsafe/bigint.hpp"
#include "pacsafe/learner.hpp"
#include "pacsafe/mealy.hpp"
#include "pacsafe/sul.hpp"

namespace pacsafe {

inline constexpr int kReportFormatVersion = 1;
inline constexpr std::size_t kMaxConfidenceIterations = 8;

struct AnalyzeOptions {
  std::string model_name = "model";
  std::size_t horizon = 1;
  /// Budget mode: L. In target mode without a d bound this is the first L
  /// of the doubling schedule (default 1000).
  std::optional<std::uint64_t> samples;
  std::optional<double> target_confidence;
  /// Upper bound on x_S for sizing L before learning.
  std::optional<BigInt> d_bound;
  std::uint64_t seed = 0;
  OracleSemantics semantics = OracleSemantics::AllSafe;
  std::uint64_t oracle_cap = kDefaultOracleCap;
  std::size_t max_sample_attempts = 100'000;
  std::uint64_t count_node_cap = 50'000'000;
  std::function<void(std::string_view)> log;

  void validate() const;
};

struct AnalysisReport {
  int format_version = kReportFormatVersion;
  std::string model_name;
  std::size_t n = 0;
  std::size_t alphabet_size = 0;
  std::uint64_t samples = 0;
  BigInt x_s_formula = 0;
  /// Empty when the union count hit its cap; x_s_formula is then an upper bound.
  std::optional<BigInt> x_s_exact;
  /// M = |I|^n
  BigInt total_paths = 0;
  /// P_V was clipped to 1 because only the over-counting formula was available.
  bool clipped = false;
  double p_v = 0.0;
  double p_l = 0.0;
  double p_l_std_error = 0.0;
  std::optional<BigInt> exact_safe_paths;
  std::optional<double> p_exact;
  double h = 0.0;
  double confidence = 0.0;
  std::uint64_t seed = 0;
  OracleSemantics semantics = OracleSemantics::AllSafe;
  std::size_t monomials = 0;
  LearnerStats stats;
  std::uint64_t total_queries = 0;
  std::size_t iterations = 1;
  std::optional<double> target_confidence;
  bool target_met = true;

  /// The count behind P_V and the confidence.
  BigInt x_s_used() const;
};

/// Learns, counts, solves the confidence and runs the Monte Carlo baseline.
/// `white_box`, when given, adds the exact probability.
AnalysisReport analyze(SystemUnderLearning& sul, const MealyMachine* white_box, const AnalyzeOptions& options);

struct SystemSource {
  std::optional<std::filesystem::path> model;
  std::optional<BlackBoxConfig> black_box;
};

AnalysisReport analyze(const SystemSource& source, const AnalyzeOptions& options);

/// L for a chosen h and a bound d on the number of safe paths.
std::uint64_t sample_size(double h, const BigInt& d);

// ---------------------------------------------------------------------------
// Reproduction of the published result table

struct PublishedRow {
  std::string example;  // "wto ALKS" or "ALKS"
  std::size_t n;
  std::uint64_t d;
  std::uint64_t samples;
  double confidence;
  double p_v;
  double p_l;
};

const std::vector<PublishedRow>& published_rows();

struct TableRow {
  std::string example;
  std::string model;
  AnalysisReport report;
};

/// All published rows at the given budget; rows run concurrently, each on
/// its own adapter with a seed derived from `master_seed` and the row label.
std::vector<TableRow> reproduce_table(std::uint64_t master_seed, std::uint64_t samples = 1000);

struct CellCheck {
  std::string example;
  std::size_t n = 0;
  std::string column;
  double ours = 0.0;
  double published = 0.0;
  /// Empty for cells reported for information only.
  std::optional<double> tolerance;

  bool ok() const;
};

std::vector<CellCheck> compare_with_published(const std::vector<TableRow>& rows);

}  // namespace pacsafe
