#include "pacsafe/analysis.hpp"

#include <cmath>
#include <future>

#include "pacsafe/bounds.hpp"
#include "pacsafe/errors.hpp"
#include "pacsafe/models.hpp"
#include "pacsafe/oracles.hpp"

namespace pacsafe {

void AnalyzeOptions::validate() const {
  if (horizon < 1) throw ValidationError("horizon n must be at least 1");
  if (samples && *samples < 1) throw ValidationError("sample budget L must be at least 1");
  if (!samples && !target_confidence) throw ValidationError("give either a sample budget L or a target confidence");
  if (target_confidence && !(*target_confidence > 0.0 && *target_confidence < 1.0)) {
    throw ValidationError("target confidence must lie in (0, 1)");
  }
  if (d_bound && !target_confidence) throw ValidationError("a d bound is only used with a target confidence");
  if (d_bound && *d_bound < 0) throw ValidationError("d bound must be non-negative");
}

BigInt AnalysisReport::x_s_used() const {
  if (x_s_exact) return *x_s_exact;
  return x_s_formula < total_paths ? x_s_formula : total_paths;
}

namespace {

struct LearnedRun {
  std::uint64_t samples;
  LearnResult learned;
  BigInt formula;
  std::optional<BigInt> exact;
  PacParams pac;
};

LearnedRun learn_once(SystemUnderLearning& sul, const AnalyzeOptions& options, std::uint64_t samples,
                      std::uint64_t seed) {
  LearnerConfig cfg;
  cfg.horizon = options.horizon;
  cfg.sample_budget = samples;
  cfg.max_sample_attempts = options.max_sample_attempts;
  cfg.seed = seed;
  cfg.semantics = options.semantics;
  cfg.oracle_cap = options.oracle_cap;
  cfg.log = options.log;

  LearnedRun run{samples, learn_safe_set(sul, cfg), 0, std::nullopt, {}};
  const std::size_t alphabet_size = sul.input_alphabet().size();
  run.formula = count_formula(run.learned.g, alphabet_size);
  try {
    run.exact = count_exact(run.learned.g, alphabet_size, options.count_node_cap);
  } catch (const ResourceError& e) {
    if (options.log) options.log(std::string("warning: ") + e.what() + "; falling back to the formula count");
  }
  BigInt total = ipow(alphabet_size, options.horizon);
  BigInt used = run.exact ? *run.exact : (run.formula < total ? run.formula : total);
  run.pac = solve_h(samples, used);
  return run;
}

}  // namespace

AnalysisReport analyze(SystemUnderLearning& sul, const MealyMachine* white_box, const AnalyzeOptions& options) {
  options.validate();
  const std::size_t alphabet_size = sul.input_alphabet().size();
  const std::uint64_t queries_before = sul.query_count();

  AnalysisReport report;
  report.model_name = options.model_name;
  report.n = options.horizon;
  report.alphabet_size = alphabet_size;
  report.total_paths = ipow(alphabet_size, options.horizon);
  report.seed = options.seed;
  report.semantics = options.semantics;
  report.target_confidence = options.target_confidence;

  std::optional<LearnedRun> run;
  if (!options.target_confidence) {
    run = learn_once(sul, options, *options.samples, derive_seed(options.seed, "learner"));
  } else if (options.d_bound) {
    const std::uint64_t samples = sample_size(h_for_confidence(*options.target_confidence), *options.d_bound);
    run = learn_once(sul, options, samples, derive_seed(options.seed, "learner"));
    report.target_met = run->pac.confidence >= *options.target_confidence;
  } else {
    std::uint64_t samples = options.samples.value_or(1000);
    for (std::size_t iter = 1; iter <= kMaxConfidenceIterations; ++iter) {
      run = learn_once(sul, options, samples, derive_seed(options.seed, "learner/" + std::to_string(iter)));
      report.iterations = iter;
      report.target_met = run->pac.confidence >= *options.target_confidence;
      if (report.target_met) break;
      if (options.log) {
        options.log("confidence " + std::to_string(run->pac.confidence) + " below target at L=" +
                    std::to_string(samples) + "; doubling");
      }
      samples *= 2;
    }
  }

  report.samples = run->samples;
  report.x_s_formula = run->formula;
  report.x_s_exact = run->exact;
  report.monomials = run->learned.g.size();
  report.stats = run->learned.stats;
  report.h = run->pac.h;
  report.confidence = run->pac.confidence;
  if (!run->exact && run->formula > report.total_paths) {
    report.clipped = true;
    if (options.log) options.log("warning: formula count exceeds |I|^n; P_V clipped to 1");
  }
  report.p_v = safety_probability(report.x_s_used(), alphabet_size, options.horizon);

  MonteCarloEstimate mc = monte_carlo(sul, options.horizon, report.samples, derive_seed(options.seed, "monte-carlo"));
  report.p_l = mc.estimate;
  report.p_l_std_error = mc.std_error;

  if (white_box != nullptr) {
    ExactCount exact = exact_count_dp(*white_box, options.horizon);
    report.exact_safe_paths = exact.safe_paths;
    report.p_exact = exact.probability;
  }
  report.total_queries = sul.query_count() - queries_before;
  return report;
}

AnalysisReport analyze(const SystemSource& source, const AnalyzeOptions& options) {
  if (source.model.has_value() == source.black_box.has_value()) {
    throw ValidationError("give exactly one of a model file or a black-box endpoint");
  }
  if (source.model) {
    MealyMachine machine = load_model(*source.model);
    MachineSul sul(machine);
    return analyze(sul, &machine, options);
  }
  BlackBoxSul sul(*source.black_box);
  return analyze(sul, nullptr, options);
}

std::uint64_t sample_size(double h, const BigInt& d) { return required_samples(h, d); }

// ---------------------------------------------------------------------------

const std::vector<PublishedRow>& published_rows() {
  static const std::vector<PublishedRow> rows = {
      {"wto ALKS", 3, 17, 1000, 0.96, 0.63, 0.634},  {"wto ALKS", 4, 41, 1000, 0.91, 0.51, 0.507},
      {"wto ALKS", 5, 99, 1000, 0.80, 0.41, 0.42},   {"wto ALKS", 10, 952, 1000, 0.00, 0.02, 0.12},
      {"ALKS", 3, 23, 1000, 0.95, 0.85, 0.87},       {"ALKS", 4, 71, 1000, 0.85, 0.88, 0.88},
      {"ALKS", 5, 207, 1000, 0.58, 0.85, 0.86},      {"ALKS", 10, 988, 1000, 0.00, 0.02, 0.87},
  };
  return rows;
}

std::vector<TableRow> reproduce_table(std::uint64_t master_seed, std::uint64_t samples) {
  std::vector<std::future<TableRow>> pending;
  for (const auto& row : published_rows()) {
    const bool with_assist = row.example == "ALKS";
    const std::string model = with_assist ? "alks_with" : "alks_without";
    AnalyzeOptions options;
    options.model_name = row.example;
    options.horizon = row.n;
    options.samples = samples;
    options.seed = derive_seed(master_seed, "table/" + model + "/" + std::to_string(row.n));
    pending.push_back(std::async(std::launch::async, [model, options, example = row.example, with_assist] {
      MealyMachine machine = build_alks(with_assist);
      MachineSul sul(machine);
      return TableRow{example, model, analyze(sul, &machine, options)};
    }));
  }
  std::vector<TableRow> rows;
  for (auto& p : pending) rows.push_back(p.get());
  return rows;
}

bool CellCheck::ok() const { return !tolerance || std::abs(ours - published) <= *tolerance + 1e-12; }

std::vector<CellCheck> compare_with_published(const std::vector<TableRow>& rows) {
  std::vector<CellCheck> checks;
  for (const auto& row : rows) {
    const auto& r = row.report;
    const PublishedRow* paper = nullptr;
    for (const auto& p : published_rows()) {
      if (p.example == row.example && p.n == r.n) paper = &p;
    }
    if (paper == nullptr) continue;
    const bool short_horizon = r.n <= 5;
    auto add = [&](std::string column, double ours, double published, std::optional<double> tol) {
      checks.push_back({row.example, r.n, std::move(column), ours, published, tol});
    };
    add("d", r.x_s_used().convert_to<double>(), static_cast<double>(paper->d),
        short_horizon ? std::optional<double>(0.0) : std::nullopt);
    add("confidence", r.confidence, paper->confidence, 0.01);
    add("P_V", r.p_v, paper->p_v, short_horizon ? std::optional<double>(0.01) : std::nullopt);
    add("P_L", r.p_l, paper->p_l, 0.05);
  }
  return checks;
}

}  // namespace pacsafe
