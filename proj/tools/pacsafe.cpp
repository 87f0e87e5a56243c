// pacsafe: PAC-confidence safety estimation for black-box Mealy machines.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pacsafe/analysis.hpp"
#include "pacsafe/bounds.hpp"
#include "pacsafe/errors.hpp"
#include "pacsafe/learner.hpp"
#include "pacsafe/models.hpp"
#include "pacsafe/oracles.hpp"
#include "pacsafe/report.hpp"
#include "pacsafe/sul.hpp"

namespace {

using namespace pacsafe;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kTransport = 3,
  kResource = 4,
};

struct SourceOptions {
  std::string model;
  std::string endpoint;
  std::string command;
  std::vector<std::string> unsafe_outputs;
  int timeout_ms = 5000;
  unsigned retries = 2;

  void add_to(CLI::App& app) {
    auto* m = app.add_option("--model", model, "Model file, or the name of a bundled model");
    auto* e = app.add_option("--endpoint", endpoint, "host:port of a wire-protocol server");
    auto* c = app.add_option("--cmd", command, "Command speaking the wire protocol on stdin/stdout");
    m->excludes(e)->excludes(c);
    e->excludes(c);
    app.add_option("--unsafe-output", unsafe_outputs, "Output token classified unsafe (black-box only)");
    app.add_option("--timeout-ms", timeout_ms, "Per-reply timeout for black-box systems")->check(CLI::PositiveNumber);
    app.add_option("--retries", retries, "Reconnect attempts per black-box query");
  }

  bool black_box() const { return !endpoint.empty() || !command.empty(); }

  BlackBoxConfig black_box_config() const {
    BlackBoxConfig cfg;
    cfg.transport = endpoint.empty() ? BlackBoxConfig::Transport::Subprocess : BlackBoxConfig::Transport::Tcp;
    cfg.endpoint = endpoint.empty() ? command : endpoint;
    cfg.unsafe_outputs = {unsafe_outputs.begin(), unsafe_outputs.end()};
    cfg.timeout = std::chrono::milliseconds(timeout_ms);
    cfg.max_retries = retries;
    return cfg;
  }

  std::filesystem::path model_path() const {
    if (model.empty()) throw ValidationError("give one of --model, --endpoint or --cmd");
    std::filesystem::path p = model;
    if (std::filesystem::exists(p)) return p;
    std::filesystem::path bundled = model_directory() / (model + ".machine");
    if (std::filesystem::exists(bundled)) return bundled;
    throw ValidationError("model file '" + model + "' not found");
  }

  std::string display_name() const {
    if (!model.empty()) return std::filesystem::path(model).stem().string();
    return black_box() ? (endpoint.empty() ? "subprocess" : endpoint) : "model";
  }
};

BigInt parse_big(const std::string& text, const char* what) {
  try {
    BigInt value(text);
    if (value < 0) throw std::invalid_argument("negative");
    return value;
  } catch (const std::exception&) {
    throw ValidationError(std::string("invalid ") + what + " '" + text + "'");
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + out_path + "'");
  out << text;
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

int run(int argc, char** argv) {
  CLI::App app{"Probabilistic finite-horizon safety of Mealy machines with PAC confidence"};
  app.require_subcommand(1);

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Learn the safe-path set and report P_V with its confidence");
  SourceOptions analyze_src;
  analyze_src.add_to(*analyze_cmd);
  std::size_t horizon = 0;
  std::optional<std::uint64_t> budget;
  std::optional<double> target;
  std::string d_bound;
  std::uint64_t seed = 0;
  std::string semantics = "all-safe";
  std::string format = "csv";
  std::string out_path;
  bool verbose = false;
  std::uint64_t oracle_cap = kDefaultOracleCap;
  analyze_cmd->add_option("-n", horizon, "Horizon (number of steps)")->required()->check(CLI::PositiveNumber);
  analyze_cmd->add_option("-L", budget, "Sample budget L");
  analyze_cmd->add_option("--confidence", target, "Target confidence 1 - 1/h");
  analyze_cmd->add_option("--d-bound", d_bound, "Upper bound on x_S used to size L for --confidence");
  analyze_cmd->add_option("--seed", seed, "Master seed");
  analyze_cmd->add_option("--oracle-semantics", semantics, "all-safe | paper-literal")
      ->check(CLI::IsMember({"all-safe", "paper-literal"}));
  analyze_cmd->add_option("--format", format, "csv | json-lines")->check(CLI::IsMember({"csv", "json-lines"}));
  analyze_cmd->add_option("--out", out_path, "Write the report here instead of stdout");
  analyze_cmd->add_option("--oracle-cap", oracle_cap, "Largest expansion an oracle call may enumerate");
  analyze_cmd->add_flag("-v,--verbose", verbose, "Log each appended monomial to stderr");

  // exact
  auto* exact_cmd = app.add_subcommand("exact", "Exact safe-path count of a model file");
  SourceOptions exact_src;
  exact_cmd->add_option("--model", exact_src.model, "Model file or bundled model name")->required();
  std::size_t exact_n = 0;
  std::string exact_semantics = "final";
  bool enumerate = false;
  exact_cmd->add_option("-n", exact_n, "Horizon")->required()->check(CLI::PositiveNumber);
  exact_cmd->add_option("--semantics", exact_semantics, "final | never-unsafe")
      ->check(CLI::IsMember({"final", "never-unsafe"}));
  exact_cmd->add_flag("--enumerate", enumerate, "Brute-force enumeration instead of dynamic programming");

  // estimate
  auto* estimate_cmd = app.add_subcommand("estimate", "Monte Carlo estimate P_L");
  SourceOptions estimate_src;
  estimate_src.add_to(*estimate_cmd);
  std::size_t estimate_n = 0;
  std::uint64_t estimate_samples = 1000;
  std::uint64_t estimate_seed = 0;
  unsigned shards = 1;
  estimate_cmd->add_option("-n", estimate_n, "Horizon")->required()->check(CLI::PositiveNumber);
  estimate_cmd->add_option("-L", estimate_samples, "Number of samples")->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--seed", estimate_seed, "Seed");
  estimate_cmd->add_option("--shards", shards, "Parallel workers, each with its own adapter")
      ->check(CLI::PositiveNumber);

  // sample-size
  auto* size_cmd = app.add_subcommand("sample-size", "Smallest L with L >= 2h(d + ln h)");
  size_cmd->set_help_flag("--help", "Print this help message and exit");
  std::optional<double> size_h;
  std::optional<double> size_conf;
  std::string size_d;
  auto* h_opt = size_cmd->add_option("--h", size_h, "h > 1");
  auto* c_opt = size_cmd->add_option("--confidence", size_conf, "Confidence 1 - 1/h");
  h_opt->excludes(c_opt);
  size_cmd->add_option("--d", size_d, "Number of safe paths d")->required();

  // confidence
  auto* conf_cmd = app.add_subcommand("confidence", "Solve the sample-size bound for h and the confidence");
  std::uint64_t conf_l = 0;
  std::string conf_d;
  conf_cmd->add_option("-L", conf_l, "Sample budget")->required()->check(CLI::PositiveNumber);
  conf_cmd->add_option("--d", conf_d, "Number of safe paths d")->required();

  // reproduce-table
  auto* table_cmd = app.add_subcommand("reproduce-table", "Run the lane-keeping result table and compare");
  std::string table_out;
  std::uint64_t table_seed = 2024;
  std::uint64_t table_l = 1000;
  table_cmd->add_option("--out", table_out, "CSV output path (default stdout)");
  table_cmd->add_option("--seed", table_seed, "Master seed");
  table_cmd->add_option("-L", table_l, "Sample budget per row")->check(CLI::PositiveNumber);

  // serve-model
  auto* serve_cmd = app.add_subcommand("serve-model", "Serve a model over the wire protocol");
  std::string serve_model;
  int listen_port = -1;
  serve_cmd->add_option("--model", serve_model, "Model file or bundled model name")->required();
  serve_cmd->add_option("--listen", listen_port, "TCP port on 127.0.0.1 (default: stdin/stdout)")
      ->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  if (analyze_cmd->parsed()) {
    if (budget.has_value() == false && target.has_value() == false) {
      throw ValidationError("give -L or --confidence");
    }
    AnalyzeOptions options;
    options.model_name = analyze_src.display_name();
    options.horizon = horizon;
    options.samples = budget;
    options.target_confidence = target;
    if (!d_bound.empty()) options.d_bound = parse_big(d_bound, "d bound");
    options.seed = seed;
    options.semantics = parse_semantics(semantics);
    options.oracle_cap = oracle_cap;
    if (verbose) options.log = [](std::string_view line) { std::cerr << line << '\n'; };

    SystemSource source;
    if (analyze_src.black_box()) {
      source.black_box = analyze_src.black_box_config();
    } else {
      source.model = analyze_src.model_path();
    }
    AnalysisReport report = analyze(source, options);
    if (report.clipped) std::cerr << "warning: P_V is clipped; x_S is an upper bound\n";
    if (!report.target_met) std::cerr << "warning: target confidence not reached\n";
    emit(format == "csv" ? csv_header() + csv_row(report) : report_json_line(report) + "\n", out_path);
    return kOk;
  }

  if (exact_cmd->parsed()) {
    MealyMachine machine = load_model(exact_src.model_path());
    ExactCount c = enumerate ? exact_count_enumerate(machine, exact_n)
                 : exact_semantics == "final" ? exact_count_dp(machine, exact_n)
                                              : exact_count_dp_never_unsafe(machine, exact_n);
    std::cout << "n,safe_paths,total_paths,probability\n"
              << c.n << ',' << c.safe_paths << ',' << c.total_paths << ',' << fixed(c.probability, 10) << '\n';
    return kOk;
  }

  if (estimate_cmd->parsed()) {
    MonteCarloEstimate e;
    if (estimate_src.black_box()) {
      auto cfg = estimate_src.black_box_config();
      e = monte_carlo_sharded([cfg] { return std::make_unique<BlackBoxSul>(cfg); }, estimate_n, estimate_samples,
                              estimate_seed, shards);
    } else {
      MealyMachine machine = load_model(estimate_src.model_path());
      e = monte_carlo_sharded([machine] { return std::make_unique<MachineSul>(machine); }, estimate_n,
                              estimate_samples, estimate_seed, shards);
    }
    std::cout << "samples,safe_hits,estimate,std_error,seed\n"
              << e.samples << ',' << e.safe_hits << ',' << fixed(e.estimate) << ',' << fixed(e.std_error) << ','
              << e.seed << '\n';
    return kOk;
  }

  if (size_cmd->parsed()) {
    if (!size_h && !size_conf) throw ValidationError("give --h or --confidence");
    double h = size_h ? *size_h : h_for_confidence(*size_conf);
    std::cout << sample_size(h, parse_big(size_d, "d")) << '\n';
    return kOk;
  }

  if (conf_cmd->parsed()) {
    PacParams p = solve_h(conf_l, parse_big(conf_d, "d"));
    std::cout << "h,confidence\n" << fixed(p.h, 10) << ',' << fixed(p.confidence, 10) << '\n';
    return kOk;
  }

  if (table_cmd->parsed()) {
    auto rows = reproduce_table(table_seed, table_l);
    emit(table_csv(rows), table_out);
    std::ostream& log = table_out.empty() ? std::cerr : std::cout;
    std::size_t failures = 0;
    for (const auto& c : compare_with_published(rows)) {
      log << (c.tolerance ? (c.ok() ? "ok    " : "DIFF  ") : "info  ") << std::left << std::setw(9) << c.example
          << " N=" << std::setw(3) << c.n << std::setw(11) << c.column << " ours=" << std::setw(10) << fixed(c.ours, 4)
          << " published=" << fixed(c.published, 4);
      if (c.tolerance) log << " tol=" << *c.tolerance;
      log << '\n';
      if (!c.ok()) ++failures;
    }
    MealyMachine coffee = build_coffee();
    log << "coffee (reconstructed) N=5 exact safe paths=" << exact_count_dp(coffee, 5).safe_paths
        << " (published learned x_S=272; structure not recoverable, not compared)\n";
    log << failures << " cell(s) outside tolerance\n";
    return kOk;
  }

  if (serve_cmd->parsed()) {
    SourceOptions src;
    src.model = serve_model;
    MealyMachine machine = load_model(src.model_path());
    if (listen_port < 0) {
      serve_stream(machine, std::cin, std::cout);
      return kOk;
    }
    TcpModelServer server(machine, static_cast<std::uint16_t>(listen_port));
    std::cerr << "listening on " << server.address() << std::endl;
    server.wait();
    return kOk;
  }
  return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const TransportError& e) {
    std::cerr << "transport error: " << e.what() << '\n';
    return kTransport;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
