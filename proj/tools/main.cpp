// pressure-match: reduced-form analysis of first-rank pressure in
// centralized matching markets. Subcommands reproduce the market summary
// table, sweep parameters, cross-validate the engines, compute conditional
// match rates from published counts, and run the simulator.

#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "pmatch/montecarlo.hpp"
#include "pmatch/report.hpp"
#include "pmatch/validation.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation_failure = 1;
constexpr int exit_input_error = 2;

struct SharedOptions {
  double alpha = 0.15;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000000;
  std::string engine = "analytic";
  std::string format = "md";
  int precision = 4;
  std::string output;
};

// Writes to --output when given, stdout otherwise.
class OutputStream {
 public:
  explicit OutputStream(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_)
        throw pmatch::ParseError(path, 0, "cannot open output file");
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void add_shared(CLI::App& app, SharedOptions& shared) {
  app.add_option("--alpha", shared.alpha,
                 "Target type-I error for the swap intervention")
      ->envname("PRESSURE_MATCH_ALPHA")
      ->capture_default_str();
  app.add_option("--seed", shared.seed, "Simulation seed")
      ->envname("PRESSURE_MATCH_SEED")
      ->capture_default_str();
  app.add_option("--trials", shared.trials, "Simulation trials")
      ->envname("PRESSURE_MATCH_TRIALS")
      ->capture_default_str();
  app.add_option("--engine", shared.engine,
                 "Statistic engine: analytic, oracle or mc")
      ->envname("PRESSURE_MATCH_ENGINE")
      ->check(CLI::IsMember({"analytic", "oracle", "mc", "montecarlo"}))
      ->capture_default_str();
  app.add_option("--format", shared.format, "Output format")
      ->envname("PRESSURE_MATCH_FORMAT")
      ->check(CLI::IsMember({"md", "csv"}))
      ->capture_default_str();
  app.add_option("--precision", shared.precision,
                 "Displayed decimals (>= 17 emits full precision)")
      ->envname("PRESSURE_MATCH_PRECISION")
      ->capture_default_str();
  app.add_option("--output", shared.output, "Write to a file instead of stdout")
      ->envname("PRESSURE_MATCH_OUTPUT");
}

int run_table(const SharedOptions& shared, const std::string& observations) {
  std::vector<pmatch::MarketObservation> markets =
      observations.empty() ? pmatch::report::bundled_markets()
                           : pmatch::load_observations(observations);
  if (markets.empty())
    std::cerr << "warning: no observations in " << observations
              << "; emitting an empty table\n";
  pmatch::report::EngineOptions options;
  options.trials = shared.trials;
  options.seed = shared.seed;
  const auto rows = pmatch::report::build_table(
      markets, shared.alpha, pmatch::report::parse_engine(shared.engine),
      options);
  OutputStream out(shared.output);
  if (shared.format == "csv")
    pmatch::report::write_csv(out.get(), rows, shared.precision);
  else
    pmatch::report::write_markdown(out.get(), rows, shared.precision);
  return exit_ok;
}

int run_sweep(const SharedOptions& shared, bool precision_given,
              const pmatch::report::SweepRequest& request) {
  const pmatch::report::SweepTable table = pmatch::report::run_sweep(request);
  OutputStream out(shared.output);
  // sweeps are plot data; unless asked otherwise, emit more than 4 decimals
  pmatch::report::write_sweep_csv(out.get(), table,
                                  precision_given ? shared.precision : 10);
  return exit_ok;
}

int run_validate(const SharedOptions& shared,
                 const pmatch::validation::Options& options) {
  const pmatch::validation::Report report = pmatch::validation::run(options);
  OutputStream out(shared.output);
  pmatch::validation::print(out.get(), report);
  return report.all_pass ? exit_ok : exit_validation_failure;
}

int run_rates(const SharedOptions& shared, const std::string& counts_file,
              bool calibrate_flag, int list_length) {
  const std::vector<pmatch::AggregateCounts> markets =
      pmatch::load_counts(counts_file);
  OutputStream out_stream(shared.output);
  std::ostream& out = out_stream.get();
  const bool csv = shared.format == "csv";
  const auto fixed = [&](double x) {
    char value[32];
    std::snprintf(value, sizeof value, "%.*f", shared.precision, x);
    return std::string(value);
  };

  if (csv) out << "market,rank,rate,formula\n";
  std::vector<std::pair<std::string, pmatch::CalibratedParams>> calibrated;
  for (const pmatch::AggregateCounts& counts : markets) {
    const pmatch::ConditionalRates rates = pmatch::rates_from_counts(counts);
    const char* formula = rates.used_exact_formula ? "exact" : "approximate";
    if (csv) {
      for (std::size_t k = 0; k < rates.rates.size(); ++k)
        out << counts.market_label << ',' << k + 1 << ','
            << fixed(rates.rates[k]) << ',' << formula << '\n';
    } else {
      out << counts.market_label << " (" << formula << " formula):";
      for (std::size_t k = 0; k < rates.rates.size(); ++k)
        out << " P" << k + 1 << '=' << fixed(rates.rates[k]);
      out << '\n';
    }
    if (calibrate_flag) {
      if (rates.rates.size() < 2)
        throw pmatch::InvalidObservation(
            "calibration needs rates at ranks 1 and 2");
      const pmatch::MarketObservation obs{counts.market_label, rates.rates[0],
                                          rates.rates[1], list_length};
      calibrated.emplace_back(counts.market_label, pmatch::calibrate(obs));
    }
  }
  if (calibrate_flag) {
    if (csv) {
      out << "\nmarket,L,a,e\n";
      for (const auto& [label, cal] : calibrated)
        out << label << ',' << list_length << ',' << fixed(cal.a) << ','
            << fixed(cal.e) << '\n';
    } else {
      for (const auto& [label, cal] : calibrated)
        out << label << " calibrated with L=" << list_length << ": a="
            << fixed(cal.a) << " e=" << fixed(cal.e) << '\n';
    }
  }
  return exit_ok;
}

int run_simulate(const SharedOptions& shared,
                 const pmatch::mc::SimulationConfig& config) {
  const pmatch::mc::SimulationResult result =
      pmatch::mc::simulate_statistics(config);
  OutputStream out_stream(shared.output);
  std::ostream& out = out_stream.get();
  const bool csv = shared.format == "csv";
  const auto emit = [&](const std::string& name,
                        const pmatch::mc::EstimateWithError& est) {
    char line[160];
    if (csv)
      std::snprintf(line, sizeof line, "%s,%.*f,%.*f,%llu,%d\n", name.c_str(),
                    shared.precision, est.mean, shared.precision,
                    est.std_error,
                    static_cast<unsigned long long>(est.trials),
                    est.low_confidence ? 1 : 0);
    else
      std::snprintf(line, sizeof line, "%-22s %.*f (se %.*f, n=%llu)%s\n",
                    name.c_str(), shared.precision, est.mean,
                    shared.precision, est.std_error,
                    static_cast<unsigned long long>(est.trials),
                    est.low_confidence ? " [low confidence]" : "");
    out << line;
  };
  if (csv) out << "statistic,mean,std_error,n,low_confidence\n";
  for (std::size_t k = 0; k < result.conditional_rates.size(); ++k)
    emit("P" + std::to_string(k + 1), result.conditional_rates[k]);
  emit("rank_loss", result.rank_loss);
  emit("permutation_rank_loss", result.permutation_rank_loss);
  emit("random_rank_loss", result.random_assignment_rank_loss);
  for (std::size_t k = 0; k < result.type1_error.size(); ++k)
    emit("Q_rank" + std::to_string(k + 1), result.type1_error[k]);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ranking-pressure analysis for centralized matching markets"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config")
      ->envname("PRESSURE_MATCH_CONFIG")
      ->description("Flat key=value config file (CLI flags take precedence)");

  SharedOptions shared;
  add_shared(app, shared);

  std::string observations_file;
  CLI::App* table = app.add_subcommand(
      "table", "Market summary table from observed (P1, P2, L)");
  table
      ->add_option("observations", observations_file,
                   "Observations file (.csv or .json); bundled markets when "
                   "omitted")
      ->check(CLI::ExistingFile);

  pmatch::report::SweepRequest sweep_request;
  std::string sweep_parameter = "e";
  CLI::App* sweep =
      app.add_subcommand("sweep", "Statistics over a parameter range (CSV)");
  sweep->add_option("--parameter", sweep_parameter,
                    "Swept parameter: e, epsilon, P2 or alpha")
      ->required();
  sweep->add_option("--min", sweep_request.min, "Range start")->required();
  sweep->add_option("--max", sweep_request.max, "Range end")->required();
  sweep->add_option("--steps", sweep_request.steps, "Grid size (>= 2)")
      ->required();
  sweep->add_option("--a", sweep_request.a, "Acceptance probability")
      ->capture_default_str();
  sweep->add_option("--e", sweep_request.e, "Pressure probability")
      ->capture_default_str();
  sweep->add_option("--epsilon", sweep_request.epsilon, "Swap probability")
      ->capture_default_str();
  sweep->add_option("--P1", sweep_request.P1, "First-rank rate for P2 sweeps")
      ->capture_default_str();
  sweep->add_option("--L", sweep_request.L, "List length")
      ->capture_default_str();

  pmatch::validation::Options validate_options;
  CLI::App* validate = app.add_subcommand(
      "validate", "Cross-engine agreement suite (exit 1 on failure)");
  validate
      ->add_option("--max-L", validate_options.max_L,
                   "Largest list length on the oracle grid")
      ->capture_default_str();
  validate
      ->add_option("--grid-density", validate_options.grid_points,
                   "Points per axis of the (a, e) grid")
      ->capture_default_str();

  std::string counts_file;
  bool calibrate_flag = false;
  int list_length = 0;
  CLI::App* rates = app.add_subcommand(
      "rates", "Conditional match rates from aggregate counts");
  rates->add_option("counts", counts_file, "Counts file (.csv or .json)")
      ->required()
      ->check(CLI::ExistingFile);
  rates->add_flag("--calibrate", calibrate_flag,
                  "Invert (P1, P2) into (a, e); requires --list-length");
  rates->add_option("--list-length", list_length,
                    "List length L for --calibrate");

  pmatch::mc::SimulationConfig sim_config;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo estimates of all statistics");
  simulate->add_option("--a", sim_config.params.a, "Acceptance probability")
      ->required();
  simulate->add_option("--e", sim_config.params.e, "Pressure probability")
      ->capture_default_str();
  simulate->add_option("--L", sim_config.params.L, "List length")->required();
  simulate
      ->add_option("--epsilon", sim_config.params.epsilon, "Swap probability")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return exit_input_error;
  }

  try {
    if (table->parsed()) return run_table(shared, observations_file);
    if (sweep->parsed()) {
      sweep_request.parameter =
          pmatch::report::parse_sweep_parameter(sweep_parameter);
      sweep_request.alpha = shared.alpha;
      return run_sweep(shared, app.count("--precision") > 0, sweep_request);
    }
    if (validate->parsed()) {
      // validate has its own trial/seed defaults; take overrides only when
      // the flags were actually given
      if (app.count("--trials") > 0) validate_options.trials = shared.trials;
      if (app.count("--seed") > 0) validate_options.seed = shared.seed;
      return run_validate(shared, validate_options);
    }
    if (rates->parsed()) {
      if (calibrate_flag && list_length < 2)
        throw pmatch::InvalidObservation(
            "--calibrate requires --list-length of at least 2");
      return run_rates(shared, counts_file, calibrate_flag, list_length);
    }
    if (simulate->parsed()) {
      sim_config.trials = shared.trials;
      sim_config.seed = shared.seed;
      return run_simulate(shared, sim_config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input_error;
  }
  return exit_ok;
}
