#include "pmatch/report.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "csv_util.hpp"
#include "pmatch/montecarlo.hpp"

namespace pmatch::report {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

// precision <= 16 gives fixed decimals for display; anything larger emits
// round-trippable shortest-17 form.
std::string format_value(double x, int precision) {
  if (std::isnan(x)) return "";
  char buffer[64];
  if (precision >= 17)
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
  else
    std::snprintf(buffer, sizeof buffer, "%.*f", precision, x);
  return buffer;
}

// Compact alpha for column headers: 0.15 -> "0.15".
std::string format_alpha(double alpha) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%g", alpha);
  return buffer;
}

ModelParams calibrated_params(const MarketObservation& obs, double epsilon) {
  const CalibratedParams cal = calibrate(obs);
  return ModelParams{obs.L, cal.a, cal.e, epsilon};
}

}  // namespace

std::string_view engine_name(Engine engine) {
  switch (engine) {
    case Engine::analytic: return "analytic";
    case Engine::oracle: return "oracle";
    case Engine::montecarlo: return "mc";
  }
  return "analytic";
}

Engine parse_engine(std::string_view name) {
  if (name == "analytic") return Engine::analytic;
  if (name == "oracle") return Engine::oracle;
  if (name == "mc" || name == "montecarlo") return Engine::montecarlo;
  throw std::invalid_argument("unknown engine '" + std::string(name) +
                              "' (expected analytic, oracle or mc)");
}

std::vector<MarketObservation> bundled_markets() {
  return {
      {"U.S.", 0.5, 0.3, 10},
      {"Japan (L=3)", 0.7, 0.5, 3},
      {"Japan (L=4)", 0.7, 0.5, 4},
  };
}

ReportRow build_row(const MarketObservation& obs, double alpha, Engine engine,
                    const EngineOptions& options) {
  ReportRow row;
  row.observation = obs;
  row.alpha = alpha;
  row.stats = key_statistics(obs, alpha);  // analytic baseline; a, e final

  if (engine != Engine::analytic) {
    const bool feasible = row.stats.prl_alpha.has_value();
    const ModelParams params = calibrated_params(obs, 0.0);
    if (engine == Engine::oracle) {
      row.stats.rank_loss = oracle::exact_rank_loss(params, options.oracle_cap);
      row.stats.rank_loss_random =
          oracle::exact_rank_loss_random(params, options.oracle_cap);
      row.stats.q_lower =
          oracle::exact_type1_error(params, 2, options.oracle_cap);
      if (feasible) {
        ModelParams swapped = params;
        swapped.epsilon = analytics::epsilon_for_alpha(params.a, alpha);
        row.stats.prl_alpha =
            oracle::exact_permutation_rank_loss(swapped, options.oracle_cap);
      }
    } else {
      mc::SimulationConfig config{params, options.trials, options.seed};
      const mc::SimulationResult sim = mc::simulate_statistics(config);
      row.stats.rank_loss = sim.rank_loss.mean;
      row.stats.rank_loss_random = sim.random_assignment_rank_loss.mean;
      row.stats.q_lower = sim.type1_error[1].mean;
      if (feasible) {
        mc::SimulationConfig swap_config = config;
        swap_config.params.epsilon =
            analytics::epsilon_for_alpha(params.a, alpha);
        row.stats.prl_alpha =
            mc::simulate_statistics(swap_config).permutation_rank_loss.mean;
      }
    }
    row.stats.quantile_loss =
        analytics::quantile_loss(row.stats.rank_loss, obs.L);
    row.provenance.rank_loss = engine;
    row.provenance.rank_loss_random = engine;
    row.provenance.q_lower = engine;
    row.provenance.prl_alpha = engine;
    row.provenance.quantile_loss = engine;
  }
  return row;
}

std::vector<ReportRow> build_table(const std::vector<MarketObservation>& obs,
                                   double alpha, Engine engine,
                                   const EngineOptions& options) {
  std::vector<ReportRow> rows;
  rows.reserve(obs.size());
  for (const MarketObservation& o : obs)
    rows.push_back(build_row(o, alpha, engine, options));
  return rows;
}

void write_markdown(std::ostream& out, const std::vector<ReportRow>& rows,
                    int precision) {
  const std::string prl_header =
      rows.empty() ? std::string("PRL_alpha")
                   : "PRL_" + format_alpha(rows.front().alpha);
  out << "| Market | P1 | P2 | L | a | e | RL | RL_rand | Q_lower | "
      << prl_header << " | QL |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const ReportRow& row : rows) {
    const auto& s = row.stats;
    out << "| " << row.observation.label << " | "
        << format_value(row.observation.P1, precision) << " | "
        << format_value(row.observation.P2, precision) << " | "
        << row.observation.L << " | " << format_value(s.a, precision) << " | "
        << format_value(s.e, precision) << " | "
        << format_value(s.rank_loss, precision) << " | "
        << format_value(s.rank_loss_random, precision) << " | "
        << format_value(s.q_lower, precision) << " | "
        << (s.prl_alpha ? format_value(*s.prl_alpha, precision)
                        : std::string("infeasible"))
        << " | " << format_value(s.quantile_loss, precision) << " |\n";
  }
  if (!rows.empty())
    out << "\nengine: " << engine_name(rows.front().provenance.rank_loss)
        << " (a, e always from the calibration inversion)\n";
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows,
               int precision) {
  out << "market,P1,P2,L,alpha,a,e,rank_loss,rank_loss_random,q_lower,"
         "prl_alpha,quantile_loss,prl_feasible,engine\n";
  for (const ReportRow& row : rows) {
    const auto& s = row.stats;
    out << csv::quote(row.observation.label) << ','
        << format_value(row.observation.P1, precision) << ','
        << format_value(row.observation.P2, precision) << ','
        << row.observation.L << ',' << format_value(row.alpha, precision)
        << ',' << format_value(s.a, precision) << ','
        << format_value(s.e, precision) << ','
        << format_value(s.rank_loss, precision) << ','
        << format_value(s.rank_loss_random, precision) << ','
        << format_value(s.q_lower, precision) << ','
        << (s.prl_alpha ? format_value(*s.prl_alpha, precision)
                        : std::string())
        << ',' << format_value(s.quantile_loss, precision) << ','
        << (s.prl_alpha ? 1 : 0) << ','
        << engine_name(row.provenance.rank_loss) << '\n';
  }
}

std::vector<ReportRow> parse_table_csv(std::istream& in) {
  const std::string source = "<table-csv>";
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(source, 1, "missing header");
  const std::vector<std::string> expected = {
      "market",    "P1",        "P2",          "L",
      "alpha",     "a",         "e",           "rank_loss",
      "rank_loss_random", "q_lower", "prl_alpha", "quantile_loss",
      "prl_feasible", "engine"};
  if (csv::split(source, 1, line) != expected)
    throw ParseError(source, 1, "unexpected table header");
  std::vector<ReportRow> rows;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (csv::trim(line).empty()) continue;
    const std::vector<std::string> f = csv::split(source, n, line);
    if (f.size() != expected.size())
      throw ParseError(source, n, "wrong field count");
    ReportRow row;
    row.observation.label = f[0];
    row.observation.P1 = std::stod(f[1]);
    row.observation.P2 = std::stod(f[2]);
    row.observation.L = std::stoi(f[3]);
    row.alpha = std::stod(f[4]);
    row.stats.a = std::stod(f[5]);
    row.stats.e = std::stod(f[6]);
    row.stats.rank_loss = std::stod(f[7]);
    row.stats.rank_loss_random = std::stod(f[8]);
    row.stats.q_lower = std::stod(f[9]);
    if (!f[10].empty()) row.stats.prl_alpha = std::stod(f[10]);
    row.stats.quantile_loss = std::stod(f[11]);
    const Engine engine = parse_engine(f[13]);
    row.provenance.rank_loss = engine;
    row.provenance.rank_loss_random = engine;
    row.provenance.q_lower = engine;
    row.provenance.prl_alpha = engine;
    row.provenance.quantile_loss = engine;
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---- sweeps ----------------------------------------------------------------

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "e" || name == "pressure") return SweepParameter::pressure;
  if (name == "epsilon") return SweepParameter::epsilon;
  if (name == "P2" || name == "p2") return SweepParameter::p2;
  if (name == "alpha") return SweepParameter::alpha;
  throw std::invalid_argument("unknown sweep parameter '" + std::string(name) +
                              "' (expected e, epsilon, P2 or alpha)");
}

void SweepRequest::validate() const {
  if (steps < 2) throw std::invalid_argument("sweep: steps must be >= 2");
  if (!(min < max)) throw std::invalid_argument("sweep: need min < max");
  switch (parameter) {
    case SweepParameter::pressure:
      if (min < 0.0 || max > 1.0)
        throw std::invalid_argument("sweep: e must stay within [0, 1]");
      break;
    case SweepParameter::epsilon:
      if (min < 0.0 || max > 0.5)
        throw std::invalid_argument("sweep: epsilon must stay within [0, 1/2]");
      break;
    case SweepParameter::p2:
      if (min <= 0.0 || max >= P1)
        throw std::invalid_argument(
            "sweep: P2 must stay within (0, P1); the model needs a "
            "first-rank premium");
      break;
    case SweepParameter::alpha:
      if (min <= 0.0)
        throw std::invalid_argument("sweep: alpha must be positive");
      break;
  }
}

SweepTable run_sweep(const SweepRequest& request) {
  request.validate();
  SweepTable table;
  const auto value_at = [&](int i) {
    return request.min +
           (request.max - request.min) * i / (request.steps - 1);
  };
  switch (request.parameter) {
    case SweepParameter::pressure: {
      table.columns = {"e",       "P1",      "P2",           "gap",
                       "rank_loss", "q_lower", "quantile_loss"};
      for (int i = 0; i < request.steps; ++i) {
        const double e = value_at(i);
        const ModelParams params{request.L, request.a, e, 0.0};
        const double p1 = analytics::p_first(params);
        const double p2 = analytics::p_later(params);
        const double rl = analytics::rank_loss(params);
        table.rows.push_back({e, p1, p2, p1 - p2, rl,
                              analytics::q_lower_bound(params),
                              analytics::quantile_loss(rl, request.L)});
      }
      break;
    }
    case SweepParameter::epsilon: {
      table.columns = {"epsilon", "permutation_rank_loss", "q_rank1",
                       "q_rank2"};
      for (int i = 0; i < request.steps; ++i) {
        const double eps = value_at(i);
        const ModelParams params{request.L, request.a, request.e, eps};
        table.rows.push_back(
            {eps, analytics::permutation_rank_loss(request.a, eps),
             analytics::type1_error_with_swap(params, 1),
             analytics::type1_error_with_swap(params, 2)});
      }
      break;
    }
    case SweepParameter::p2: {
      table.columns = {"P2",      "a",         "e",
                       "rank_loss", "rank_loss_random", "q_lower",
                       "prl_alpha", "quantile_loss"};
      for (int i = 0; i < request.steps; ++i) {
        const double p2 = value_at(i);
        const MarketObservation obs{"sweep", request.P1, p2, request.L};
        const analytics::KeyStatistics s = key_statistics(obs, request.alpha);
        table.rows.push_back({p2, s.a, s.e, s.rank_loss, s.rank_loss_random,
                              s.q_lower, s.prl_alpha.value_or(nan_value),
                              s.quantile_loss});
      }
      break;
    }
    case SweepParameter::alpha: {
      table.columns = {"alpha", "feasible", "epsilon", "prl_alpha"};
      for (int i = 0; i < request.steps; ++i) {
        const double alpha = value_at(i);
        const bool feasible = analytics::alpha_feasible(request.a, alpha);
        const double eps =
            feasible ? analytics::epsilon_for_alpha(request.a, alpha)
                     : nan_value;
        const double prl =
            feasible ? analytics::permutation_rank_loss(request.a, eps)
                     : nan_value;
        table.rows.push_back({alpha, feasible ? 1.0 : 0.0, eps, prl});
      }
      break;
    }
  }
  return table;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table,
                     int precision) {
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const std::vector<double>& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_value(row[i], precision);
    out << '\n';
  }
}

}  // namespace pmatch::report
