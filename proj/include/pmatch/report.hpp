#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pmatch/calibration.hpp"
#include "pmatch/oracle.hpp"

// Report construction behind the CLI: market summary tables and parameter
// sweeps, emitted as markdown or CSV.

namespace pmatch::report {

enum class Engine { analytic, oracle, montecarlo };

std::string_view engine_name(Engine engine);
Engine parse_engine(std::string_view name);  // throws std::invalid_argument

struct EngineOptions {
  std::uint64_t trials = 1000000;  // montecarlo engine
  std::uint64_t seed = 0;
  int oracle_cap = oracle::default_cap;
};

// Which engine produced each numeric cell. a and e always come from the
// analytic calibration inversion; the derived statistics follow the
// requested engine.
struct RowProvenance {
  Engine a = Engine::analytic;
  Engine e = Engine::analytic;
  Engine rank_loss = Engine::analytic;
  Engine rank_loss_random = Engine::analytic;
  Engine q_lower = Engine::analytic;
  Engine prl_alpha = Engine::analytic;
  Engine quantile_loss = Engine::analytic;
};

struct ReportRow {
  MarketObservation observation;
  double alpha = 0.15;
  analytics::KeyStatistics stats;
  RowProvenance provenance;
};

// The built-in observation set: U.S. (0.5, 0.3, L=10) and Japan with
// L = 3 and L = 4 (0.7, 0.5), the 2019 published aggregates.
std::vector<MarketObservation> bundled_markets();

ReportRow build_row(const MarketObservation& obs, double alpha, Engine engine,
                    const EngineOptions& options = {});
std::vector<ReportRow> build_table(const std::vector<MarketObservation>& obs,
                                   double alpha, Engine engine,
                                   const EngineOptions& options = {});

// precision is the number of displayed decimals (4 mirrors the published
// table); infeasible PRL cells render as "infeasible" (markdown) or an
// empty field plus prl_feasible=0 (CSV).
void write_markdown(std::ostream& out, const std::vector<ReportRow>& rows,
                    int precision = 4);
void write_csv(std::ostream& out, const std::vector<ReportRow>& rows,
               int precision = 4);

// Re-parses write_csv output; used for round-trip checks and downstream
// tooling.
std::vector<ReportRow> parse_table_csv(std::istream& in);

// ---- Parameter sweeps ----------------------------------------------------

enum class SweepParameter { pressure, epsilon, p2, alpha };

SweepParameter parse_sweep_parameter(std::string_view name);

struct SweepRequest {
  SweepParameter parameter = SweepParameter::pressure;
  double min = 0;
  double max = 0;
  int steps = 0;  // >= 2, endpoints included
  // Fixed values; which ones matter depends on the swept parameter.
  double a = 0.3232;
  double e = 0.1024;
  double epsilon = 0.0;
  double P1 = 0.5;
  int L = 10;
  double alpha = 0.15;

  void validate() const;  // throws std::invalid_argument on a bad range
};

// Plot-ready numeric table; NaN cells are emitted as empty CSV fields.
struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

SweepTable run_sweep(const SweepRequest& request);
void write_sweep_csv(std::ostream& out, const SweepTable& table,
                     int precision = 10);

}  // namespace pmatch::report
