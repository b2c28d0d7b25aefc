#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmatch/analytics.hpp"
#include "pmatch/errors.hpp"

// Ingestion of published aggregate match counts and inversion of observed
// conditional rates into model parameters.

namespace pmatch {

// Published aggregates for one market: how many applicants matched their
// k-th listed program, and (when the market reports it) how many applicants
// went unmatched with a list of length exactly k. The latter enables the
// exact conditional-rate denominator; without it a short-list
// approximation is used.
struct AggregateCounts {
  std::string market_label;
  long long applicants = 0;
  std::vector<long long> matched_by_rank;
  std::optional<std::vector<long long>> unmatched_by_list_length;

  void validate() const;  // throws std::invalid_argument
};

struct ConditionalRates {
  std::vector<double> rates;
  bool used_exact_formula = false;  // unmatched-by-length counts were present
};

// rate_k = matched_k / (applicants - sum_{k'<k} (matched_k' + unmatched_k'))
// with the unmatched term dropped when that data is absent.
// Throws ZeroDenominator / NegativeDenominator at the offending rank.
ConditionalRates rates_from_counts(const AggregateCounts& counts);

// Observed (P1, P2, L) for one market.
struct MarketObservation {
  std::string label;
  double P1 = 0;
  double P2 = 0;
  int L = 0;

  void validate() const;  // throws InvalidObservation
};

struct CalibratedParams {
  double a = 0;
  double e = 0;
};

// Inverts the closed forms: with r = ((1-P1)/(1-P2))^(1/L),
//   a = 1 - r(1-P2),  e = (1-r)/a.
// Requires 0 < P2 < P1 < 1 (a strict first-rank premium); round-trips
// through p_first/p_later to 1e-10.
CalibratedParams calibrate(const MarketObservation& obs);

// One summary-table row: calibrated (a, e) plus rank losses, the type-I
// error lower bound, the swap loss at target alpha, and the quantile loss.
// An infeasible alpha (> a/2) leaves prl_alpha empty rather than failing.
analytics::KeyStatistics key_statistics(const MarketObservation& obs,
                                        double alpha);

// File ingestion; the format is chosen by extension (.csv or .json).
// Schemas are documented in the README. Throws ParseError with file/line
// diagnostics.
std::vector<AggregateCounts> load_counts(const std::string& path);
std::vector<MarketObservation> load_observations(const std::string& path);

}  // namespace pmatch
