#include "pmatch/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "csv_util.hpp"

namespace pmatch {

void AggregateCounts::validate() const {
  if (market_label.empty())
    throw std::invalid_argument("AggregateCounts: empty market label");
  if (applicants < 0)
    throw std::invalid_argument("AggregateCounts: negative applicant count");
  if (matched_by_rank.empty())
    throw std::invalid_argument("AggregateCounts: no matched-by-rank counts");
  long long matched_total = 0;
  for (long long m : matched_by_rank) {
    if (m < 0)
      throw std::invalid_argument("AggregateCounts: negative matched count");
    matched_total += m;
  }
  if (matched_total > applicants)
    throw std::invalid_argument(
        "AggregateCounts: more matches than applicants");
  if (unmatched_by_list_length) {
    if (unmatched_by_list_length->size() != matched_by_rank.size())
      throw std::invalid_argument(
          "AggregateCounts: unmatched-by-length counts must cover the same "
          "ranks as matched-by-rank");
    for (long long u : *unmatched_by_list_length)
      if (u < 0)
        throw std::invalid_argument(
            "AggregateCounts: negative unmatched count");
  }
}

ConditionalRates rates_from_counts(const AggregateCounts& counts) {
  counts.validate();
  ConditionalRates result;
  result.used_exact_formula = counts.unmatched_by_list_length.has_value();
  long long exited = 0;  // applicants no longer at risk at rank k
  for (std::size_t i = 0; i < counts.matched_by_rank.size(); ++i) {
    const int rank = static_cast<int>(i) + 1;
    const long long at_risk = counts.applicants - exited;
    if (at_risk < 0) throw NegativeDenominator(rank);
    if (at_risk == 0) throw ZeroDenominator(rank);
    const long long matched = counts.matched_by_rank[i];
    if (matched > at_risk)
      throw std::invalid_argument(
          "AggregateCounts: matched exceeds at-risk applicants at rank " +
          std::to_string(rank));
    result.rates.push_back(static_cast<double>(matched) /
                           static_cast<double>(at_risk));
    exited += matched;
    if (result.used_exact_formula)
      exited += (*counts.unmatched_by_list_length)[i];
  }
  return result;
}

void MarketObservation::validate() const {
  if (L < 2)
    throw InvalidObservation("observation '" + label +
                             "': L must be at least 2");
  if (!(P1 > 0.0 && P1 < 1.0) || !(P2 > 0.0 && P2 < 1.0))
    throw InvalidObservation("observation '" + label +
                             "': rates must lie strictly in (0, 1)");
  if (!(P2 < P1))
    throw InvalidObservation("observation '" + label +
                             "': no first-rank premium observed (P1 <= P2); "
                             "the model requires P2 < P1");
}

CalibratedParams calibrate(const MarketObservation& obs) {
  obs.validate();
  // r = (1 - ae): the drop (1-P1)/(1-P2) equals r^L.
  const double r = std::pow((1.0 - obs.P1) / (1.0 - obs.P2), 1.0 / obs.L);
  const double a = 1.0 - r * (1.0 - obs.P2);
  const double e = (1.0 - r) / a;
  return CalibratedParams{a, e};
}

analytics::KeyStatistics key_statistics(const MarketObservation& obs,
                                        double alpha) {
  const CalibratedParams cal = calibrate(obs);
  const ModelParams params{obs.L, cal.a, cal.e, 0.0};
  analytics::KeyStatistics stats;
  stats.a = cal.a;
  stats.e = cal.e;
  stats.rank_loss = analytics::rank_loss(params);
  stats.rank_loss_random = analytics::rank_loss_random(params);
  stats.q_lower = analytics::q_lower_bound(params);
  if (analytics::alpha_feasible(cal.a, alpha))
    stats.prl_alpha = analytics::permutation_rank_loss(
        cal.a, analytics::epsilon_for_alpha(cal.a, alpha));
  stats.quantile_loss = analytics::quantile_loss(stats.rank_loss, obs.L);
  return stats;
}

// ---- file ingestion --------------------------------------------------------

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

long long parse_count(const std::string& file, int line,
                      const std::string& field, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long value = std::stoll(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return value;
  } catch (const std::exception&) {
    throw ParseError(file, line, "bad " + what + " value '" + field + "'");
  }
}

double parse_real(const std::string& file, int line, const std::string& field,
                  const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return value;
  } catch (const std::exception&) {
    throw ParseError(file, line, "bad " + what + " value '" + field + "'");
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(path, 0, err.what());
  }
}

struct CountsRow {
  int line;
  long long applicants;
  int rank;
  long long matched;
  std::optional<long long> unmatched;
};

std::vector<AggregateCounts> counts_from_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw ParseError(path, 1, "missing header");
  const std::vector<std::string> header = csv::split(path, 1, lines[0]);
  const std::vector<std::string> expected = {
      "market", "applicants", "rank", "matched", "unmatched_at_length"};
  if (header != expected)
    throw ParseError(path, 1,
                     "expected header "
                     "'market,applicants,rank,matched,unmatched_at_length'");

  std::vector<std::string> order;
  std::map<std::string, std::vector<CountsRow>> by_market;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const int line = static_cast<int>(n) + 1;
    if (csv::trim(lines[n]).empty()) continue;
    const std::vector<std::string> f = csv::split(path, line, lines[n]);
    if (f.size() != expected.size())
      throw ParseError(path, line,
                       "expected " + std::to_string(expected.size()) +
                           " fields, got " + std::to_string(f.size()));
    CountsRow row;
    row.line = line;
    row.applicants = parse_count(path, line, f[1], "applicants");
    row.rank = static_cast<int>(parse_count(path, line, f[2], "rank"));
    row.matched = parse_count(path, line, f[3], "matched");
    if (!f[4].empty())
      row.unmatched = parse_count(path, line, f[4], "unmatched_at_length");
    if (f[0].empty()) throw ParseError(path, line, "empty market label");
    if (by_market.find(f[0]) == by_market.end()) order.push_back(f[0]);
    by_market[f[0]].push_back(row);
  }

  std::vector<AggregateCounts> result;
  for (const std::string& market : order) {
    std::vector<CountsRow>& rows = by_market[market];
    std::sort(rows.begin(), rows.end(),
              [](const CountsRow& x, const CountsRow& y) {
                return x.rank < y.rank;
              });
    AggregateCounts counts;
    counts.market_label = market;
    counts.applicants = rows.front().applicants;
    const bool with_unmatched = rows.front().unmatched.has_value();
    if (with_unmatched) counts.unmatched_by_list_length.emplace();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const CountsRow& row = rows[i];
      if (row.applicants != counts.applicants)
        throw ParseError(path, row.line,
                         "applicants differ within market '" + market + "'");
      if (row.rank != static_cast<int>(i) + 1)
        throw ParseError(path, row.line,
                         "ranks for market '" + market +
                             "' must be contiguous from 1");
      if (row.unmatched.has_value() != with_unmatched)
        throw ParseError(path, row.line,
                         "unmatched_at_length must be given for all ranks of "
                         "a market or none");
      counts.matched_by_rank.push_back(row.matched);
      if (with_unmatched)
        counts.unmatched_by_list_length->push_back(*row.unmatched);
    }
    result.push_back(std::move(counts));
  }
  return result;
}

AggregateCounts counts_from_json_object(const std::string& path,
                                        const nlohmann::json& node) {
  try {
    AggregateCounts counts;
    counts.market_label = node.at("market").get<std::string>();
    counts.applicants = node.at("applicants").get<long long>();
    counts.matched_by_rank =
        node.at("matched_by_rank").get<std::vector<long long>>();
    if (node.contains("unmatched_by_list_length") &&
        !node["unmatched_by_list_length"].is_null())
      counts.unmatched_by_list_length =
          node["unmatched_by_list_length"].get<std::vector<long long>>();
    return counts;
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(path, 0, err.what());
  }
}

MarketObservation observation_from_json_object(const std::string& path,
                                               const nlohmann::json& node) {
  try {
    MarketObservation obs;
    obs.label = node.at("market").get<std::string>();
    obs.P1 = node.at("P1").get<double>();
    obs.P2 = node.at("P2").get<double>();
    obs.L = node.at("L").get<int>();
    return obs;
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(path, 0, err.what());
  }
}

}  // namespace

std::vector<AggregateCounts> load_counts(const std::string& path) {
  std::vector<AggregateCounts> result;
  if (ends_with(path, ".json")) {
    const nlohmann::json doc = read_json(path);
    if (doc.is_array()) {
      for (const auto& node : doc)
        result.push_back(counts_from_json_object(path, node));
    } else {
      result.push_back(counts_from_json_object(path, doc));
    }
  } else if (ends_with(path, ".csv")) {
    result = counts_from_csv(path);
  } else {
    throw ParseError(path, 0, "unsupported extension (expected .csv or .json)");
  }
  for (const AggregateCounts& counts : result) counts.validate();
  return result;
}

std::vector<MarketObservation> load_observations(const std::string& path) {
  std::vector<MarketObservation> result;
  if (ends_with(path, ".json")) {
    const nlohmann::json doc = read_json(path);
    if (!doc.is_array()) throw ParseError(path, 0, "expected a JSON array");
    for (const auto& node : doc)
      result.push_back(observation_from_json_object(path, node));
    for (const MarketObservation& obs : result) obs.validate();
    return result;
  }
  if (!ends_with(path, ".csv"))
    throw ParseError(path, 0, "unsupported extension (expected .csv or .json)");

  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw ParseError(path, 1, "missing header");
  const std::vector<std::string> expected = {"market", "P1", "P2", "L"};
  if (csv::split(path, 1, lines[0]) != expected)
    throw ParseError(path, 1, "expected header 'market,P1,P2,L'");
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const int line = static_cast<int>(n) + 1;
    if (csv::trim(lines[n]).empty()) continue;
    const std::vector<std::string> f = csv::split(path, line, lines[n]);
    if (f.size() != expected.size())
      throw ParseError(path, line, "expected 4 fields");
    MarketObservation obs;
    obs.label = f[0];
    obs.P1 = parse_real(path, line, f[1], "P1");
    obs.P2 = parse_real(path, line, f[2], "P2");
    obs.L = static_cast<int>(parse_count(path, line, f[3], "L"));
    try {
      obs.validate();
    } catch (const InvalidObservation& err) {
      throw ParseError(path, line, err.what());
    }
    result.push_back(std::move(obs));
  }
  return result;
}

}  // namespace pmatch
