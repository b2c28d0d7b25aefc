#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "pmatch/analytics.hpp"
#include "pmatch/calibration.hpp"

using namespace pmatch;

namespace {

bool near(double x, double y, double tol) { return std::abs(x - y) <= tol; }

// Fixture file removed when the test ends.
class TempFile {
 public:
  TempFile(const std::string& name, const std::string& content)
      : path_(std::filesystem::temp_directory_path() /
              ("pmatch_test_" + std::to_string(counter_++) + "_" + name)) {
    std::ofstream out(path_);
    out << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

}  // namespace

TEST_CASE("approximate rates divide by applicants minus earlier matches") {
  AggregateCounts counts;
  counts.market_label = "toy";
  counts.applicants = 100;
  counts.matched_by_rank = {50, 15};
  const ConditionalRates rates = rates_from_counts(counts);
  CHECK_FALSE(rates.used_exact_formula);
  CHECK(rates.rates == std::vector<double>{0.5, 0.3});
}

TEST_CASE("exact rates also remove unmatched applicants with short lists") {
  AggregateCounts counts;
  counts.market_label = "toy";
  counts.applicants = 100;
  counts.matched_by_rank = {70, 10};
  counts.unmatched_by_list_length = {{10, 0}};
  const ConditionalRates rates = rates_from_counts(counts);
  CHECK(rates.used_exact_formula);
  CHECK(rates.rates[0] == 0.7);
  CHECK(rates.rates[1] == 0.5);  // 10 / (100 - 70 - 10)
}

TEST_CASE("zero matches at a rank give a zero rate") {
  AggregateCounts counts;
  counts.market_label = "toy";
  counts.applicants = 10;
  counts.matched_by_rank = {0, 4};
  const ConditionalRates rates = rates_from_counts(counts);
  CHECK(rates.rates[0] == 0.0);
  CHECK(rates.rates[1] == 0.4);
}

TEST_CASE("all-zero unmatched counts reduce to the approximate formula") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    AggregateCounts counts;
    counts.market_label = "toy";
    counts.applicants = 1000;
    long long remaining = 900;
    const int ranks = 2 + static_cast<int>(rng() % 5);
    for (int k = 0; k < ranks; ++k) {
      const long long matched =
          static_cast<long long>(rng() % (remaining / 2 + 1));
      counts.matched_by_rank.push_back(matched);
      remaining -= matched;
    }
    AggregateCounts with_zeros = counts;
    with_zeros.unmatched_by_list_length =
        std::vector<long long>(counts.matched_by_rank.size(), 0);
    CHECK(rates_from_counts(counts).rates ==
          rates_from_counts(with_zeros).rates);
  }
}

TEST_CASE("denominator diagnostics name the offending rank") {
  AggregateCounts zero;
  zero.market_label = "toy";
  zero.applicants = 50;
  zero.matched_by_rank = {50, 0};  // everyone matched first; rank 2 undefined
  try {
    rates_from_counts(zero);
    FAIL("expected ZeroDenominator");
  } catch (const ZeroDenominator& err) {
    CHECK(err.rank == 2);
  }

  AggregateCounts negative;
  negative.market_label = "toy";
  negative.applicants = 100;
  negative.matched_by_rank = {60, 1};
  negative.unmatched_by_list_length = {{50, 0}};
  try {
    rates_from_counts(negative);
    FAIL("expected NegativeDenominator");
  } catch (const NegativeDenominator& err) {
    CHECK(err.rank == 2);
  }
}

TEST_CASE("inconsistent counts are rejected") {
  AggregateCounts counts;
  counts.market_label = "toy";
  counts.applicants = 10;
  counts.matched_by_rank = {8, 4};
  CHECK_THROWS_AS(rates_from_counts(counts), std::invalid_argument);
  counts.matched_by_rank = {-1};
  CHECK_THROWS_AS(rates_from_counts(counts), std::invalid_argument);
  counts.matched_by_rank = {4, 4};
  counts.unmatched_by_list_length = {{1}};  // wrong length
  CHECK_THROWS_AS(rates_from_counts(counts), std::invalid_argument);
}

TEST_CASE("calibration reproduces the published parameter estimates") {
  const CalibratedParams us = calibrate({"U.S.", 0.5, 0.3, 10});
  CHECK(near(us.a, 0.3232, 5e-5));
  CHECK(near(us.e, 0.1024, 5e-5));
  const CalibratedParams jp3 = calibrate({"Japan", 0.7, 0.5, 3});
  CHECK(near(jp3.a, 0.5783, 5e-5));
  CHECK(near(jp3.e, 0.2707, 5e-5));
  const CalibratedParams jp4 = calibrate({"Japan", 0.7, 0.5, 4});
  CHECK(near(jp4.a, 0.5599, 5e-5));
  CHECK(near(jp4.e, 0.2141, 5e-5));
}

TEST_CASE("calibration round-trips through the closed forms") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (int trial = 0; trial < 1000; ++trial) {
    const double p1 = unit(rng);
    const double p2 = unit(rng);
    if (!(p2 < p1)) continue;
    const int L = 2 + static_cast<int>(rng() % 29);
    const MarketObservation obs{"rt", p1, p2, L};
    const CalibratedParams cal = calibrate(obs);
    CHECK(cal.a > 0.0);
    CHECK(cal.a < 1.0);
    CHECK(cal.e > 0.0);
    CHECK(cal.e < 1.0);
    const ModelParams params{L, cal.a, cal.e, 0.0};
    CHECK(near(analytics::p_first(params), p1, 1e-10));
    CHECK(near(analytics::p_later(params), p2, 1e-10));
  }
}

TEST_CASE("calibrated a rises with P1 and e falls as P2 approaches P1") {
  double previous_a = 0.0;
  for (double p1 : {0.35, 0.45, 0.55, 0.65}) {
    const double a = calibrate({"m", p1, 0.3, 10}).a;
    CHECK(a > previous_a);
    previous_a = a;
  }
  double previous_e = 1.0;
  for (double p2 : {0.30, 0.38, 0.44, 0.49}) {
    const double e = calibrate({"m", 0.5, p2, 10}).e;
    CHECK(e < previous_e);
    previous_e = e;
  }
  CHECK(calibrate({"m", 0.5, 0.5 - 1e-9, 10}).e < 1e-6);
}

TEST_CASE("observations without a first-rank premium are rejected") {
  try {
    calibrate({"flat", 0.4, 0.4, 10});
    FAIL("expected InvalidObservation");
  } catch (const InvalidObservation& err) {
    CHECK(std::string(err.what()).find("no first-rank premium observed") !=
          std::string::npos);
  }
  CHECK_THROWS_AS(calibrate({"inverted", 0.3, 0.5, 10}), InvalidObservation);
  CHECK_THROWS_AS(calibrate({"bounds", 1.0, 0.5, 10}), InvalidObservation);
  CHECK_THROWS_AS(calibrate({"bounds", 0.5, 0.0, 10}), InvalidObservation);
  CHECK_THROWS_AS(calibrate({"short", 0.5, 0.3, 1}), InvalidObservation);
}

TEST_CASE("key statistics assemble one published row per market") {
  const analytics::KeyStatistics us = key_statistics({"U.S.", 0.5, 0.3, 10}, 0.15);
  CHECK(near(us.a, 0.3232, 2e-3));
  CHECK(near(us.e, 0.1024, 2e-3));
  CHECK(near(us.rank_loss, 0.7740, 2e-3));
  CHECK(near(us.rank_loss_random, 2.5588, 2e-3));
  CHECK(near(us.q_lower, 0.4829, 2e-3));
  REQUIRE(us.prl_alpha.has_value());
  CHECK(near(*us.prl_alpha, 0.0485, 2e-3));
  CHECK(near(us.quantile_loss, 0.0704, 2e-3));
  CHECK(us.quantile_loss == us.rank_loss / 11);
}

TEST_CASE("an infeasible alpha leaves the intervention loss empty") {
  const analytics::KeyStatistics row =
      key_statistics({"Japan", 0.7, 0.5, 3}, 0.4);  // a/2 ~ 0.289 < 0.4
  CHECK_FALSE(row.prl_alpha.has_value());
  CHECK(row.rank_loss > 0.0);  // the rest of the row is still filled
}

TEST_CASE("counts load from csv with optional unmatched column") {
  const TempFile file("counts.csv",
                      "market,applicants,rank,matched,unmatched_at_length\n"
                      "U.S.,100,1,50,\n"
                      "U.S.,100,2,15,\n"
                      "\"Japan, exact\",100,1,70,10\n"
                      "\"Japan, exact\",100,2,10,0\n");
  const auto markets = load_counts(file.path());
  REQUIRE(markets.size() == 2);
  CHECK(markets[0].market_label == "U.S.");
  CHECK_FALSE(markets[0].unmatched_by_list_length.has_value());
  CHECK(rates_from_counts(markets[0]).rates == std::vector<double>{0.5, 0.3});
  CHECK(markets[1].market_label == "Japan, exact");
  REQUIRE(markets[1].unmatched_by_list_length.has_value());
  CHECK(rates_from_counts(markets[1]).rates[1] == 0.5);
}

TEST_CASE("counts load from json, single object or array") {
  const TempFile object(
      "counts.json",
      R"({"market": "U.S.", "applicants": 100, "matched_by_rank": [50, 15],
          "unmatched_by_list_length": null})");
  const auto single = load_counts(object.path());
  REQUIRE(single.size() == 1);
  CHECK(rates_from_counts(single[0]).rates == std::vector<double>{0.5, 0.3});

  const TempFile array("counts.json",
                       R"([{"market": "A", "applicants": 10,
                            "matched_by_rank": [5]},
                           {"market": "B", "applicants": 20,
                            "matched_by_rank": [10, 5],
                            "unmatched_by_list_length": [2, 0]}])");
  const auto both = load_counts(array.path());
  REQUIRE(both.size() == 2);
  CHECK_FALSE(both[0].unmatched_by_list_length.has_value());
  CHECK(both[1].unmatched_by_list_length.has_value());
}

TEST_CASE("csv diagnostics carry file and line") {
  const TempFile bad_header("counts.csv", "market,applicants\nx,1\n");
  try {
    load_counts(bad_header.path());
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line == 1);
    CHECK(std::string(err.what()).find(bad_header.path()) !=
          std::string::npos);
  }

  const TempFile bad_value("counts.csv",
                           "market,applicants,rank,matched,unmatched_at_length\n"
                           "m,100,1,ten,\n");
  try {
    load_counts(bad_value.path());
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line == 2);
  }

  const TempFile inconsistent(
      "counts.csv",
      "market,applicants,rank,matched,unmatched_at_length\n"
      "m,100,1,10,\n"
      "m,90,2,5,\n");
  CHECK_THROWS_AS(load_counts(inconsistent.path()), ParseError);

  const TempFile gap("counts.csv",
                     "market,applicants,rank,matched,unmatched_at_length\n"
                     "m,100,1,10,\n"
                     "m,100,3,5,\n");
  CHECK_THROWS_AS(load_counts(gap.path()), ParseError);

  const TempFile mixed("counts.csv",
                       "market,applicants,rank,matched,unmatched_at_length\n"
                       "m,100,1,10,2\n"
                       "m,100,2,5,\n");
  CHECK_THROWS_AS(load_counts(mixed.path()), ParseError);

  const TempFile bad_json("counts.json", "{not json");
  CHECK_THROWS_AS(load_counts(bad_json.path()), ParseError);

  CHECK_THROWS_AS(load_counts("/nonexistent/file.csv"), ParseError);
  const TempFile wrong_ext("counts.txt", "whatever");
  CHECK_THROWS_AS(load_counts(wrong_ext.path()), ParseError);
}

TEST_CASE("observations load from csv and json") {
  const TempFile csv("obs.csv",
                     "market,P1,P2,L\n"
                     "U.S.,0.5,0.3,10\n"
                     "\n"
                     "Japan,0.7,0.5,3\n");
  const auto from_csv = load_observations(csv.path());
  REQUIRE(from_csv.size() == 2);
  CHECK(from_csv[0].label == "U.S.");
  CHECK(from_csv[0].P1 == 0.5);
  CHECK(from_csv[1].L == 3);

  const TempFile json("obs.json",
                      R"([{"market": "U.S.", "P1": 0.5, "P2": 0.3, "L": 10}])");
  const auto from_json = load_observations(json.path());
  REQUIRE(from_json.size() == 1);
  CHECK(from_json[0].L == 10);

  const TempFile invalid("obs.csv",
                         "market,P1,P2,L\n"
                         "flat,0.4,0.4,10\n");
  try {
    load_observations(invalid.path());
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line == 2);
    CHECK(std::string(err.what()).find("premium") != std::string::npos);
  }
}
