#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pmatch/analytics.hpp"
#include "pmatch/oracle.hpp"

using namespace pmatch;
namespace an = pmatch::analytics;

namespace {

bool near(double x, double y, double tol) { return std::abs(x - y) <= tol; }

double total_weight(const ModelParams& params) {
  double total = 0.0;
  oracle::enumerate(params,
                    [&](const oracle::Configuration& c) { total += c.weight; });
  return total;
}

}  // namespace

TEST_CASE("enumeration visits 3^L configurations with unit total mass") {
  const ModelParams params{2, 0.37, 0.21, 0.0};
  const auto configs = oracle::enumerate_all(params);
  CHECK(configs.size() == 9);
  CHECK(near(total_weight(params), 1.0, 1e-12));
  for (const auto& c : configs)
    CHECK(c.pressure.members.subset_of(c.acceptance.members));

  const ModelParams larger{7, 0.123, 0.456, 0.25};
  CHECK(oracle::enumerate_all(larger).size() == 2187);
  CHECK(near(total_weight(larger), 1.0, 1e-12));
}

TEST_CASE("configuration weights are per-program state products") {
  // A = {1,2}, F = {2} under a = e = 0.5: a(1-e) * ae * (1-a) = 0.03125
  const ModelParams params{3, 0.5, 0.5, 0.0};
  bool found = false;
  oracle::enumerate(params, [&](const oracle::Configuration& c) {
    if (c.acceptance.members == ProgramSet::of({1, 2}) &&
        c.pressure.members == ProgramSet::of({2})) {
      CHECK(c.weight == 0.03125);
      found = true;
    }
  });
  CHECK(found);
}

TEST_CASE("weights follow a^|A| (1-a)^(L-|A|) e^|F| (1-e)^(|A|-|F|)") {
  const ModelParams params{5, 0.37, 0.62, 0.0};
  oracle::enumerate(params, [&](const oracle::Configuration& c) {
    const int accepted = c.acceptance.members.size();
    const int pressuring = c.pressure.members.size();
    const double expected = std::pow(params.a, accepted) *
                            std::pow(1.0 - params.a, params.L - accepted) *
                            std::pow(params.e, pressuring) *
                            std::pow(1.0 - params.e, accepted - pressuring);
    CHECK(near(c.weight, expected, 1e-15));
  });
}

TEST_CASE("enumeration cap") {
  CHECK_THROWS_AS(oracle::exact_rank_loss(ModelParams{17, 0.5, 0.5, 0.0}),
                  CapExceeded);
  CHECK_THROWS_AS(oracle::exact_rank_loss(ModelParams{5, 0.5, 0.5, 0.0}, 4),
                  CapExceeded);
  try {
    oracle::enumerate_all(ModelParams{18, 0.5, 0.5, 0.0});
    FAIL("expected CapExceeded");
  } catch (const CapExceeded& err) {
    CHECK(err.L == 18);
    CHECK(err.cap == oracle::default_cap);
  }
}

TEST_CASE("conditional rates without pressure are flat at a") {
  const ModelParams params{5, 0.42, 0.0, 0.0};
  for (double rate : oracle::exact_conditional_match_rates(params))
    CHECK(near(rate, 0.42, 1e-13));
}

TEST_CASE("conditional rates show the first-rank premium and flat tail") {
  const ModelParams params{3, 0.5783, 0.2707, 0.0};
  const auto rates = oracle::exact_conditional_match_rates(params);
  CHECK(near(rates[0], 0.7, 1e-3));
  CHECK(near(rates[1], 0.5, 1e-3));
  CHECK(near(rates[2], 0.5, 1e-3));
  CHECK(rates[0] > rates[1]);
  CHECK(near(rates[1], rates[2], 1e-12));
}

TEST_CASE("closed forms agree with enumeration across a parameter grid") {
  for (int L = 2; L <= 8; ++L) {
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      for (double e : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const ModelParams params{L, a, e, 0.0};
        const auto rates = oracle::exact_conditional_match_rates(params);
        CHECK(near(rates[0], an::p_first(params), 1e-12));
        for (int k = 2; k <= L; ++k)
          CHECK(near(rates[k - 1], an::p_later(params), 1e-12));
        CHECK(near(oracle::exact_rank_loss(params), an::rank_loss(params),
                   1e-12));
        CHECK(near(oracle::exact_rank_loss_random(params),
                   an::rank_loss_random(params), 1e-12));
      }
    }
  }
}

TEST_CASE("exact rank loss reproduces the published markets") {
  CHECK(near(oracle::exact_rank_loss(ModelParams{3, 0.5783, 0.2707, 0.0}),
             0.2053, 1e-3));
  CHECK(near(oracle::exact_rank_loss(ModelParams{4, 0.5599, 0.2141, 0.0}),
             0.3425, 1e-3));
  CHECK(near(oracle::exact_rank_loss(ModelParams{10, 0.3232, 0.1024, 0.0}),
             0.7740, 1e-3));
}

TEST_CASE("exact type-I error is zero at rank one without the swap") {
  CHECK(oracle::exact_type1_error(ModelParams{6, 0.37, 0.48, 0.0}, 1) == 0.0);
}

TEST_CASE("exact type-I error matches the closed form including the swap") {
  for (int L : {2, 4, 6}) {
    for (double a : {0.2, 0.6}) {
      for (double e : {0.3, 0.8}) {
        for (double eps : {0.0, 0.25, 0.5}) {
          const ModelParams params{L, a, e, eps};
          for (int k = 1; k <= L; ++k)
            CHECK(near(oracle::exact_type1_error(params, k),
                       an::type1_error_with_swap(params, k), 1e-12));
        }
      }
    }
  }
}

TEST_CASE("exact type-I error at the published market") {
  const ModelParams params{10, 0.3232, 0.1024, 0.0};
  CHECK(near(oracle::exact_type1_error(params, 2), 0.4829, 1e-3));
}

TEST_CASE("swapped rank-one type-I error tends to a*eps without pressure") {
  const ModelParams params{5, 0.5, 1e-12, 0.3};
  CHECK(near(oracle::exact_type1_error(params, 1), 0.15, 1e-9));
}

TEST_CASE("type-I conditioning degenerates without pressure") {
  CHECK_THROWS_AS(oracle::exact_type1_error(ModelParams{4, 0.5, 0.0, 0.0}, 2),
                  DegenerateCondition);
}

TEST_CASE("exact permutation rank loss is a^2 eps") {
  CHECK(oracle::exact_permutation_rank_loss(ModelParams{4, 0.4, 0.2, 0.0}) ==
        0.0);
  CHECK(near(oracle::exact_permutation_rank_loss(ModelParams{3, 0.5, 0.7, 0.5}),
             0.125, 1e-15));
  for (double a : {0.1, 0.5, 0.9})
    for (double eps : {0.1, 0.25, 0.5})
      CHECK(near(
          oracle::exact_permutation_rank_loss(ModelParams{6, a, 0.3, eps}),
          a * a * eps, 1e-12));
  CHECK(near(oracle::exact_permutation_rank_loss(
                 ModelParams{10, 0.3232, 0.1024, 0.15 / 0.3232}),
             0.0485, 1e-3));
}

TEST_CASE("out-of-range ranks are rejected") {
  const ModelParams params{4, 0.5, 0.5, 0.0};
  CHECK_THROWS_AS(oracle::exact_type1_error(params, 0), std::invalid_argument);
  CHECK_THROWS_AS(oracle::exact_type1_error(params, 5), std::invalid_argument);
}
