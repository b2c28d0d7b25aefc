#pragma once

#include <optional>

#include "pmatch/model.hpp"

// Closed-form statistics of the pressure/acceptance process. Every function
// here has an exact counterpart in pmatch::oracle computed by enumeration;
// the test suite keeps the two in agreement to 1e-12.

namespace pmatch::analytics {

// Conditional match rate of the first-listed program,
//   P1 = 1 - (1-a)(1-ae)^(L-1).
// Equals a when e = 0 and exceeds a otherwise.
double p_first(const ModelParams& params);

// Common conditional match rate of every later position,
//   Pk = a(1-e)/(1-ae)  for k >= 2.
double p_later(const ModelParams& params);

// Expected rank loss caused by pressure-induced list changes:
//   RL = sum_{i=1}^{L-1} (1-a)^{i-1} a (1-e)
//          sum_{d=1}^{L-i} (1-ae)^{d-1} (ae) d,
// summing over the best accepting rank i and the distance d to the best
// pressuring program below it. Vanishes in both limits e -> 0 and e -> 1.
double rank_loss(const ModelParams& params);

// Expected rank loss of a uniformly random accepting program relative to
// the best accepting one:
//   (1 - (1-a)^L) ((L+1)/2 - E[min A | A nonempty]).
// Depends on a and L only.
double rank_loss_random(const ModelParams& params);

// Type-I error under the original procedure: probability a compliant doctor
// who lists an accepting, pressuring program k-th is nonetheless not matched
// with it. Exactly 0 for k = 1; for k >= 2,
//   Q0_k = 1 - (1-a)^{k-1} (1-ae)^{L-k}.
double type1_error_no_swap(const ModelParams& params, int k);

// Type-I error with the swap intervention: the swap exchanges ranks 1 and 2
// with probability epsilon and leaves k > 2 untouched, so
//   Q_1 = eps Q0_2 + (1-eps) Q0_1,  Q_2 = eps Q0_1 + (1-eps) Q0_2.
double type1_error_with_swap(const ModelParams& params, int k);

// Lower bound over k >= 2 of the no-swap type-I error (attained at k = 2):
//   Q_lower = 1 - (1-a)(1-ae)^(L-2).
double q_lower_bound(const ModelParams& params);

// Expected rank loss caused solely by the swap intervention on a truthful
// list: a^2 eps (rank 2 replaces rank 1 exactly when both accept).
double permutation_rank_loss(double a, double epsilon);

// Returns true when a swap probability <= 1/2 can push the first-position
// type-I error up to alpha, i.e. alpha <= a/2.
bool alpha_feasible(double a, double alpha);

// Smallest swap probability attaining first-position type-I error alpha in
// the no-pressure limit: eps = alpha/a. Throws InfeasibleAlpha when
// alpha > a/2.
double epsilon_for_alpha(double a, double alpha);

// Rank loss expressed in match-value quantiles: RL/(L+1).
double quantile_loss(double rank_loss, int L);

// One row of the market summary table.
struct KeyStatistics {
  double a = 0;
  double e = 0;
  double rank_loss = 0;
  double rank_loss_random = 0;
  double q_lower = 0;
  std::optional<double> prl_alpha;  // empty when alpha > a/2 (infeasible)
  double quantile_loss = 0;
};

}  // namespace pmatch::analytics
