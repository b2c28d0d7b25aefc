#include "pmatch/analytics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pmatch/errors.hpp"

namespace pmatch::analytics {

namespace {

void check_rank(const ModelParams& params, int k) {
  if (k < 1 || k > params.L)
    throw std::invalid_argument("rank k = " + std::to_string(k) +
                                " outside 1.." + std::to_string(params.L));
}

}  // namespace

double p_first(const ModelParams& params) {
  params.validate();
  const double ae = params.a * params.e;
  return 1.0 - (1.0 - params.a) * std::pow(1.0 - ae, params.L - 1);
}

double p_later(const ModelParams& params) {
  params.validate();
  const double ae = params.a * params.e;
  return params.a * (1.0 - params.e) / (1.0 - ae);
}

double rank_loss(const ModelParams& params) {
  params.validate();
  const int L = params.L;
  const double a = params.a;
  const double ae = a * params.e;
  double total = 0.0;
  double p_best_accept = a;  // (1-a)^{i-1} a
  for (int i = 1; i <= L - 1; ++i) {
    double inner = 0.0;
    double p_first_pressure = ae;  // (1-ae)^{d-1} ae
    for (int d = 1; d <= L - i; ++d) {
      inner += p_first_pressure * d;
      p_first_pressure *= 1.0 - ae;
    }
    total += p_best_accept * (1.0 - params.e) * inner;
    p_best_accept *= 1.0 - a;
  }
  return total;
}

double rank_loss_random(const ModelParams& params) {
  params.validate();
  const int L = params.L;
  const double a = params.a;
  const double miss_all = std::pow(1.0 - a, L);
  double expected_best = 0.0;  // a * sum_i i (1-a)^{i-1}
  double term = a;
  for (int i = 1; i <= L; ++i) {
    expected_best += term * i;
    term *= 1.0 - a;
  }
  expected_best /= 1.0 - miss_all;
  return (1.0 - miss_all) * (0.5 * (L + 1) - expected_best);
}

double type1_error_no_swap(const ModelParams& params, int k) {
  params.validate();
  check_rank(params, k);
  if (k == 1) return 0.0;  // first-position compliance is fully verifiable
  const double ae = params.a * params.e;
  return 1.0 - std::pow(1.0 - params.a, k - 1) * std::pow(1.0 - ae, params.L - k);
}

double type1_error_with_swap(const ModelParams& params, int k) {
  params.validate();
  check_rank(params, k);
  const double eps = params.epsilon;
  if (k == 1)
    return eps * type1_error_no_swap(params, 2) +
           (1.0 - eps) * type1_error_no_swap(params, 1);
  if (k == 2)
    return eps * type1_error_no_swap(params, 1) +
           (1.0 - eps) * type1_error_no_swap(params, 2);
  return type1_error_no_swap(params, k);  // swap touches ranks 1 and 2 only
}

double q_lower_bound(const ModelParams& params) {
  return type1_error_no_swap(params, 2);
}

double permutation_rank_loss(double a, double epsilon) {
  if (!(a > 0.0 && a < 1.0))
    throw std::invalid_argument("permutation_rank_loss: a must be in (0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 0.5))
    throw std::invalid_argument(
        "permutation_rank_loss: epsilon must be in [0, 1/2]");
  return a * a * epsilon;
}

bool alpha_feasible(double a, double alpha) { return alpha <= a / 2; }

double epsilon_for_alpha(double a, double alpha) {
  if (!(a > 0.0 && a < 1.0))
    throw std::invalid_argument("epsilon_for_alpha: a must be in (0, 1)");
  if (!(alpha > 0.0))
    throw std::invalid_argument("epsilon_for_alpha: alpha must be positive");
  if (!alpha_feasible(a, alpha)) throw InfeasibleAlpha(alpha, a);
  return alpha / a;
}

double quantile_loss(double rank_loss, int L) {
  if (L < 2) throw std::invalid_argument("quantile_loss: L must be >= 2");
  if (!(rank_loss >= 0.0))
    throw std::invalid_argument("quantile_loss: rank loss must be >= 0");
  return rank_loss / (L + 1);
}

}  // namespace pmatch::analytics
