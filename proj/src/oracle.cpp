#include "pmatch/oracle.hpp"

#include <algorithm>

namespace pmatch::oracle {

namespace detail {

void check_cap(const ModelParams& params, int cap) {
  params.validate();
  if (params.L > cap) throw CapExceeded(params.L, cap);
}

}  // namespace detail

namespace {

// Compensated (Kahan) accumulator; keeps 3^L-term sums reproducible to well
// below the 1e-12 agreement tolerance regardless of summation length.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

std::vector<Configuration> enumerate_all(const ModelParams& params, int cap) {
  std::vector<Configuration> configs;
  enumerate(params, [&](const Configuration& c) { configs.push_back(c); }, cap);
  return configs;
}

std::vector<double> exact_conditional_match_rates(const ModelParams& params,
                                                  int cap) {
  const int L = params.L;
  std::vector<KahanSum> matched_at(L), reached(L);
  enumerate(
      params,
      [&](const Configuration& c) {
        const RankOrderList submitted =
            build_submitted_list(c.pressure, L);
        for (int k = 1; k <= L; ++k) {
          reached[k - 1].add(c.weight);
          if (c.acceptance.members.contains(submitted.entry(k))) {
            matched_at[k - 1].add(c.weight);
            break;
          }
        }
      },
      cap);
  std::vector<double> rates(L);
  for (int k = 0; k < L; ++k) {
    if (reached[k].sum <= 0.0)
      throw DegenerateCondition(
          "conditional match rate: zero mass reaching rank " +
          std::to_string(k + 1));
    rates[k] = matched_at[k].sum / reached[k].sum;
  }
  return rates;
}

double exact_rank_loss(const ModelParams& params, int cap) {
  KahanSum total;
  enumerate(
      params,
      [&](const Configuration& c) {
        if (c.acceptance.members.empty()) return;
        total.add(c.weight * realized_rank_loss(c.acceptance, c.pressure,
                                                params.L, false));
      },
      cap);
  return total.sum;
}

double exact_rank_loss_random(const ModelParams& params, int cap) {
  KahanSum total;
  enumerate(
      params,
      [&](const Configuration& c) {
        const ProgramSet accepted = c.acceptance.members;
        if (accepted.empty()) return;
        long long rank_sum = 0;
        for (int p = 1; p <= params.L; ++p)
          if (accepted.contains(p)) rank_sum += p;
        const double random_rank =
            static_cast<double>(rank_sum) / accepted.size();
        total.add(c.weight * (random_rank - accepted.min()));
      },
      cap);
  return total.sum;
}

double exact_type1_error(const ModelParams& params, int k, int cap) {
  detail::check_cap(params, cap);
  const int L = params.L;
  if (k < 1 || k > L)
    throw std::invalid_argument("exact_type1_error: rank out of range");
  // The model is exchangeable across programs, so fix the probe program at
  // index L and condition on it accepting and pressuring.
  const int probe = L;
  KahanSum fail_mass, condition_mass;
  enumerate(
      params,
      [&](const Configuration& c) {
        if (!c.pressure.members.contains(probe)) return;
        condition_mass.add(c.weight);
        const RankOrderList demanded =
            relocate_program(build_submitted_list(c.pressure, L), probe, k);
        // probe is accepted, so both matches exist
        const bool fail_plain =
            *match(demanded, c.acceptance).matched != probe;
        const bool fail_swapped =
            *match(swap_first_two(demanded), c.acceptance).matched != probe;
        // epsilon mixed analytically instead of enumerating a swap coin
        fail_mass.add(c.weight * ((1.0 - params.epsilon) * fail_plain +
                                  params.epsilon * fail_swapped));
      },
      cap);
  if (condition_mass.sum <= 0.0)
    throw DegenerateCondition(
        "type-I error: conditioning event (probe accepted and pressuring) "
        "has zero mass; requires a > 0 and e > 0");
  return fail_mass.sum / condition_mass.sum;
}

double exact_permutation_rank_loss(const ModelParams& params, int cap) {
  KahanSum total;
  const PressureSet no_pressure{};
  enumerate(
      params,
      [&](const Configuration& c) {
        if (c.acceptance.members.empty()) return;
        total.add(c.weight * params.epsilon *
                  realized_rank_loss(c.acceptance, no_pressure, params.L,
                                     true));
      },
      cap);
  return total.sum;
}

}  // namespace pmatch::oracle
