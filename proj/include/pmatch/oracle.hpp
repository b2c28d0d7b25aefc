#pragma once

#include <vector>

#include "pmatch/errors.hpp"
#include "pmatch/model.hpp"

// Exact ground truth by exhaustive enumeration. Each program is
// independently in one of three states (rejects / accepts silently /
// accepts and pressures), so the probability space has 3^L atoms; every
// expectation below is a weighted sum over all of them, accumulated with
// compensated summation so results are reproducible to well under 1e-12.

namespace pmatch::oracle {

inline constexpr int default_cap = 16;  // 3^16 ~ 43M configurations

// One atom of the probability space.
struct Configuration {
  AcceptanceSet acceptance;
  PressureSet pressure;
  double weight;  // a^|A| (1-a)^(L-|A|) e^|F| (1-e)^(|A|-|F|)
};

namespace detail {
void check_cap(const ModelParams& params, int cap);
}

// Visits all 3^L configurations exactly once, in base-3 counter order
// (program i's state is digit i-1: 0 rejects, 1 accepts silently,
// 2 accepts and pressures). Throws CapExceeded when L > cap.
template <class Visitor>
void enumerate(const ModelParams& params, Visitor&& visit,
               int cap = default_cap) {
  detail::check_cap(params, cap);
  const int L = params.L;
  const double w[3] = {1.0 - params.a, params.a * (1.0 - params.e),
                       params.a * params.e};
  std::vector<int> state(L, 0);
  for (;;) {
    Configuration config;
    config.weight = 1.0;
    for (int i = 0; i < L; ++i) {
      config.weight *= w[state[i]];
      if (state[i] >= 1) config.acceptance.members.insert(i + 1);
      if (state[i] == 2) config.pressure.members.insert(i + 1);
    }
    visit(static_cast<const Configuration&>(config));
    int pos = 0;
    while (pos < L && state[pos] == 2) state[pos++] = 0;
    if (pos == L) break;
    ++state[pos];
  }
}

std::vector<Configuration> enumerate_all(const ModelParams& params,
                                         int cap = default_cap);

// Conditional match rates P_1..P_L computed from the raw conditional
// definition (mass matched exactly at list position k over mass with all
// earlier positions rejected), not from the closed forms.
std::vector<double> exact_conditional_match_rates(const ModelParams& params,
                                                  int cap = default_cap);

// E[rank under the pressured list - rank under the truthful list].
double exact_rank_loss(const ModelParams& params, int cap = default_cap);

// E[random accepting rank - best accepting rank], zero when nothing accepts.
double exact_rank_loss_random(const ModelParams& params,
                              int cap = default_cap);

// Type-I error of the compliance test: conditions on the pressuring program
// (fixed at index L; the model is exchangeable) being accepted and
// pressuring, relocates it to list position k with the others' relative
// order preserved, and mixes the swap analytically with weight epsilon.
// Throws DegenerateCondition when the conditioning mass is zero (e = 0).
double exact_type1_error(const ModelParams& params, int k,
                         int cap = default_cap);

// E[eps * (rank under swapped truthful list - rank under truthful list)].
double exact_permutation_rank_loss(const ModelParams& params,
                                   int cap = default_cap);

}  // namespace pmatch::oracle
