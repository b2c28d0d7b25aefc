#pragma once

#include <cstdint>
#include <vector>

#include "pmatch/model.hpp"

// Seeded Monte Carlo simulation of the full generative pipeline: draw the
// acceptance set, draw pressure among accepting programs, build the
// submitted list, apply the swap coin, match, and accumulate every
// statistic in one pass.
//
// Determinism: trials are split into fixed blocks of 65536; block b uses an
// mt19937_64 stream seeded with splitmix64(seed + b). Per-block partial sums
// are integers merged in block order, so results are bit-identical for a
// given (params, trials, seed) regardless of thread count.

namespace pmatch::mc {

struct SimulationConfig {
  ModelParams params;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
};

struct EstimateWithError {
  double mean = 0.0;
  double std_error = 0.0;       // sample sd / sqrt(n)
  std::uint64_t trials = 0;     // effective (conditioned) sample size
  bool low_confidence = false;  // conditioned on fewer than 100 samples
};

struct SimulationResult {
  // P_k estimates, ratio-of-counts form: trials matched exactly at list
  // position k over trials with every earlier position rejected.
  std::vector<EstimateWithError> conditional_rates;
  EstimateWithError rank_loss;             // pressured vs truthful list
  EstimateWithError permutation_rank_loss; // swap coin on a truthful list
  EstimateWithError random_assignment_rank_loss;
  // Type-I error estimates Q_{->k}, conditioned on trials where the probe
  // program (index L) accepts and pressures; the swap coin is applied.
  std::vector<EstimateWithError> type1_error;
};

// Deterministic under a fixed config; see the block-splitting note above.
SimulationResult simulate_statistics(const SimulationConfig& config);

// 64-bit finalizer used to derive per-block streams from the master seed.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace pmatch::mc
