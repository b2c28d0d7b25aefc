#include "pmatch/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace pmatch::mc {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

constexpr std::uint64_t block_size = 1u << 16;
constexpr std::uint64_t low_confidence_threshold = 100;

// Platform-independent uniform in [0, 1): top 53 bits of the raw draw.
double canonical(std::uint64_t raw) { return (raw >> 11) * 0x1.0p-53; }

// Integer partial sums; exact, so merge order cannot perturb results.
struct Partials {
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> reached;     // per rank: earlier positions all rejected
  std::vector<std::uint64_t> matched_at;  // per rank: matched exactly there
  std::int64_t loss_sum = 0;
  std::int64_t loss_sq = 0;
  std::int64_t swap_loss_sum = 0;
  std::int64_t swap_loss_sq = 0;
  std::int64_t rand_loss_sum = 0;
  std::int64_t rand_loss_sq = 0;
  std::uint64_t probe_trials = 0;          // probe program accepted+pressuring
  std::vector<std::uint64_t> probe_fail;   // per demanded rank

  explicit Partials(int L)
      : reached(L, 0), matched_at(L, 0), probe_fail(L, 0) {}

  void merge(const Partials& other) {
    trials += other.trials;
    for (std::size_t i = 0; i < reached.size(); ++i) {
      reached[i] += other.reached[i];
      matched_at[i] += other.matched_at[i];
      probe_fail[i] += other.probe_fail[i];
    }
    loss_sum += other.loss_sum;
    loss_sq += other.loss_sq;
    swap_loss_sum += other.swap_loss_sum;
    swap_loss_sq += other.swap_loss_sq;
    rand_loss_sum += other.rand_loss_sum;
    rand_loss_sq += other.rand_loss_sq;
    probe_trials += other.probe_trials;
  }
};

void run_block(const ModelParams& params, std::uint64_t master_seed,
               std::uint64_t block, std::uint64_t trials, Partials& out) {
  const int L = params.L;
  std::mt19937_64 rng(splitmix64(master_seed + block));
  const PressureSet no_pressure{};
  for (std::uint64_t t = 0; t < trials; ++t) {
    ProgramSet accepted, pressuring;
    for (int i = 1; i <= L; ++i) {
      if (canonical(rng()) < params.a) {
        accepted.insert(i);
        if (canonical(rng()) < params.e) pressuring.insert(i);
      }
    }
    const bool swapped = canonical(rng()) < params.epsilon;
    const AcceptanceSet A{accepted};
    const PressureSet F{pressuring};
    const RankOrderList submitted = build_submitted_list(F, L);

    // Conditional match rates are a property of the submitted list, before
    // any intervention.
    int match_position = L + 1;
    for (int k = 1; k <= L; ++k) {
      if (accepted.contains(submitted.entry(k))) {
        match_position = k;
        break;
      }
    }
    for (int k = 1; k <= L && k <= match_position; ++k) {
      ++out.reached[k - 1];
      if (k == match_position) ++out.matched_at[k - 1];
    }

    const std::int64_t loss = realized_rank_loss(A, F, L, false);
    out.loss_sum += loss;
    out.loss_sq += loss * loss;

    const std::int64_t swap_loss =
        swapped ? realized_rank_loss(A, no_pressure, L, true) : 0;
    out.swap_loss_sum += swap_loss;
    out.swap_loss_sq += swap_loss * swap_loss;

    std::int64_t rand_loss = 0;
    if (!accepted.empty()) {
      const int size = accepted.size();
      int pick = static_cast<int>(canonical(rng()) * size);
      if (pick >= size) pick = size - 1;
      int rank = 0;
      for (int p = 1; p <= L; ++p) {
        if (accepted.contains(p) && pick-- == 0) {
          rank = p;
          break;
        }
      }
      rand_loss = rank - accepted.min();
    }
    out.rand_loss_sum += rand_loss;
    out.rand_loss_sq += rand_loss * rand_loss;

    // Type-I error probes: condition on program L accepting and pressuring,
    // then evaluate compliance at every demanded rank.
    if (pressuring.contains(L)) {
      ++out.probe_trials;
      for (int k = 1; k <= L; ++k) {
        RankOrderList demanded = relocate_program(submitted, L, k);
        if (swapped) demanded = swap_first_two(demanded);
        if (*match(demanded, A).matched != L) ++out.probe_fail[k - 1];
      }
    }
    ++out.trials;
  }
}

EstimateWithError from_sums(std::int64_t sum, std::int64_t sum_sq,
                            std::uint64_t n) {
  EstimateWithError est;
  est.trials = n;
  if (n == 0) {
    est.mean = std::numeric_limits<double>::quiet_NaN();
    est.low_confidence = true;
    return est;
  }
  const double nd = static_cast<double>(n);
  est.mean = static_cast<double>(sum) / nd;
  if (n >= 2) {
    const double var =
        (static_cast<double>(sum_sq) - nd * est.mean * est.mean) / (nd - 1.0);
    est.std_error = std::sqrt(std::max(var, 0.0) / nd);
  }
  return est;
}

EstimateWithError from_counts(std::uint64_t successes, std::uint64_t n) {
  EstimateWithError est = from_sums(static_cast<std::int64_t>(successes),
                                    static_cast<std::int64_t>(successes), n);
  est.low_confidence = n < low_confidence_threshold;
  return est;
}

}  // namespace

SimulationResult simulate_statistics(const SimulationConfig& config) {
  config.params.validate();
  if (config.trials < 1)
    throw std::invalid_argument("simulate_statistics: trials must be >= 1");

  const int L = config.params.L;
  const std::uint64_t blocks = (config.trials + block_size - 1) / block_size;
  std::vector<Partials> partials(blocks, Partials(L));

  const auto block_trials = [&](std::uint64_t b) {
    return b + 1 < blocks ? block_size : config.trials - b * block_size;
  };

  if (blocks == 1) {
    run_block(config.params, config.seed, 0, config.trials, partials[0]);
  } else {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t workers =
        std::min<std::uint64_t>(hw, blocks);
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t b = next.fetch_add(1); b < blocks;
             b = next.fetch_add(1))
          run_block(config.params, config.seed, b, block_trials(b),
                    partials[b]);
      });
    }
    for (auto& t : pool) t.join();
  }

  Partials total(L);
  for (const Partials& p : partials) total.merge(p);  // block order

  SimulationResult result;
  result.conditional_rates.reserve(L);
  result.type1_error.reserve(L);
  for (int k = 0; k < L; ++k)
    result.conditional_rates.push_back(
        from_counts(total.matched_at[k], total.reached[k]));
  result.rank_loss = from_sums(total.loss_sum, total.loss_sq, total.trials);
  result.permutation_rank_loss =
      from_sums(total.swap_loss_sum, total.swap_loss_sq, total.trials);
  result.random_assignment_rank_loss =
      from_sums(total.rand_loss_sum, total.rand_loss_sq, total.trials);
  for (int k = 0; k < L; ++k)
    result.type1_error.push_back(
        from_counts(total.probe_fail[k], total.probe_trials));
  return result;
}

}  // namespace pmatch::mc
