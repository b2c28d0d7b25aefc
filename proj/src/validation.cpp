#include "pmatch/validation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "pmatch/analytics.hpp"
#include "pmatch/montecarlo.hpp"
#include "pmatch/oracle.hpp"
#include "pmatch/report.hpp"

namespace pmatch::validation {

namespace {

constexpr double agreement_tol = 1e-12;
constexpr double round_trip_tol = 1e-10;
constexpr double mc_sigma_tol = 4.0;  // standard errors

std::string describe(const ModelParams& p) {
  char buffer[96];
  std::snprintf(buffer, sizeof buffer, "a=%.3f e=%.3f L=%d eps=%.3f", p.a, p.e,
                p.L, p.epsilon);
  return buffer;
}

// Tracks the worst deviation seen and where it happened.
struct Worst {
  double value = 0;
  std::string where;

  void consider(double dev, const std::string& at) {
    if (dev > value || where.empty()) {
      value = dev;
      where = at;
    }
  }
};

CheckResult to_check(const std::string& name, const Worst& worst,
                     double tolerance) {
  return CheckResult{name, worst.value, tolerance, worst.value <= tolerance,
                     worst.where};
}

double sigma_distance(double estimate, double exact, double std_error) {
  const double dev = std::abs(estimate - exact);
  if (std_error == 0.0)
    return dev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return dev / std_error;
}

}  // namespace

Report run(const Options& options, const AnalyticOverrides& overrides) {
  if (options.max_L < 2)
    throw std::invalid_argument("validation: max_L must be at least 2");
  if (options.max_L > oracle::default_cap)
    throw CapExceeded(options.max_L, oracle::default_cap);
  if (options.grid_points < 1)
    throw std::invalid_argument("validation: grid_points must be positive");

  const auto analytic_p_first = [&](const ModelParams& p) {
    return overrides.p_first ? overrides.p_first(p) : analytics::p_first(p);
  };
  const auto analytic_rank_loss = [&](const ModelParams& p) {
    return overrides.rank_loss ? overrides.rank_loss(p)
                               : analytics::rank_loss(p);
  };

  std::vector<double> grid;
  for (int i = 1; i <= options.grid_points; ++i)
    grid.push_back(static_cast<double>(i) / (options.grid_points + 1));

  Worst mass, p1, pk, tail, premium_gap, rl, rl_rand, q, prl, round_trip;
  premium_gap.value = std::numeric_limits<double>::infinity();

  for (int L = 2; L <= options.max_L; ++L) {
    for (double a : grid) {
      for (double e : grid) {
        const ModelParams params{L, a, e, 0.0};
        const std::string at = describe(params);

        double total = 0.0;
        oracle::enumerate(params, [&](const oracle::Configuration& c) {
          total += c.weight;
        });
        mass.consider(std::abs(total - 1.0), at);

        const std::vector<double> rates =
            oracle::exact_conditional_match_rates(params);
        p1.consider(std::abs(rates[0] - analytic_p_first(params)), at);
        const double later = analytics::p_later(params);
        for (int k = 2; k <= L; ++k) {
          pk.consider(std::abs(rates[k - 1] - later), at);
          tail.consider(std::abs(rates[k - 1] - rates[1]), at);
        }
        if (rates[0] - rates[1] < premium_gap.value) {
          premium_gap.value = rates[0] - rates[1];
          premium_gap.where = at;
        }

        rl.consider(
            std::abs(oracle::exact_rank_loss(params) - analytic_rank_loss(params)),
            at);
        rl_rand.consider(std::abs(oracle::exact_rank_loss_random(params) -
                                  analytics::rank_loss_random(params)),
                         at);

        for (double eps : options.epsilons) {
          ModelParams swapped = params;
          swapped.epsilon = eps;
          const std::string at_eps = describe(swapped);
          for (int k = 1; k <= L; ++k) {
            q.consider(
                std::abs(oracle::exact_type1_error(swapped, k) -
                         analytics::type1_error_with_swap(swapped, k)),
                at_eps + " k=" + std::to_string(k));
          }
          prl.consider(std::abs(oracle::exact_permutation_rank_loss(swapped) -
                                analytics::permutation_rank_loss(a, eps)),
                       at_eps);
        }
      }
    }
  }

  // Calibration inversion must reproduce the observed rates it was fed.
  for (double P1_obs : grid) {
    for (double P2_obs : grid) {
      if (!(P2_obs < P1_obs)) continue;
      for (int L : {2, 3, options.max_L, 10}) {
        const MarketObservation obs{"grid", P1_obs, P2_obs, L};
        const CalibratedParams cal = calibrate(obs);
        const ModelParams params{L, cal.a, cal.e, 0.0};
        char at[96];
        std::snprintf(at, sizeof at, "P1=%.3f P2=%.3f L=%d", P1_obs, P2_obs,
                      L);
        round_trip.consider(std::abs(analytics::p_first(params) - P1_obs), at);
        round_trip.consider(std::abs(analytics::p_later(params) - P2_obs), at);
      }
    }
  }

  // Monte Carlo vs oracle at the calibrated market parameters.
  Worst mc_dev;
  for (const MarketObservation& obs : report::bundled_markets()) {
    const CalibratedParams cal = calibrate(obs);
    const ModelParams params{obs.L, cal.a, cal.e, 0.0};
    const mc::SimulationConfig config{params, options.trials, options.seed};
    const mc::SimulationResult sim = mc::simulate_statistics(config);
    const std::vector<double> rates =
        oracle::exact_conditional_match_rates(params);
    const std::string at = obs.label;
    mc_dev.consider(sigma_distance(sim.conditional_rates[0].mean, rates[0],
                                   sim.conditional_rates[0].std_error),
                    at + " P1");
    mc_dev.consider(sigma_distance(sim.conditional_rates[1].mean, rates[1],
                                   sim.conditional_rates[1].std_error),
                    at + " P2");
    mc_dev.consider(sigma_distance(sim.rank_loss.mean,
                                   oracle::exact_rank_loss(params),
                                   sim.rank_loss.std_error),
                    at + " rank_loss");
    mc_dev.consider(sigma_distance(sim.type1_error[1].mean,
                                   oracle::exact_type1_error(params, 2),
                                   sim.type1_error[1].std_error),
                    at + " q_lower");

    ModelParams swapped = params;
    swapped.epsilon = 0.25;
    const mc::SimulationConfig swap_config{swapped, options.trials,
                                           options.seed};
    const mc::SimulationResult swap_sim = mc::simulate_statistics(swap_config);
    mc_dev.consider(
        sigma_distance(swap_sim.permutation_rank_loss.mean,
                       oracle::exact_permutation_rank_loss(swapped),
                       swap_sim.permutation_rank_loss.std_error),
        at + " permutation_rank_loss");
  }

  Report report;
  report.checks.push_back(to_check("enumeration_mass", mass, agreement_tol));
  report.checks.push_back(to_check("p_first", p1, agreement_tol));
  report.checks.push_back(to_check("p_later", pk, agreement_tol));
  report.checks.push_back(to_check("p_later_tail_spread", tail, agreement_tol));
  // Strict inequality: the stored value is the smallest observed gap.
  report.checks.push_back(CheckResult{"first_rank_premium_min_gap",
                                      premium_gap.value, 0.0,
                                      premium_gap.value > 0.0,
                                      premium_gap.where});
  report.checks.push_back(to_check("rank_loss", rl, agreement_tol));
  report.checks.push_back(
      to_check("rank_loss_random", rl_rand, agreement_tol));
  report.checks.push_back(to_check("type1_error", q, agreement_tol));
  report.checks.push_back(
      to_check("permutation_rank_loss", prl, agreement_tol));
  report.checks.push_back(
      to_check("calibration_round_trip", round_trip, round_trip_tol));
  report.checks.push_back(
      to_check("mc_within_standard_errors", mc_dev, mc_sigma_tol));

  report.all_pass = true;
  for (const CheckResult& check : report.checks)
    report.all_pass = report.all_pass && check.pass;
  return report;
}

void print(std::ostream& out, const Report& report) {
  for (const CheckResult& check : report.checks) {
    char line[256];
    std::snprintf(line, sizeof line, "[%s] %-28s worst dev %.3e (tol %.3e)",
                  check.pass ? "PASS" : "FAIL", check.statistic.c_str(),
                  check.worst_abs_dev, check.tolerance);
    out << line;
    if (!check.detail.empty()) out << "  at " << check.detail;
    out << '\n';
  }
  out << (report.all_pass ? "validation: all checks passed"
                          : "validation: FAILURES detected")
      << '\n';
}

}  // namespace pmatch::validation
