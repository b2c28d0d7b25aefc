#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

#include "pmatch/analytics.hpp"
#include "pmatch/calibration.hpp"
#include "pmatch/montecarlo.hpp"
#include "pmatch/oracle.hpp"

namespace py = pybind11;
using namespace pmatch;

namespace {

ProgramSet set_from(const std::vector<int>& programs) {
  ProgramSet s;
  for (int p : programs) {
    if (p < 1 || p > ModelParams::max_programs)
      throw std::invalid_argument("program index out of range");
    s.insert(p);
  }
  return s;
}

std::vector<int> set_to(const ProgramSet& s) {
  std::vector<int> programs;
  for (int p = 1; p <= ModelParams::max_programs; ++p)
    if (s.contains(p)) programs.push_back(p);
  return programs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Reduced-form model of ranking pressure in centralized matching "
      "markets: closed-form statistics, an exact enumeration oracle, a "
      "seeded simulator, and calibration from observed match rates.";

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](int L, double a, double e, double epsilon) {
             ModelParams params{L, a, e, epsilon};
             params.validate();
             return params;
           }),
           py::arg("L"), py::arg("a"), py::arg("e") = 0.0,
           py::arg("epsilon") = 0.0)
      .def_readonly("L", &ModelParams::L)
      .def_readonly("a", &ModelParams::a)
      .def_readonly("e", &ModelParams::e)
      .def_readonly("epsilon", &ModelParams::epsilon)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(L=" + std::to_string(p.L) +
               ", a=" + std::to_string(p.a) + ", e=" + std::to_string(p.e) +
               ", epsilon=" + std::to_string(p.epsilon) + ")";
      });

  // deterministic process primitives; program sets are lists of 1-based ranks
  m.def(
      "build_submitted_list",
      [](const std::vector<int>& pressure, int L) {
        return build_submitted_list(PressureSet{set_from(pressure)}, L)
            .entries();
      },
      py::arg("pressure"), py::arg("L"),
      "Submitted list under a pressure set: min(pressure) first, the rest "
      "in true-preference order.");
  m.def(
      "match",
      [](const std::vector<int>& order, const std::vector<int>& acceptance)
          -> std::optional<int> {
        return pmatch::match(RankOrderList(order),
                             AcceptanceSet{set_from(acceptance)})
            .matched;
      },
      py::arg("order"), py::arg("acceptance"),
      "First listed program that accepts; None when unmatched.");
  m.def(
      "swap_first_two",
      [](const std::vector<int>& order) {
        return swap_first_two(RankOrderList(order)).entries();
      },
      py::arg("order"));
  m.def(
      "relocate_program",
      [](const std::vector<int>& order, int program, int position) {
        return relocate_program(RankOrderList(order), program, position)
            .entries();
      },
      py::arg("order"), py::arg("program"), py::arg("position"));
  m.def(
      "realized_rank_loss",
      [](const std::vector<int>& acceptance, const std::vector<int>& pressure,
         int L, bool swapped) {
        return realized_rank_loss(AcceptanceSet{set_from(acceptance)},
                                  PressureSet{set_from(pressure)}, L, swapped);
      },
      py::arg("acceptance"), py::arg("pressure"), py::arg("L"),
      py::arg("swapped") = false);

  // closed forms
  m.def("p_first", &analytics::p_first, py::arg("params"));
  m.def("p_later", &analytics::p_later, py::arg("params"));
  m.def("rank_loss", &analytics::rank_loss, py::arg("params"));
  m.def("rank_loss_random", &analytics::rank_loss_random, py::arg("params"));
  m.def("type1_error_no_swap", &analytics::type1_error_no_swap,
        py::arg("params"), py::arg("k"));
  m.def("type1_error_with_swap", &analytics::type1_error_with_swap,
        py::arg("params"), py::arg("k"));
  m.def("q_lower_bound", &analytics::q_lower_bound, py::arg("params"));
  m.def("permutation_rank_loss", &analytics::permutation_rank_loss,
        py::arg("a"), py::arg("epsilon"));
  m.def("alpha_feasible", &analytics::alpha_feasible, py::arg("a"),
        py::arg("alpha"));
  m.def("epsilon_for_alpha", &analytics::epsilon_for_alpha, py::arg("a"),
        py::arg("alpha"));
  m.def("quantile_loss", &analytics::quantile_loss, py::arg("rank_loss"),
        py::arg("L"));

  // enumeration oracle
  py::class_<oracle::Configuration>(m, "Configuration")
      .def_property_readonly(
          "acceptance",
          [](const oracle::Configuration& c) {
            return set_to(c.acceptance.members);
          })
      .def_property_readonly(
          "pressure",
          [](const oracle::Configuration& c) {
            return set_to(c.pressure.members);
          })
      .def_readonly("weight", &oracle::Configuration::weight);
  m.def("enumerate_configurations", &oracle::enumerate_all, py::arg("params"),
        py::arg("cap") = oracle::default_cap,
        "All 3^L acceptance/pressure configurations with their weights.");
  m.def("exact_conditional_match_rates", &oracle::exact_conditional_match_rates,
        py::arg("params"), py::arg("cap") = oracle::default_cap);
  m.def("exact_rank_loss", &oracle::exact_rank_loss, py::arg("params"),
        py::arg("cap") = oracle::default_cap);
  m.def("exact_rank_loss_random", &oracle::exact_rank_loss_random,
        py::arg("params"), py::arg("cap") = oracle::default_cap);
  m.def("exact_type1_error", &oracle::exact_type1_error, py::arg("params"),
        py::arg("k"), py::arg("cap") = oracle::default_cap);
  m.def("exact_permutation_rank_loss", &oracle::exact_permutation_rank_loss,
        py::arg("params"), py::arg("cap") = oracle::default_cap);

  // calibration
  py::class_<CalibratedParams>(m, "CalibratedParams")
      .def_readonly("a", &CalibratedParams::a)
      .def_readonly("e", &CalibratedParams::e)
      .def("__repr__", [](const CalibratedParams& c) {
        return "CalibratedParams(a=" + std::to_string(c.a) +
               ", e=" + std::to_string(c.e) + ")";
      });
  py::class_<analytics::KeyStatistics>(m, "KeyStatistics")
      .def_readonly("a", &analytics::KeyStatistics::a)
      .def_readonly("e", &analytics::KeyStatistics::e)
      .def_readonly("rank_loss", &analytics::KeyStatistics::rank_loss)
      .def_readonly("rank_loss_random",
                    &analytics::KeyStatistics::rank_loss_random)
      .def_readonly("q_lower", &analytics::KeyStatistics::q_lower)
      .def_readonly("prl_alpha", &analytics::KeyStatistics::prl_alpha)
      .def_readonly("quantile_loss", &analytics::KeyStatistics::quantile_loss);
  m.def(
      "calibrate",
      [](double P1, double P2, int L, const std::string& label) {
        return calibrate(MarketObservation{label, P1, P2, L});
      },
      py::arg("P1"), py::arg("P2"), py::arg("L"), py::arg("label") = "",
      "Invert observed (P1, P2, L) into acceptance and pressure rates.");
  m.def(
      "key_statistics",
      [](double P1, double P2, int L, double alpha, const std::string& label) {
        return key_statistics(MarketObservation{label, P1, P2, L}, alpha);
      },
      py::arg("P1"), py::arg("P2"), py::arg("L"), py::arg("alpha") = 0.15,
      py::arg("label") = "");
  m.def(
      "rates_from_counts",
      [](long long applicants, const std::vector<long long>& matched_by_rank,
         const std::optional<std::vector<long long>>& unmatched_by_list_length,
         const std::string& label) {
        AggregateCounts counts;
        counts.market_label = label;
        counts.applicants = applicants;
        counts.matched_by_rank = matched_by_rank;
        counts.unmatched_by_list_length = unmatched_by_list_length;
        const ConditionalRates rates = rates_from_counts(counts);
        return py::make_tuple(rates.rates, rates.used_exact_formula);
      },
      py::arg("applicants"), py::arg("matched_by_rank"),
      py::arg("unmatched_by_list_length") = std::nullopt,
      py::arg("label") = "market",
      "Per-rank conditional match rates; returns (rates, used_exact_formula).");

  // simulator
  py::class_<mc::EstimateWithError>(m, "EstimateWithError")
      .def_readonly("mean", &mc::EstimateWithError::mean)
      .def_readonly("std_error", &mc::EstimateWithError::std_error)
      .def_readonly("trials", &mc::EstimateWithError::trials)
      .def_readonly("low_confidence", &mc::EstimateWithError::low_confidence)
      .def("__repr__", [](const mc::EstimateWithError& e) {
        return "EstimateWithError(mean=" + std::to_string(e.mean) +
               ", std_error=" + std::to_string(e.std_error) +
               ", trials=" + std::to_string(e.trials) + ")";
      });
  py::class_<mc::SimulationResult>(m, "SimulationResult")
      .def_readonly("conditional_rates",
                    &mc::SimulationResult::conditional_rates)
      .def_readonly("rank_loss", &mc::SimulationResult::rank_loss)
      .def_readonly("permutation_rank_loss",
                    &mc::SimulationResult::permutation_rank_loss)
      .def_readonly("random_assignment_rank_loss",
                    &mc::SimulationResult::random_assignment_rank_loss)
      .def_readonly("type1_error", &mc::SimulationResult::type1_error);
  m.def(
      "simulate_statistics",
      [](const ModelParams& params, std::uint64_t trials, std::uint64_t seed) {
        return mc::simulate_statistics({params, trials, seed});
      },
      py::arg("params"), py::arg("trials") = 100000, py::arg("seed") = 0,
      "One-pass seeded simulation of the full pipeline; deterministic per "
      "(params, trials, seed).");

#ifdef PMATCH_VERSION
  m.attr("__version__") = PMATCH_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
