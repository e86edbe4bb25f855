#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "aeqr/detection/channel.hpp"
#include "aeqr/gate/gate.hpp"

namespace aeqr::sweep {

// Parameter overrides addressed by path (e.g. "B_T", "Omega_MHz").
using ParamMap = std::map<std::string, double>;
// One evaluation: overrides in, named scalars out.
using Evaluator =
    std::function<std::map<std::string, double>(const ParamMap&)>;

struct Axis {
  std::string path;
  std::vector<double> values;
};

struct ResultRow {
  std::vector<double> coords;  // one per axis, in axis order
  std::map<std::string, double> scalars;
  bool ok = true;
  std::string error;
};

struct ResultTable {
  std::vector<std::string> axis_names;
  std::vector<ResultRow> rows;  // lexicographic in the axes
};

// Evaluates every grid point. Rows land in lexicographic order (first axis
// slowest) regardless of worker count; failures are recorded per row.
ResultTable run_grid(const std::vector<Axis>& axes, const Evaluator& eval,
                     int workers = 1);

struct BoxBound {
  std::string path;
  double lo = 0.0, hi = 0.0;
};

struct MinimizeResult {
  ParamMap best;
  double value = 0.0;
  int evaluations = 0;
  bool budget_exhausted = false;
};

// Cyclic coordinate descent with golden-section line searches, started from
// the box center. Deterministic; never returns a point worse than the best
// one it evaluated. Throws if every evaluation failed.
MinimizeResult minimize(const std::vector<BoxBound>& bounds,
                        const std::function<double(const ParamMap&)>& objective,
                        int budget);

// --- task bindings ------------------------------------------------------

struct DetectionTask {
  species::SpeciesParams species;
  detection::DetectionConfig cfg;
  double N_target = 100.0;
  detection::SolverOptions solver;
};
// Supported override paths: B_T, Omega_MHz, Delta_MHz, Omega_c_MHz, tau_us,
// N_target, gJ, gI, decay_cutoff. Scalars: p, N, tau_us, Fbar.
std::map<std::string, double> eval_detection(const DetectionTask& task,
                                             const ParamMap& overrides);

struct GateTask {
  gate::TwoWellParams params;
  std::vector<gate::Token> schedule = gate::default_schedule();
};
// Supported override paths: Ugg_over_J, Uss_over_Ugg, V_over_Ugg,
// Vex_over_Ugg, B_T. Scalars: eps, leakage_max, gg_phase_err,
// spectator_phase_err.
std::map<std::string, double> eval_gate(const GateTask& task,
                                        const ParamMap& overrides);

}  // namespace aeqr::sweep
