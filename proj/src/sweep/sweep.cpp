#include "aeqr/sweep/sweep.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "aeqr/constants.hpp"

namespace aeqr::sweep {

ResultTable run_grid(const std::vector<Axis>& axes, const Evaluator& eval,
                     int workers) {
  if (axes.empty()) throw std::invalid_argument("run_grid: no axes");
  size_t total = 1;
  for (const auto& a : axes) {
    if (a.values.empty())
      throw std::invalid_argument("run_grid: empty axis '" + a.path + "'");
    total *= a.values.size();
  }

  ResultTable table;
  for (const auto& a : axes) table.axis_names.push_back(a.path);
  table.rows.resize(total);

  auto run_point = [&](size_t flat) {
    ResultRow& row = table.rows[flat];
    ParamMap overrides;
    size_t rem = flat;
    row.coords.resize(axes.size());
    for (size_t ax = axes.size(); ax-- > 0;) {
      const size_t n = axes[ax].values.size();
      const double v = axes[ax].values[rem % n];
      rem /= n;
      row.coords[ax] = v;
      overrides[axes[ax].path] = v;
    }
    try {
      row.scalars = eval(overrides);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  };

  workers = std::max(1, workers);
  if (workers == 1 || total == 1) {
    for (size_t k = 0; k < total; ++k) run_point(k);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t k = next.fetch_add(1); k < total; k = next.fetch_add(1))
          run_point(k);
      });
    for (auto& t : pool) t.join();
  }
  return table;
}

namespace {

double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, int& budget, double& best_x, double& best_f) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto probe = [&](double x) {
    --budget;
    const double v = f(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
    return v;
  };
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = probe(x1), f2 = probe(x2);
  while (budget > 0 && (b - a) > 1e-4 * (hi - lo)) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = probe(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = probe(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace

MinimizeResult minimize(const std::vector<BoxBound>& bounds,
                        const std::function<double(const ParamMap&)>& objective,
                        int budget) {
  if (bounds.empty()) throw std::invalid_argument("minimize: no bounds");
  for (const auto& b : bounds)
    if (!(b.lo < b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi))
      throw std::invalid_argument("minimize: bad bounds for '" + b.path + "'");
  if (budget < 10) throw std::invalid_argument("minimize: budget < 10");

  MinimizeResult res;
  int remaining = budget;
  std::vector<double> x(bounds.size());
  for (size_t i = 0; i < bounds.size(); ++i)
    x[i] = 0.5 * (bounds[i].lo + bounds[i].hi);

  auto eval_at = [&](const std::vector<double>& pt) {
    ParamMap m;
    for (size_t i = 0; i < bounds.size(); ++i) m[bounds[i].path] = pt[i];
    ++res.evaluations;
    try {
      return objective(m);
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  double best_f = eval_at(x);
  --remaining;
  std::vector<double> best_x = x;

  for (int cycle = 0; cycle < 16 && remaining > 0; ++cycle) {
    const double before = best_f;
    for (size_t ax = 0; ax < bounds.size() && remaining > 0; ++ax) {
      double bx = x[ax], bf = best_f;
      auto line = [&](double v) {
        std::vector<double> pt = x;
        pt[ax] = v;
        return eval_at(pt);
      };
      golden_section(line, bounds[ax].lo, bounds[ax].hi, remaining, bx, bf);
      if (bf < best_f) {
        best_f = bf;
        x[ax] = bx;
        best_x = x;
      }
    }
    if (before - best_f <= 1e-12 * (1.0 + std::abs(before))) break;
  }

  if (!std::isfinite(best_f))
    throw std::runtime_error("minimize: every evaluation failed");
  res.budget_exhausted = remaining <= 0;
  res.value = best_f;
  for (size_t i = 0; i < bounds.size(); ++i)
    res.best[bounds[i].path] = best_x[i];
  return res;
}

std::map<std::string, double> eval_detection(const DetectionTask& task,
                                             const ParamMap& overrides) {
  species::SpeciesParams sp = task.species;
  detection::DetectionConfig cfg = task.cfg;
  double n_target = task.N_target;
  for (const auto& [path, v] : overrides) {
    if (path == "B_T") cfg.B = v;
    else if (path == "Omega_MHz") cfg.Omega = v * constants::MHz;
    else if (path == "Delta_MHz") cfg.Delta = v * constants::MHz;
    else if (path == "Omega_c_MHz") cfg.Omega_c = v * constants::MHz;
    else if (path == "tau_us") cfg.tau = v * constants::us;
    else if (path == "N_target") n_target = v;
    else if (path == "gJ") sp.gJ = v;
    else if (path == "gI") sp.gI = v;
    else if (path == "decay_cutoff") cfg.decay_cutoff = v;
    else
      throw std::invalid_argument("detection sweep: unknown path '" + path +
                                  "'");
  }
  const auto space = detection::DetectionSpace::make(sp.I);
  const auto rep =
      detection::detection_error(space, sp, cfg, n_target, task.solver);
  return {{"p", rep.p},
          {"N", rep.N},
          {"tau_us", rep.tau / constants::us},
          {"Fbar", rep.Fbar}};
}

std::map<std::string, double> eval_gate(const GateTask& task,
                                        const ParamMap& overrides) {
  gate::TwoWellParams p = task.params;
  double m_ss = p.U_ss / p.U_gg, m_v = p.V / p.U_gg, m_vex = p.V_ex / p.U_gg;
  double ratio = p.U_gg / p.J;
  for (const auto& [path, v] : overrides) {
    if (path == "Ugg_over_J") ratio = v;
    else if (path == "Uss_over_Ugg") m_ss = v;
    else if (path == "V_over_Ugg") m_v = v;
    else if (path == "Vex_over_Ugg") m_vex = v;
    else if (path == "B_T") p.B = v;
    else
      throw std::invalid_argument("gate sweep: unknown path '" + path + "'");
  }
  p.U_gg = ratio * p.J;
  p.U_ss = m_ss * p.U_gg;
  p.V = m_v * p.U_gg;
  p.V_ex = m_vex * p.U_gg;
  const auto rep = gate::run_gate_protocol(p, task.schedule);
  return {{"eps", rep.eps},
          {"leakage_max", rep.leakage_max},
          {"gg_phase_err", rep.max_gg_phase_err},
          {"spectator_phase_err", rep.max_spectator_phase_err}};
}

}  // namespace aeqr::sweep
