// Acceptance suite: one line per criterion, nonzero exit if any fail.
// Heavier end-to-end runs than the unit tests; expect a few minutes total.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "aeqr/constants.hpp"
#include "aeqr/detection/channel.hpp"
#include "aeqr/gate/gate.hpp"
#include "aeqr/qcore/qcore.hpp"
#include "aeqr/sweep/sweep.hpp"

using namespace aeqr;
using aeqr::constants::GHz;
using aeqr::constants::MHz;
using aeqr::constants::pi;
using aeqr::constants::us;
using detection::DetectionConfig;
using detection::DetectionSpace;

namespace {

struct ChannelCase {
  std::string name;
  species::SpeciesParams sp;
  DetectionConfig cfg;  // tau set to the calibrated value
};

std::vector<ChannelCase> channel_cases;  // filled by criteria 1-6

struct Ctx {
  char detail[512] = {0};
  void say(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(detail, sizeof detail, fmt, args);
    va_end(args);
  }
};

detection::DetectionReport run_point(const std::string& name,
                                     const species::SpeciesParams& sp,
                                     DetectionConfig cfg, double n_target) {
  const auto space = DetectionSpace::make(sp.I);
  auto rep = detection::detection_error(space, sp, cfg, n_target);
  cfg.tau = rep.tau;
  channel_cases.push_back({name, sp, cfg});
  return rep;
}

double sensitivity(const species::SpeciesParams& sp, const DetectionConfig& cfg,
                   double n_target) {
  const auto space = DetectionSpace::make(sp.I);
  return detection::gj_sensitivity(space, sp, cfg, n_target).dp_dgJ;
}

gate::TwoWellParams gate_params(HalfInt I, double ratio) {
  gate::TwoWellParams p;
  p.I = I;
  p.J = 1.0;
  p.U_gg = ratio;
  p.U_ss = 12.0 * ratio;
  p.V = 9.0 * ratio;
  p.V_ex = 1.0 * ratio;
  return p;
}

bool crit1(Ctx& c) {
  const auto sp = species::species_lookup("Yb171");
  DetectionConfig cfg;
  cfg.B = 2.0;
  cfg.Omega = 30.0 * MHz;
  const auto rep = run_point("crit1_Yb_resonant", sp, cfg, 100.0);
  const double dpdg = sensitivity(sp, cfg, 100.0);
  c.say("tau = %.3f us, p = %.4f, N = %.1f, dp/dgJ = %.2e", rep.tau / us,
        rep.p, rep.N, dpdg);
  return rep.tau / us >= 0.9 && rep.tau / us <= 1.7 && rep.p >= 0.005 &&
         rep.p <= 0.02;
}

bool crit2(Ctx& c) {
  const auto sp = species::species_lookup("Yb171");
  DetectionConfig cfg;
  cfg.B = 10.0;
  cfg.Omega = 200.0 * MHz;
  const auto rep = run_point("crit2_Yb_strong_field", sp, cfg, 100.0);
  const double dpdg = sensitivity(sp, cfg, 100.0);
  c.say("tau = %.3f us, p = %.3e, dp/dgJ = %.2e", rep.tau / us, rep.p, dpdg);
  return rep.p <= 3e-4 && rep.tau / us >= 0.8 && rep.tau / us <= 1.4;
}

bool crit3(Ctx& c) {
  const auto sp = species::species_lookup("Ca43");
  DetectionConfig cfg;
  cfg.B = 1.0;
  cfg.Omega = 200.0 * MHz;
  const auto rep = run_point("crit3_Ca_resonant", sp, cfg, 100.0);
  const double dpdg = sensitivity(sp, cfg, 100.0);
  c.say("tau = %.3f us, p = %.4f, dp/dgJ = %.2e", rep.tau / us, rep.p, dpdg);
  return rep.p >= 0.001 && rep.p <= 0.004;
}

bool crit4(Ctx& c) {
  const auto sp = species::species_lookup("Sr87");
  sweep::DetectionTask task;
  task.species = sp;
  task.N_target = 100.0;
  const std::vector<sweep::Axis> axes = {
      {"B_T", {0.5, 1.0, 2.0, 4.0, 7.0, 10.0}},
      {"Omega_MHz", {30.0, 60.0, 100.0, 200.0, 300.0}}};
  const auto table = sweep::run_grid(
      axes, [&](const sweep::ParamMap& m) { return eval_detection(task, m); },
      4);
  double pmin = 1e300, b_at = 0, om_at = 0;
  int failures = 0;
  for (const auto& r : table.rows) {
    if (!r.ok) {
      ++failures;
      continue;
    }
    if (r.scalars.at("p") < pmin) {
      pmin = r.scalars.at("p");
      b_at = r.coords[0];
      om_at = r.coords[1];
    }
  }
  DetectionConfig best;
  best.B = b_at;
  best.Omega = om_at * MHz;
  const double dpdg = sensitivity(sp, best, 100.0);
  c.say("min p = %.4f at B = %.1f T, Omega/2pi = %.0f MHz (%d failed pts), "
        "dp/dgJ = %.2e",
        pmin, b_at, om_at, failures, dpdg);
  return failures == 0 && pmin >= 0.05;
}

bool crit5(Ctx& c) {
  struct Pt {
    const char* species;
    double delta_ghz, omega_ghz;
  };
  const Pt pts[] = {{"Yb171", 15.0, 0.2}, {"Ca43", 6.0, 0.07},
                    {"Sr87", 3.0, 0.04}};
  std::string detail;
  bool ok = true;
  for (const auto& pt : pts) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sp = species::species_lookup(pt.species);
    DetectionConfig cfg;
    cfg.Delta = pt.delta_ghz * GHz;
    cfg.Omega = pt.omega_ghz * GHz;
    const auto rep = run_point(std::string("crit5_") + pt.species, sp, cfg,
                               100.0);
    const double dpdg = sensitivity(sp, cfg, 100.0);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const double tau_ms = rep.tau * 1e3;
    const bool point_ok =
        tau_ms >= 1.5 && tau_ms <= 6.0 && rep.p >= 0.004 && rep.p <= 0.025 &&
        secs <= 120.0;
    ok = ok && point_ok;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s[tau=%.2fms p=%.4f dp/dgJ=%.1e %.1fs] ",
                  pt.species, tau_ms, rep.p, dpdg, secs);
    detail += buf;
  }
  c.say("%s", detail.c_str());
  return ok;
}

bool crit6(Ctx& c) {
  const auto sp = species::species_lookup("Ca43");
  DetectionConfig cfg;
  cfg.B = 2.0;
  cfg.Delta = 6.0 * GHz;
  cfg.Omega = 0.07 * GHz;
  const auto rep = run_point("crit6_Ca_combined", sp, cfg, 100.0);
  const double dpdg = sensitivity(sp, cfg, 100.0);
  c.say("tau = %.2f ms, p = %.3e, dp/dgJ = %.2e", rep.tau * 1e3, rep.p, dpdg);
  return rep.p <= 1.2e-3;
}

bool crit7(Ctx& c) {
  // off-resonant photon estimate at the criterion-5 points
  std::string detail;
  bool ok = true;
  int found = 0;
  for (const auto& cc : channel_cases) {
    if (cc.name.rfind("crit5_", 0) != 0) continue;
    ++found;
    const auto space = DetectionSpace::make(cc.sp.I);
    const detection::DetectionEngine eng(space, cc.sp, cc.cfg);
    const double n = eng.photons(*cc.cfg.tau);
    const double est = cc.sp.Gamma * *cc.cfg.tau * cc.cfg.Omega * cc.cfg.Omega /
                       (cc.cfg.Delta * cc.cfg.Delta);
    const double rel = std::abs(est - n) / n;
    ok = ok && rel <= 0.20;
    char buf[120];
    std::snprintf(buf, sizeof buf, "%s[N=%.1f est=%.1f rel=%.2f] ",
                  cc.sp.name.c_str(), n, est, rel);
    detail += buf;
  }
  c.say("%s", detail.c_str());
  return ok && found == 3;
}

bool crit8(Ctx& c) {
  const auto sp = species::species_lookup("Sr87");
  const double deltas_ghz[] = {2.0, 3.17, 5.02, 7.96, 12.6, 20.0};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const double d : deltas_ghz) {
    DetectionConfig cfg;
    cfg.B = 10.0;
    cfg.Delta = d * GHz;
    cfg.Omega = 100.0 * MHz;
    const auto space = DetectionSpace::make(sp.I);
    const auto rep = detection::detection_error(space, sp, cfg, 100.0);
    const double x = std::log(d), y = std::log(rep.p);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  c.say("log-log slope of p vs Delta = %.3f over one decade", slope);
  return std::abs(slope + 2.0) <= 0.3;
}

bool crit9(Ctx& c) {
  bool ok = !channel_cases.empty();
  double worst = 0.0;
  std::string worst_name = "-";
  for (const auto& cc : channel_cases) {
    const auto space = DetectionSpace::make(cc.sp.I);
    const detection::DetectionEngine eng(space, cc.sp, cc.cfg);
    const auto ch = eng.channel(*cc.cfg.tau);
    const auto phi = detection::ideal_phases(ch);
    const double exact = detection::average_gate_fidelity(ch, phi);
    const auto mc = detection::average_gate_fidelity_mc(ch, phi, 10000, 2026);
    const double sigmas = std::abs(mc.mean - exact) /
                          std::max(mc.std_error, 1e-12);
    if (sigmas > worst) {
      worst = sigmas;
      worst_name = cc.name;
    }
    ok = ok && sigmas <= 4.0;
  }
  c.say("%zu channels, worst |exact - MC| = %.2f sigma (%s)",
        channel_cases.size(), worst, worst_name.c_str());
  return ok;
}

bool crit10(Ctx& c) {
  const auto sp = species::species_lookup("Yb171");
  DetectionConfig cfg;
  cfg.B = 2.0;
  cfg.Omega = 30.0 * MHz;
  // calibrate on the bare g/e system with the control off
  const auto bare = DetectionSpace::make(sp.I);
  const detection::DetectionEngine eng(bare, sp, cfg);
  cfg.tau = eng.calibrate_tau(100.0);
  cfg.Omega_c = 1000.0 * MHz;
  const auto space = DetectionSpace::make(sp.I, true, true);
  const auto rep = detection::coherence_retention(space, sp, cfg, sp.I);
  c.say("tau = %.3f us, N = %.4f, retention = %.4f", *cfg.tau / us, rep.N,
        rep.retention);
  return rep.N <= 0.05 && rep.retention >= 0.98;
}

bool crit11(Ctx& c) {
  std::string detail;
  bool ok = true;
  for (const int twice : {1, 3, 9}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = gate::run_gate_protocol(gate_params(HalfInt(twice), 40.0));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool point_ok = rep.max_gg_phase_err <= 0.1 &&
                          rep.max_spectator_phase_err <= 0.1 &&
                          rep.eps <= 5e-3 &&
                          rep.leakage_max <= 10.0 / (40.0 * 40.0) &&
                          (twice != 9 || secs <= 60.0);
    ok = ok && point_ok;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "I=%d/2[gg_err=%.3f sp_err=%.3f eps=%.1e leak=%.1e %.1fs] ",
                  twice, rep.max_gg_phase_err, rep.max_spectator_phase_err,
                  rep.eps, rep.leakage_max, secs);
    detail += buf;
  }
  c.say("%s", detail.c_str());
  return ok;
}

bool crit12(Ctx& c) {
  const auto rep = gate::bias_pulse_analysis(gate_params(HalfInt(1), 1000.0));
  c.say("swap deviation = %.2e, antisym err = %.3f, sym err = %.3f",
        rep.swap_max_deviation, rep.max_antisym_phase_err,
        rep.max_sym_phase_err);
  return rep.swap_max_deviation <= 1e-2 && rep.max_antisym_phase_err <= 0.05 &&
         rep.max_sym_phase_err <= 0.05;
}

bool crit13(Ctx& c) {
  const double ratios[] = {10.0, 20.0, 40.0, 80.0};
  const auto rep = gate::blockade_scaling(gate_params(HalfInt(1), 40.0), ratios);
  c.say("eps slope vs J/U = %.3f", rep.slope);
  return std::abs(rep.slope - 2.0) <= 0.3;
}

bool crit14(Ctx& c) {
  // spin algebra to 1e-13
  for (int twice = 1; twice <= 9; ++twice) {
    const auto s = qcore::spin_operators(HalfInt(twice));
    la::CMatrix comm = s.jx * s.jy;
    comm -= s.jy * s.jx;
    comm -= la::cd(0.0, 1.0) * s.jz;
    if (comm.norm_max() > 1e-13) {
      c.say("commutator defect at j = %d/2", twice);
      return false;
    }
    la::CMatrix cas = s.jx * s.jx;
    cas += s.jy * s.jy;
    cas += s.jz * s.jz;
    const double jv = 0.5 * twice;
    cas -= la::cd(jv * (jv + 1.0), 0.0) * la::CMatrix::identity(twice + 1);
    if (cas.norm_max() > 1e-13) {
      c.say("Casimir defect at j = %d/2", twice);
      return false;
    }
  }

  // fermionic anticommutation, exactly
  const gate::FockBasis2 basis(HalfInt(3));
  for (int a = 0; a < basis.n_modes(); ++a)
    for (int b = 0; b < basis.n_modes(); ++b) {
      la::CMatrix acc = basis.create_12(a).adjoint() * basis.create_12(b);
      acc += basis.create_01(b) * basis.create_01(a).adjoint();
      for (int j = 0; j < basis.n_modes(); ++j)
        for (int i = 0; i < basis.n_modes(); ++i) {
          const double want = (a == b && i == j) ? 1.0 : 0.0;
          if (acc(i, j) != la::cd(want, 0.0)) {
            c.say("anticommutation defect at modes (%d, %d)", a, b);
            return false;
          }
        }
    }

  // channel CPTP to 1e-8 on every collected channel
  double worst_tp = 0.0, worst_cp = 0.0;
  for (const auto& cc : channel_cases) {
    const auto space = DetectionSpace::make(cc.sp.I);
    const detection::DetectionEngine eng(space, cc.sp, cc.cfg);
    const auto ch = eng.channel(*cc.cfg.tau);
    worst_tp = std::max(worst_tp, ch.tp_defect);
    worst_cp = std::max(worst_cp, -ch.choi_min_eig);
  }
  if (worst_tp > 1e-8 || worst_cp > 1e-8) {
    c.say("CPTP defect: tp = %.1e, choi = %.1e", worst_tp, worst_cp);
    return false;
  }

  // sweep determinism, bitwise, across runs and worker counts
  sweep::DetectionTask task;
  task.species = species::species_lookup("Yb171");
  task.cfg.B = 2.0;
  task.N_target = 50.0;
  const std::vector<sweep::Axis> axes = {{"Omega_MHz", {20.0, 30.0, 40.0}}};
  const auto eval = [&](const sweep::ParamMap& m) {
    return eval_detection(task, m);
  };
  const auto t1 = sweep::run_grid(axes, eval, 1);
  const auto t2 = sweep::run_grid(axes, eval, 1);
  const auto t3 = sweep::run_grid(axes, eval, 3);
  for (size_t k = 0; k < t1.rows.size(); ++k)
    for (const auto& [key, v] : t1.rows[k].scalars)
      if (v != t2.rows[k].scalars.at(key) || v != t3.rows[k].scalars.at(key)) {
        c.say("sweep nondeterminism in %s at row %zu", key.c_str(), k);
        return false;
      }

  c.say("spin algebra <= 1e-13, anticommutation exact, CPTP tp=%.1e "
        "choi=%.1e, sweeps bitwise stable",
        worst_tp, worst_cp);
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* label;
    double time_limit;  // seconds; 0 = none
    std::function<bool(Ctx&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Yb171 resonant detection (B=2T, Omega/2pi=30MHz, N=100)", 10.0, crit1},
      {2, "Yb171 strong-field detection (B=10T, Omega/2pi=200MHz)", 30.0, crit2},
      {3, "Ca43 resonant detection (B=1T, Omega/2pi=200MHz)", 0.0, crit3},
      {4, "Sr87 resonant scan floor (B,Omega grid, min p >= 0.05)", 0.0, crit4},
      {5, "off-resonant triple at B=0 (Yb/Ca/Sr)", 0.0, crit5},
      {6, "Ca43 combined approach (Delta/2pi=6GHz, B=2T)", 0.0, crit6},
      {7, "photon-count estimate Gamma tau Omega^2/Delta^2 within 20%", 0.0,
       crit7},
      {8, "Sr87 Delta^-2 error scaling at fixed N=100", 0.0, crit8},
      {9, "fidelity identity vs Haar Monte Carlo (4 sigma)", 0.0, crit9},
      {10, "dark-state selectivity (Omega_c/2pi=1GHz)", 0.0, crit10},
      {11, "gate correctness at U/J=40 for I=1/2,3/2,9/2", 0.0, crit11},
      {12, "single bias pulse vs nuclear swap at U/J=1000", 0.0, crit12},
      {13, "blockade error scaling (J/U)^2", 0.0, crit13},
      {14, "algebraic suites (spin, fermions, CPTP, determinism)", 0.0, crit14},
  };

  int failures = 0;
  for (const auto& crit : criteria) {
    Ctx ctx;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string error;
    try {
      ok = crit.run(ctx);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (crit.time_limit > 0.0 && secs > crit.time_limit) ok = false;
    if (!ok) ++failures;
    std::printf("%s criterion %2d [%6.1fs]: %s%s%s%s\n", ok ? "PASS" : "FAIL",
                crit.id, secs, crit.label, ctx.detail[0] ? " | " : "",
                ctx.detail, error.empty() ? "" : (" | " + error).c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
