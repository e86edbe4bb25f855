#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aeqr/constants.hpp"
#include "aeqr/io/report.hpp"
#include "aeqr/version.hpp"

namespace {

using aeqr::HalfInt;
using aeqr::constants::MHz;
using aeqr::constants::us;
using aeqr::io::json;
using aeqr::io::RunSpec;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> formats;
  std::optional<uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--config", c.config_path, "JSON configuration file");
  cmd->add_option("--out", c.out_dir, "output directory");
  cmd->add_option("--format", c.formats, "output formats (json, csv)");
  cmd->add_option("--seed", c.seed, "global deterministic seed");
}

json load_doc(const CommonOpts& c) {
  if (c.config_path.empty()) return json::object();
  std::ifstream in(c.config_path);
  if (!in)
    throw std::invalid_argument("cannot open config file '" + c.config_path +
                                "'");
  return json::parse(in);
}

RunSpec finalize_spec(const std::string& command, json doc,
                      const CommonOpts& c) {
  if (!c.out_dir.empty()) doc["output_dir"] = c.out_dir;
  if (!c.formats.empty()) doc["formats"] = c.formats;
  if (c.seed.has_value()) doc["seed"] = *c.seed;
  return aeqr::io::parse_config(command, doc);
}

void set_if(json& obj, const char* key, const std::optional<double>& v) {
  if (v.has_value()) obj[key] = *v;
}

int run_species(const CommonOpts& common, const std::string& name) {
  RunSpec spec = finalize_spec("species", load_doc(common), common);
  const auto sp = aeqr::io::resolve_species(spec.config, name);
  const json j = aeqr::io::species_json(sp);
  std::printf("%s: I=%s Gamma/2pi=%g MHz A/2pi=%g MHz Q/2pi=%g MHz\n",
              sp.name.c_str(), aeqr::to_string(sp.I).c_str(), sp.source.Gamma,
              sp.source.A, sp.source.Q);
  char row[256];
  std::snprintf(row, sizeof row, "%s,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                sp.name.c_str(), sp.I.value(), sp.source.Gamma, sp.source.A,
                sp.source.Q, sp.gJ, sp.gI, sp.g_g, sp.g_s);
  const std::string csv = "name,I,Gamma_MHz,A_MHz,Q_MHz,gJ,gI,g_g,g_s\n" +
                          std::string(row);
  aeqr::io::write_report(spec.output_dir, "species_" + sp.name, j, csv, spec);
  return 0;
}

int main_impl(int argc, char** argv) {
  CLI::App app{std::string(aeqr::version_string) +
               " - alkaline-earth quantum register simulator"};
  app.require_subcommand(1);

  // species
  CommonOpts c_species;
  std::string species_name;
  auto* cmd_species = app.add_subcommand("species", "print atomic constants");
  cmd_species->add_option("name", species_name, "species name")->required();
  add_common(cmd_species, c_species);

  // spectrum
  CommonOpts c_spec;
  std::optional<double> sp_I, sp_gg, sp_gs, sp_B;
  std::string sp_species;
  auto* cmd_spec =
      app.add_subcommand("spectrum", "enumerate g-s transition lines");
  cmd_spec->add_option("--I", sp_I, "nuclear spin");
  cmd_spec->add_option("--species", sp_species, "species providing I and g's");
  cmd_spec->add_option("--gg", sp_gg, "clock ground-state g-factor");
  cmd_spec->add_option("--gs", sp_gs, "clock excited-state g-factor");
  cmd_spec->add_option("--B", sp_B, "magnetic field (T)");
  add_common(cmd_spec, c_spec);

  // detect / calibrate share flags
  struct DetectFlags {
    CommonOpts common;
    std::string species = "Yb171";
    std::optional<double> B, Omega, Delta, Omega_c, tau, N;
    bool sensitivity = false;
    int mc_samples = 0;
    bool retention = false;
    std::optional<double> retention_m;
  };
  auto add_detect_flags = [](CLI::App* cmd, DetectFlags& f) {
    cmd->add_option("--species", f.species, "species name");
    cmd->add_option("--B", f.B, "magnetic field (T)");
    cmd->add_option("--Omega", f.Omega, "probe Rabi frequency (MHz)");
    cmd->add_option("--Delta", f.Delta, "probe detuning (MHz)");
    cmd->add_option("--Omega-c", f.Omega_c, "control Rabi frequency (MHz)");
    cmd->add_option("--tau", f.tau, "pulse length (us), skips calibration");
    cmd->add_option("--N", f.N, "photon-number target");
    add_common(cmd, f.common);
  };
  DetectFlags fd;
  auto* cmd_detect =
      app.add_subcommand("detect", "detection error budget for one point");
  add_detect_flags(cmd_detect, fd);
  cmd_detect->add_flag("--sensitivity", fd.sensitivity,
                       "report dp/dgJ at +-10% gJ");
  cmd_detect->add_option("--mc", fd.mc_samples,
                         "Haar Monte-Carlo fidelity cross-check samples");
  cmd_detect->add_flag("--retention", fd.retention,
                       "dark-state selectivity run (g-s coherence retention)");
  cmd_detect->add_option("--retention-m", fd.retention_m,
                         "m_I of the monitored coherence (default +I)");

  DetectFlags fc;
  auto* cmd_cal =
      app.add_subcommand("calibrate", "pulse time for a photon-number target");
  add_detect_flags(cmd_cal, fc);

  // gate
  CommonOpts c_gate;
  std::optional<double> g_I, g_ratio, g_J, g_uss, g_v, g_vex, g_B;
  std::string gate_mode = "protocol";
  std::vector<double> g_ratios;
  auto* cmd_gate =
      app.add_subcommand("gate", "two-well conditional-tunneling phase gate");
  cmd_gate->add_option("--I", g_I, "nuclear spin");
  cmd_gate->add_option("--ratio", g_ratio, "U_gg / J");
  cmd_gate->add_option("--J", g_J, "tunneling (MHz)");
  cmd_gate->add_option("--Uss", g_uss, "U_ss / U_gg");
  cmd_gate->add_option("--V", g_v, "V / U_gg");
  cmd_gate->add_option("--Vex", g_vex, "V_ex / U_gg");
  cmd_gate->add_option("--B", g_B, "magnetic field (T)");
  cmd_gate->add_option("--mode", gate_mode, "protocol | bias | scaling");
  cmd_gate->add_option("--ratios", g_ratios, "U_gg/J list for scaling mode");
  add_common(cmd_gate, c_gate);

  // sweep / optimize
  CommonOpts c_sweep, c_opt;
  auto* cmd_sweep = app.add_subcommand("sweep", "grid sweep from config");
  add_common(cmd_sweep, c_sweep);
  auto* cmd_opt =
      app.add_subcommand("optimize", "derivative-free minimization from config");
  add_common(cmd_opt, c_opt);

  CLI11_PARSE(app, argc, argv);

  if (cmd_species->parsed()) return run_species(c_species, species_name);

  if (cmd_spec->parsed()) {
    json doc = load_doc(c_spec);
    json& s = doc["spectrum"];
    if (!sp_species.empty()) s["species"] = sp_species;
    set_if(s, "I", sp_I);
    set_if(s, "g_g", sp_gg);
    set_if(s, "g_s", sp_gs);
    set_if(s, "B_T", sp_B);
    RunSpec spec = finalize_spec("spectrum", doc, c_spec);
    const json& cfg = spec.config.at("spectrum");
    HalfInt I(1);
    double gg = 0.0, gs = 0.1;
    if (cfg.contains("species")) {
      const auto sp = aeqr::io::resolve_species(
          spec.config, cfg.at("species").get<std::string>());
      I = sp.I;
      gg = sp.g_g;
      gs = sp.g_s;
    }
    if (cfg.contains("I")) I = HalfInt::from_value(cfg.at("I").get<double>());
    if (cfg.contains("g_g")) gg = cfg.at("g_g").get<double>();
    if (cfg.contains("g_s")) gs = cfg.at("g_s").get<double>();
    const double B = cfg.contains("B_T") ? cfg.at("B_T").get<double>() : 0.0;
    if (B < 0.0) throw std::invalid_argument("spectrum: B must be >= 0");
    const auto res = aeqr::species::transition_spectrum(I, gg, gs, B);
    std::printf("spectrum: I=%s lines=%zu (6I+1=%d) min spacing %.6g MHz, "
                "pi spacing %.6g MHz\n",
                aeqr::to_string(I).c_str(), res.lines.size(), 3 * I.twice + 1,
                res.min_spacing / MHz, res.min_pi_spacing / MHz);
    aeqr::io::write_report(spec.output_dir, "spectrum",
                           aeqr::io::spectrum_json(res, I, gg, gs, B),
                           aeqr::io::spectrum_csv(res), spec);
    return 0;
  }

  auto detect_spec = [&](DetectFlags& f, const char* command) {
    json doc = load_doc(f.common);
    json& d = doc["detection"];
    if (!d.contains("species") || !f.species.empty()) d["species"] = f.species;
    set_if(d, "B_T", f.B);
    set_if(d, "Omega_MHz", f.Omega);
    set_if(d, "Delta_MHz", f.Delta);
    set_if(d, "Omega_c_MHz", f.Omega_c);
    set_if(d, "tau_us", f.tau);
    set_if(d, "N_target", f.N);
    if (f.sensitivity) d["sensitivity"] = true;
    if (f.mc_samples > 0) d["mc_samples"] = f.mc_samples;
    set_if(d, "retention_m", f.retention_m);
    return finalize_spec(command, doc, f.common);
  };

  if (cmd_cal->parsed()) {
    RunSpec spec = detect_spec(fc, "calibrate");
    const json& d = spec.config.at("detection");
    const auto sp = aeqr::io::resolve_species(
        spec.config, d.at("species").get<std::string>());
    auto cfg = aeqr::io::parse_detection_config(d);
    const double n_target =
        d.contains("N_target") ? d.at("N_target").get<double>() : 100.0;
    const auto space = aeqr::detection::DetectionSpace::make(sp.I);
    const aeqr::detection::DetectionEngine eng(
        space, sp, cfg, aeqr::io::parse_solver_options(d));
    double achieved = 0.0;
    const double tau = eng.calibrate_tau(n_target, &achieved);
    std::printf("calibrate %s: tau = %.6g us (N = %.3f, target %.1f)\n",
                sp.name.c_str(), tau / us, achieved, n_target);
    json j;
    j["species"] = sp.name;
    j["B_T"] = aeqr::io::round9(cfg.B);
    j["Omega_MHz"] = aeqr::io::round9(cfg.Omega / MHz);
    j["Delta_MHz"] = aeqr::io::round9(cfg.Delta / MHz);
    j["N_target"] = n_target;
    j["N"] = aeqr::io::round9(achieved);
    j["tau_us"] = aeqr::io::round9(tau / us);
    aeqr::io::write_report(spec.output_dir, "calibrate", j, "", spec);
    return 0;
  }

  if (cmd_detect->parsed()) {
    RunSpec spec = detect_spec(fd, "detect");
    const json& d = spec.config.at("detection");
    const auto sp = aeqr::io::resolve_species(
        spec.config, d.at("species").get<std::string>());
    auto cfg = aeqr::io::parse_detection_config(d);
    const auto opt = aeqr::io::parse_solver_options(d);
    const double n_target =
        d.contains("N_target") ? d.at("N_target").get<double>() : 100.0;

    if (fd.retention || d.contains("retention_m")) {
      // calibrate on the bare g/e system with the control off, then watch the
      // g-s coherence with the control on
      if (!cfg.tau.has_value()) {
        auto cal_cfg = cfg;
        cal_cfg.Omega_c = 0.0;
        const auto cal_space = aeqr::detection::DetectionSpace::make(sp.I);
        const aeqr::detection::DetectionEngine eng(cal_space, sp, cal_cfg, opt);
        cfg.tau = eng.calibrate_tau(n_target);
      }
      const bool with_r = cfg.Omega_c > 0.0;
      const auto space = aeqr::detection::DetectionSpace::make(sp.I, with_r, true);
      const HalfInt m = d.contains("retention_m")
                            ? HalfInt::from_value(d.at("retention_m").get<double>())
                            : sp.I;
      const auto ret = aeqr::detection::coherence_retention(space, sp, cfg, m, opt);
      std::printf("retention %s: tau = %.6g us, N = %.4g, retention = %.6f\n",
                  sp.name.c_str(), *cfg.tau / us, ret.N, ret.retention);
      json j;
      j["species"] = sp.name;
      j["B_T"] = aeqr::io::round9(cfg.B);
      j["Omega_MHz"] = aeqr::io::round9(cfg.Omega / MHz);
      j["Omega_c_MHz"] = aeqr::io::round9(cfg.Omega_c / MHz);
      j["tau_us"] = aeqr::io::round9(*cfg.tau / us);
      j["m"] = m.value();
      j["N"] = aeqr::io::round9(ret.N);
      j["retention"] = aeqr::io::round9(ret.retention);
      aeqr::io::write_report(spec.output_dir, "retention", j, "", spec);
      return 0;
    }

    const bool inc_r =
        d.contains("include_r") && d.at("include_r").get<bool>();
    const bool inc_s =
        d.contains("include_s") && d.at("include_s").get<bool>();
    const auto space =
        aeqr::detection::DetectionSpace::make(sp.I, inc_r, inc_s);
    const auto rep =
        aeqr::detection::detection_error(space, sp, cfg, n_target, opt);
    std::optional<aeqr::detection::GJSensitivity> sens;
    if (fd.sensitivity ||
        (d.contains("sensitivity") && d.at("sensitivity").get<bool>()))
      sens = aeqr::detection::gj_sensitivity(space, sp, cfg, n_target, opt);
    std::printf("detect %s: tau = %.6g us, N = %.2f, p = %.6g\n",
                sp.name.c_str(), rep.tau / us, rep.N, rep.p);
    int mc_samples = fd.mc_samples;
    if (mc_samples == 0 && d.contains("mc_samples"))
      mc_samples = d.at("mc_samples").get<int>();
    if (mc_samples > 0) {
      const aeqr::detection::DetectionEngine eng(space, sp, cfg, opt);
      const auto ch = eng.channel(rep.tau);
      const auto phi = aeqr::detection::ideal_phases(ch);
      const auto mc = aeqr::detection::average_gate_fidelity_mc(
          ch, phi, mc_samples, spec.seed);
      std::printf("  Fbar exact %.8f vs MC %.8f +- %.8f (%d samples)\n",
                  rep.Fbar, mc.mean, mc.std_error, mc.samples);
    }
    aeqr::io::write_report(
        spec.output_dir, "detect_" + sp.name,
        aeqr::io::detection_report_json(rep, sens ? &*sens : nullptr),
        aeqr::io::detection_report_csv(rep), spec);
    return 0;
  }

  if (cmd_gate->parsed()) {
    json doc = load_doc(c_gate);
    json& g = doc["gate"];
    set_if(g, "I", g_I);
    set_if(g, "Ugg_over_J", g_ratio);
    set_if(g, "J_MHz", g_J);
    set_if(g, "Uss_over_Ugg", g_uss);
    set_if(g, "V_over_Ugg", g_v);
    set_if(g, "Vex_over_Ugg", g_vex);
    set_if(g, "B_T", g_B);
    if (gate_mode != "protocol") g["mode"] = gate_mode;
    if (!g_ratios.empty()) g["ratios"] = g_ratios;
    RunSpec spec = finalize_spec("gate", doc, c_gate);
    const json& gc = spec.config.at("gate");
    const auto params = aeqr::io::parse_gate_params(gc);
    const std::string mode =
        gc.contains("mode") ? gc.at("mode").get<std::string>() : "protocol";

    if (mode == "bias") {
      const auto rep = aeqr::gate::bias_pulse_analysis(params);
      std::printf("bias pulse: swap deviation %.3g, antisym phase err %.3g, "
                  "sym phase err %.3g, min return %.6f\n",
                  rep.swap_max_deviation, rep.max_antisym_phase_err,
                  rep.max_sym_phase_err, rep.min_return_probability);
      json j;
      j["swap_max_deviation"] = aeqr::io::round9(rep.swap_max_deviation);
      j["max_antisym_phase_err"] = aeqr::io::round9(rep.max_antisym_phase_err);
      j["max_sym_phase_err"] = aeqr::io::round9(rep.max_sym_phase_err);
      j["min_return_probability"] =
          aeqr::io::round9(rep.min_return_probability);
      aeqr::io::write_report(spec.output_dir, "gate_bias", j, "", spec);
      return 0;
    }
    if (mode == "scaling") {
      std::vector<double> ratios = {10, 20, 40, 80};
      if (gc.contains("ratios"))
        ratios = gc.at("ratios").get<std::vector<double>>();
      const auto rep = aeqr::gate::blockade_scaling(params, ratios);
      std::printf("blockade scaling: slope %.3f\n", rep.slope);
      json j;
      j["slope"] = aeqr::io::round9(rep.slope);
      json pts = json::array();
      std::string csv = "J_over_U,eps\n";
      for (const auto& pt : rep.points) {
        json e;
        e["J_over_U"] = aeqr::io::round9(pt.j_over_u);
        e["eps"] = aeqr::io::round9(pt.eps);
        pts.push_back(e);
        csv += std::to_string(pt.j_over_u) + "," + std::to_string(pt.eps) + "\n";
      }
      j["points"] = pts;
      aeqr::io::write_report(spec.output_dir, "gate_scaling", j, csv, spec);
      return 0;
    }
    const auto sched = aeqr::io::parse_schedule(gc);
    const auto rep = aeqr::gate::run_gate_protocol(params, sched);
    std::printf("gate I=%s U/J=%.1f: eps = %.3g, max |phi_gg - pi| = %.4f, "
                "max |phi_spect| = %.4f, leakage = %.3g\n",
                aeqr::to_string(params.I).c_str(), params.U_gg / params.J,
                rep.eps, rep.max_gg_phase_err, rep.max_spectator_phase_err,
                rep.leakage_max);
    aeqr::io::write_report(spec.output_dir, "gate_report",
                           aeqr::io::gate_report_json(rep, params),
                           aeqr::io::gate_phase_table_csv(rep), spec);
    return 0;
  }

  if (cmd_sweep->parsed() || cmd_opt->parsed()) {
    const bool is_sweep = cmd_sweep->parsed();
    RunSpec spec = finalize_spec(is_sweep ? "sweep" : "optimize",
                                 load_doc(is_sweep ? c_sweep : c_opt),
                                 is_sweep ? c_sweep : c_opt);
    const json& block = spec.config.at(is_sweep ? "sweep" : "optimize");
    const std::string task = block.at("task").get<std::string>();

    aeqr::sweep::Evaluator evaluator;
    if (task == "detection") {
      aeqr::sweep::DetectionTask t;
      const json& d = spec.config.at("detection");
      t.species = aeqr::io::resolve_species(spec.config,
                                            d.at("species").get<std::string>());
      t.cfg = aeqr::io::parse_detection_config(d);
      t.solver = aeqr::io::parse_solver_options(d);
      t.N_target = d.contains("N_target") ? d.at("N_target").get<double>()
                                          : 100.0;
      evaluator = [t](const aeqr::sweep::ParamMap& m) {
        return aeqr::sweep::eval_detection(t, m);
      };
    } else if (task == "gate") {
      aeqr::sweep::GateTask t;
      const json& g = spec.config.at("gate");
      t.params = aeqr::io::parse_gate_params(g);
      t.schedule = aeqr::io::parse_schedule(g);
      evaluator = [t](const aeqr::sweep::ParamMap& m) {
        return aeqr::sweep::eval_gate(t, m);
      };
    } else {
      throw std::invalid_argument("unknown task '" + task + "'");
    }

    if (is_sweep) {
      std::vector<aeqr::sweep::Axis> axes;
      for (const auto& a : block.at("axes"))
        axes.push_back({a.at("path").get<std::string>(),
                        a.at("values").get<std::vector<double>>()});
      const int workers =
          block.contains("workers") ? block.at("workers").get<int>() : 1;
      const auto table = aeqr::sweep::run_grid(axes, evaluator, workers);
      size_t ok = 0;
      for (const auto& r : table.rows) ok += r.ok ? 1 : 0;
      std::printf("sweep: %zu/%zu points ok\n", ok, table.rows.size());
      aeqr::io::write_report(spec.output_dir, "sweep",
                             aeqr::io::result_table_json(table),
                             aeqr::io::result_table_csv(table), spec);
      return 0;
    }

    std::vector<aeqr::sweep::BoxBound> bounds;
    for (const auto& b : block.at("bounds"))
      bounds.push_back({b.at("path").get<std::string>(),
                        b.at("lo").get<double>(), b.at("hi").get<double>()});
    const int budget =
        block.contains("budget") ? block.at("budget").get<int>() : 60;
    const std::string objective_key = task == "detection" ? "p" : "eps";
    const auto res = aeqr::sweep::minimize(
        bounds,
        [&](const aeqr::sweep::ParamMap& m) {
          return evaluator(m).at(objective_key);
        },
        budget);
    std::printf("optimize: best %s = %.6g after %d evaluations%s\n",
                objective_key.c_str(), res.value, res.evaluations,
                res.budget_exhausted ? " (budget exhausted)" : "");
    json j;
    j["objective"] = objective_key;
    j["value"] = aeqr::io::round9(res.value);
    j["evaluations"] = res.evaluations;
    j["budget_exhausted"] = res.budget_exhausted;
    json best;
    for (const auto& [k, v] : res.best) best[k] = aeqr::io::round9(v);
    j["best"] = best;
    aeqr::io::write_report(spec.output_dir, "optimize", j, "", spec);
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return main_impl(argc, argv);
  } catch (const std::exception& e) {
    nlohmann::ordered_json err;
    err["error"] = e.what();
    std::cerr << err.dump() << std::endl;
    return 1;
  }
}
