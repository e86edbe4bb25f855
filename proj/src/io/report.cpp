#include "aeqr/io/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "aeqr/constants.hpp"
#include "aeqr/version.hpp"

namespace aeqr::io {

namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

std::string m_label(HalfInt m) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%g", m.value());
  return buf;
}

}  // namespace

double round9(double v) { return std::strtod(fmt9(v).c_str(), nullptr); }

json species_json(const species::SpeciesParams& sp) {
  json j;
  j["name"] = sp.name;
  j["I"] = sp.I.value();
  j["Gamma_MHz"] = sp.source.Gamma;
  j["A_MHz"] = sp.source.A;
  j["Q_MHz"] = sp.source.Q;
  j["gJ"] = round9(sp.gJ);
  j["gI"] = round9(sp.gI);
  j["g_g"] = round9(sp.g_g);
  j["g_s"] = round9(sp.g_s);
  return j;
}

json spectrum_json(const species::Spectrum& spec, HalfInt I, double g_g,
                   double g_s, double B) {
  json j;
  j["I"] = I.value();
  j["g_g"] = round9(g_g);
  j["g_s"] = round9(g_s);
  j["B_T"] = round9(B);
  j["line_count"] = spec.lines.size();
  j["min_spacing_MHz"] = round9(spec.min_spacing / constants::MHz);
  j["min_pi_spacing_MHz"] = round9(spec.min_pi_spacing / constants::MHz);
  json lines = json::array();
  for (const auto& l : spec.lines) {
    json e;
    e["m_g"] = l.m_g.value();
    e["m_s"] = l.m_s.value();
    e["pol"] = species::to_string(l.pol);
    e["offset_MHz"] = round9(l.offset / constants::MHz);
    lines.push_back(e);
  }
  j["lines"] = lines;
  return j;
}

json detection_report_json(const detection::DetectionReport& rep,
                           const detection::GJSensitivity* sens) {
  json j;
  j["species"] = rep.species;
  j["B_T"] = round9(rep.B);
  j["Omega_MHz"] = round9(rep.Omega / constants::MHz);
  j["Delta_MHz"] = round9(rep.Delta / constants::MHz);
  j["Omega_c_MHz"] = round9(rep.Omega_c / constants::MHz);
  j["tau_us"] = round9(rep.tau / constants::us);
  j["N"] = round9(rep.N);
  j["p"] = round9(rep.p);
  j["Fbar"] = round9(rep.Fbar);
  j["phi_m_order"] = "m_I descending from +I";
  json phi = json::array();
  for (const double v : rep.phi) phi.push_back(round9(v));
  j["phi"] = phi;
  j["tp_defect"] = round9(rep.tp_defect);
  j["choi_min_eig"] = round9(rep.choi_min_eig);
  if (sens != nullptr) {
    json s;
    s["gJ"] = round9(sens->gJ);
    s["p_at_0.9gJ"] = round9(sens->p_lo);
    s["p_at_1.1gJ"] = round9(sens->p_hi);
    s["dp_dgJ"] = round9(sens->dp_dgJ);
    j["gJ_sensitivity"] = s;
  }
  return j;
}

std::string detection_report_csv(const detection::DetectionReport& rep) {
  const int d = static_cast<int>(rep.phi.size());
  const int twiceI = d - 1;
  std::vector<std::string> head = {"species",   "B_T", "Omega_MHz",
                                   "Delta_MHz", "tau_us", "N", "p"};
  std::vector<std::string> row = {rep.species,
                                  fmt9(rep.B),
                                  fmt9(rep.Omega / constants::MHz),
                                  fmt9(rep.Delta / constants::MHz),
                                  fmt9(rep.tau / constants::us),
                                  fmt9(rep.N),
                                  fmt9(rep.p)};
  for (int i = 0; i < d; ++i) {
    head.push_back("phi_" + m_label(HalfInt(twiceI - 2 * i)));
    row.push_back(fmt9(rep.phi[i]));
  }
  return csv_join(head) + csv_join(row);
}

json gate_report_json(const gate::GateReport& rep,
                      const gate::TwoWellParams& params) {
  json j;
  j["I"] = params.I.value();
  j["J_MHz"] = round9(params.J / constants::MHz);
  j["Ugg_over_J"] = round9(params.U_gg / params.J);
  j["Uss_over_Ugg"] = round9(params.U_ss / params.U_gg);
  j["V_over_Ugg"] = round9(params.V / params.U_gg);
  j["Vex_over_Ugg"] = round9(params.V_ex / params.U_gg);
  j["B_T"] = round9(params.B);
  j["tau_us"] = round9(rep.tau / constants::us);
  j["eps"] = round9(rep.eps);
  j["leakage_max"] = round9(rep.leakage_max);
  j["leakage_mean"] = round9(rep.leakage_mean);
  j["max_gg_phase_err"] = round9(rep.max_gg_phase_err);
  j["max_spectator_phase_err"] = round9(rep.max_spectator_phase_err);
  j["unitarity_defect"] = round9(rep.unitarity_defect);
  j["blockade_gap_over_J"] = round9(rep.blockade_gap_over_J);
  j["blockade_ok"] = rep.blockade_ok;
  json rows = json::array();
  for (const auto& r : rep.table) {
    json e;
    e["alpha_L"] = r.orb_L == gate::Orbital::g ? "g" : "s";
    e["m_L"] = r.m_L.value();
    e["alpha_R"] = r.orb_R == gate::Orbital::g ? "g" : "s";
    e["m_R"] = r.m_R.value();
    e["phase"] = round9(r.phase);
    e["amp"] = round9(r.amp);
    e["leak"] = round9(r.leak);
    rows.push_back(e);
  }
  j["phase_table"] = rows;
  return j;
}

std::string gate_phase_table_csv(const gate::GateReport& rep) {
  std::string out =
      csv_join({"alpha_L", "m_L", "alpha_R", "m_R", "phase", "amp", "leak"});
  for (const auto& r : rep.table)
    out += csv_join({r.orb_L == gate::Orbital::g ? "g" : "s", m_label(r.m_L),
                     r.orb_R == gate::Orbital::g ? "g" : "s", m_label(r.m_R),
                     fmt9(r.phase), fmt9(r.amp), fmt9(r.leak)});
  return out;
}

json result_table_json(const sweep::ResultTable& table) {
  json j;
  j["axes"] = table.axis_names;
  json rows = json::array();
  for (const auto& r : table.rows) {
    json e;
    json coords = json::array();
    for (const double c : r.coords) coords.push_back(round9(c));
    e["coords"] = coords;
    e["ok"] = r.ok;
    if (r.ok) {
      json s;
      for (const auto& [k, v] : r.scalars) s[k] = round9(v);
      e["scalars"] = s;
    } else {
      e["error"] = r.error;
    }
    rows.push_back(e);
  }
  j["rows"] = rows;
  return j;
}

std::string result_table_csv(const sweep::ResultTable& table) {
  std::vector<std::string> scalar_names;
  for (const auto& r : table.rows)
    if (r.ok) {
      for (const auto& [k, _] : r.scalars) scalar_names.push_back(k);
      break;
    }
  std::vector<std::string> head = table.axis_names;
  head.insert(head.end(), scalar_names.begin(), scalar_names.end());
  head.push_back("ok");
  head.push_back("error");
  std::string out = csv_join(head);
  for (const auto& r : table.rows) {
    std::vector<std::string> row;
    for (const double c : r.coords) row.push_back(fmt9(c));
    for (const auto& name : scalar_names) {
      const auto it = r.scalars.find(name);
      row.push_back(it != r.scalars.end() ? fmt9(it->second) : "");
    }
    row.push_back(r.ok ? "1" : "0");
    row.push_back(r.error);
    out += csv_join(row);
  }
  return out;
}

std::string spectrum_csv(const species::Spectrum& spec) {
  std::string out = csv_join({"m_g", "m_s", "pol", "offset_MHz"});
  for (const auto& l : spec.lines)
    out += csv_join({m_label(l.m_g), m_label(l.m_s), species::to_string(l.pol),
                     fmt9(l.offset / constants::MHz)});
  return out;
}

std::vector<std::string> write_report(const std::string& dir,
                                      const std::string& name, json body,
                                      const std::string& csv,
                                      const RunSpec& spec) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  json meta;
  meta["tool"] = version_string;
  meta["config_hash"] = config_hash(spec.config);
  meta["seed"] = spec.seed;
  body["meta"] = meta;

  std::vector<std::string> written;
  for (const auto& f : spec.formats) {
    if (f == "json") {
      const fs::path p = fs::path(dir) / (name + ".json");
      std::ofstream out(p);
      if (!out) throw std::runtime_error("cannot write " + p.string());
      out << body.dump(2) << '\n';
      written.push_back(p.string());
    } else if (f == "csv" && !csv.empty()) {
      const fs::path p = fs::path(dir) / (name + ".csv");
      std::ofstream out(p);
      if (!out) throw std::runtime_error("cannot write " + p.string());
      out << csv;
      written.push_back(p.string());
    }
  }
  return written;
}

}  // namespace aeqr::io
