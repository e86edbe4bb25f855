#include "aeqr/io/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include "aeqr/constants.hpp"

namespace aeqr::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (allowed.find(key) == allowed.end())
      fail(path + "/" + key, "unknown key");
}

double get_num(const json& obj, const std::string& path, const char* key,
               double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(path + "/" + key, "expected a number");
  return v.get<double>();
}

bool get_bool(const json& obj, const std::string& path, const char* key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) fail(path + "/" + key, "expected a boolean");
  return v.get<bool>();
}

std::string get_str(const json& obj, const std::string& path, const char* key,
                    const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) fail(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

const std::set<std::string> top_keys = {
    "seed",  "output_dir", "formats",  "species_overrides",
    "detection", "spectrum", "gate",   "sweep",  "optimize"};

const std::set<std::string> detection_keys = {
    "species",   "B_T",        "Omega_MHz",  "Delta_MHz", "Omega_c_MHz",
    "tau_us",    "N_target",   "decay_cutoff", "tau_max_s", "include_r",
    "include_s", "retention_m", "sensitivity", "mc_samples", "force_dense",
    "force_pade", "pulse_shape", "ramp_fraction", "ramp_steps"};

const std::set<std::string> spectrum_keys = {"species", "I", "g_g", "g_s",
                                             "B_T"};

const std::set<std::string> gate_keys = {
    "I",          "J_MHz",     "Ugg_over_J", "Uss_over_Ugg", "V_over_Ugg",
    "Vex_over_Ugg", "B_T",     "g_g",        "g_s",          "schedule",
    "ratios",     "mode"};

const std::set<std::string> sweep_keys = {"task", "axes", "workers"};
const std::set<std::string> optimize_keys = {"task", "bounds", "budget"};
const std::set<std::string> axis_keys = {"path", "values"};
const std::set<std::string> bound_keys = {"path", "lo", "hi"};
const std::set<std::string> species_keys = {
    "name", "I", "Gamma_MHz", "A_MHz", "Q_MHz", "gJ", "gI", "g_g", "g_s"};

void validate_species_override(const json& s, const std::string& path) {
  check_keys(s, path, species_keys);
  for (const char* req : {"name", "I", "Gamma_MHz"})
    if (!s.contains(req)) fail(path, std::string("missing key '") + req + "'");
  // constructing validates the physics constraints (fermionic I, Q vs I, ...)
  species::make_species(
      get_str(s, path, "name", ""), HalfInt::from_value(s.at("I").get<double>()),
      get_num(s, path, "Gamma_MHz", 0.0), get_num(s, path, "A_MHz", 0.0),
      get_num(s, path, "Q_MHz", 0.0), get_num(s, path, "gJ", 1.0),
      get_num(s, path, "gI", 0.0), get_num(s, path, "g_g", 0.0),
      get_num(s, path, "g_s", 0.1));
}

void validate(const json& doc) {
  check_keys(doc, "", top_keys);
  if (doc.contains("seed") &&
      !(doc.at("seed").is_number_integer() &&
        doc.at("seed").get<int64_t>() >= 0))
    fail("/seed", "expected a non-negative integer");
  if (doc.contains("formats")) {
    if (!doc.at("formats").is_array() || doc.at("formats").empty())
      fail("/formats", "expected a non-empty array");
    for (const auto& f : doc.at("formats"))
      if (!f.is_string() || (f != "json" && f != "csv"))
        fail("/formats", "entries must be \"json\" or \"csv\"");
  }
  if (doc.contains("species_overrides")) {
    if (!doc.at("species_overrides").is_array())
      fail("/species_overrides", "expected an array");
    int k = 0;
    for (const auto& s : doc.at("species_overrides"))
      validate_species_override(s,
                                "/species_overrides/" + std::to_string(k++));
  }
  if (doc.contains("detection"))
    check_keys(doc.at("detection"), "/detection", detection_keys);
  if (doc.contains("spectrum"))
    check_keys(doc.at("spectrum"), "/spectrum", spectrum_keys);
  if (doc.contains("gate")) {
    const auto& g = doc.at("gate");
    check_keys(g, "/gate", gate_keys);
    if (g.contains("schedule")) {
      if (!g.at("schedule").is_array()) fail("/gate/schedule", "expected array");
      for (const auto& t : g.at("schedule"))
        gate::token_from_string(t.get<std::string>());
    }
  }
  if (doc.contains("sweep")) {
    const auto& s = doc.at("sweep");
    check_keys(s, "/sweep", sweep_keys);
    if (!s.contains("axes") || !s.at("axes").is_array() || s.at("axes").empty())
      fail("/sweep/axes", "expected a non-empty array");
    int k = 0;
    for (const auto& a : s.at("axes")) {
      const std::string p = "/sweep/axes/" + std::to_string(k++);
      check_keys(a, p, axis_keys);
      if (!a.contains("path") || !a.contains("values") ||
          !a.at("values").is_array() || a.at("values").empty())
        fail(p, "axis needs 'path' and non-empty 'values'");
    }
  }
  if (doc.contains("optimize")) {
    const auto& o = doc.at("optimize");
    check_keys(o, "/optimize", optimize_keys);
    if (!o.contains("bounds") || !o.at("bounds").is_array() ||
        o.at("bounds").empty())
      fail("/optimize/bounds", "expected a non-empty array");
    int k = 0;
    for (const auto& b : o.at("bounds")) {
      const std::string p = "/optimize/bounds/" + std::to_string(k++);
      check_keys(b, p, bound_keys);
      if (!b.contains("path") || !b.contains("lo") || !b.contains("hi"))
        fail(p, "bound needs 'path', 'lo', 'hi'");
    }
  }
}

}  // namespace

RunSpec parse_config(const std::string& command, const json& doc) {
  static const std::set<std::string> commands = {
      "species", "spectrum", "detect", "calibrate", "gate", "sweep",
      "optimize"};
  if (commands.find(command) == commands.end())
    throw std::invalid_argument("unknown command '" + command + "'");
  validate(doc);
  RunSpec spec;
  spec.command = command;
  spec.config = doc;
  spec.output_dir = get_str(doc, "", "output_dir", "aeqr-out");
  if (const char* env = std::getenv("AEQR_OUT_DIR")) spec.output_dir = env;
  if (doc.contains("formats"))
    spec.formats = doc.at("formats").get<std::vector<std::string>>();
  spec.seed = doc.contains("seed") ? doc.at("seed").get<uint64_t>() : 0;
  return spec;
}

RunSpec parse_config_file(const std::string& command, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const std::exception& e) {
    throw std::invalid_argument("config '" + path + "': " + e.what());
  }
  return parse_config(command, doc);
}

json render(const RunSpec& spec) { return spec.config; }

species::SpeciesParams resolve_species(const json& root,
                                       const std::string& name) {
  if (root.contains("species_overrides"))
    for (const auto& s : root.at("species_overrides"))
      if (s.at("name").get<std::string>() == name)
        return species::make_species(
            name, HalfInt::from_value(s.at("I").get<double>()),
            s.at("Gamma_MHz").get<double>(), get_num(s, "", "A_MHz", 0.0),
            get_num(s, "", "Q_MHz", 0.0), get_num(s, "", "gJ", 1.0),
            get_num(s, "", "gI", 0.0), get_num(s, "", "g_g", 0.0),
            get_num(s, "", "g_s", 0.1));
  return species::species_lookup(name);
}

detection::DetectionConfig parse_detection_config(const json& det) {
  detection::DetectionConfig cfg;
  cfg.B = get_num(det, "/detection", "B_T", 0.0);
  cfg.Omega = get_num(det, "/detection", "Omega_MHz", 0.0) * constants::MHz;
  cfg.Delta = get_num(det, "/detection", "Delta_MHz", 0.0) * constants::MHz;
  cfg.Omega_c =
      get_num(det, "/detection", "Omega_c_MHz", 0.0) * constants::MHz;
  if (det.contains("tau_us"))
    cfg.tau = det.at("tau_us").get<double>() * constants::us;
  cfg.decay_cutoff = get_num(det, "/detection", "decay_cutoff", 30.0);
  cfg.tau_max = get_num(det, "/detection", "tau_max_s", 10.0);
  const std::string shape =
      get_str(det, "/detection", "pulse_shape", "rectangular");
  if (shape == "rectangular")
    cfg.pulse_shape = detection::PulseShape::rectangular;
  else if (shape == "cos2_ramp")
    cfg.pulse_shape = detection::PulseShape::cos2_ramp;
  else
    fail("/detection/pulse_shape",
         "expected \"rectangular\" or \"cos2_ramp\"");
  cfg.ramp_fraction = get_num(det, "/detection", "ramp_fraction", 0.1);
  cfg.ramp_steps =
      static_cast<int>(get_num(det, "/detection", "ramp_steps", 8.0));
  return cfg;
}

detection::SolverOptions parse_solver_options(const json& det) {
  detection::SolverOptions opt;
  opt.force_dense = get_bool(det, "/detection", "force_dense", false);
  opt.force_pade = get_bool(det, "/detection", "force_pade", false);
  return opt;
}

gate::TwoWellParams parse_gate_params(const json& g) {
  gate::TwoWellParams p;
  p.I = HalfInt::from_value(get_num(g, "/gate", "I", 0.5));
  p.J = get_num(g, "/gate", "J_MHz", 1.0) * constants::MHz;
  const double ratio = get_num(g, "/gate", "Ugg_over_J", 40.0);
  p.U_gg = ratio * p.J;
  p.U_ss = get_num(g, "/gate", "Uss_over_Ugg", 12.0) * p.U_gg;
  p.V = get_num(g, "/gate", "V_over_Ugg", 9.0) * p.U_gg;
  p.V_ex = get_num(g, "/gate", "Vex_over_Ugg", 1.0) * p.U_gg;
  p.B = get_num(g, "/gate", "B_T", 0.0);
  p.g_g = get_num(g, "/gate", "g_g", 0.0);
  p.g_s = get_num(g, "/gate", "g_s", 0.0);
  return p;
}

std::vector<gate::Token> parse_schedule(const json& g) {
  if (!g.contains("schedule")) return gate::default_schedule();
  std::vector<gate::Token> sched;
  for (const auto& t : g.at("schedule"))
    sched.push_back(gate::token_from_string(t.get<std::string>()));
  return sched;
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const json& doc) {
  // identifies the computation: where the results go doesn't belong in it
  json content = doc;
  content.erase("output_dir");
  content.erase("formats");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(content.dump())));
  return buf;
}

}  // namespace aeqr::io
