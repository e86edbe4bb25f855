#pragma once

#include <string>
#include <vector>

#include "aeqr/io/config.hpp"
#include "aeqr/sweep/sweep.hpp"

namespace aeqr::io {

// All numbers in emitted documents are rounded to 9 significant digits, so a
// report rendered twice is byte-identical.
double round9(double v);

json species_json(const species::SpeciesParams& sp);
json spectrum_json(const species::Spectrum& spec, HalfInt I, double g_g,
                   double g_s, double B);
json detection_report_json(const detection::DetectionReport& rep,
                           const detection::GJSensitivity* sens);
json gate_report_json(const gate::GateReport& rep,
                      const gate::TwoWellParams& params);
json result_table_json(const sweep::ResultTable& table);

std::string detection_report_csv(const detection::DetectionReport& rep);
std::string gate_phase_table_csv(const gate::GateReport& rep);
std::string result_table_csv(const sweep::ResultTable& table);
std::string spectrum_csv(const species::Spectrum& spec);

// Adds {tool, config_hash, seed} metadata, writes <dir>/<name>.json and/or
// <dir>/<name>.csv per `formats`, returns the written paths.
std::vector<std::string> write_report(const std::string& dir,
                                      const std::string& name,
                                      json body,  // by value; metadata added
                                      const std::string& csv,
                                      const RunSpec& spec);

}  // namespace aeqr::io
