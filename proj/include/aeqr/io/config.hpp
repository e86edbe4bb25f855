#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aeqr/detection/channel.hpp"
#include "aeqr/gate/gate.hpp"
#include "aeqr/species/species.hpp"

namespace aeqr::io {

using json = nlohmann::ordered_json;

// One validated run: a command plus the configuration document it operates
// on. Units at this boundary are linear MHz, Tesla and microseconds; the
// parsers convert to internal rad/s and seconds exactly once.
struct RunSpec {
  std::string command;  // species|spectrum|detect|calibrate|gate|sweep|optimize
  json config;          // full validated document
  std::string output_dir = "aeqr-out";
  std::vector<std::string> formats = {"json", "csv"};
  uint64_t seed = 0;
};

// Throws std::invalid_argument with a path-qualified message on unknown
// keys, wrong types, or violated constraints (e.g. Q != 0 with I = 1/2).
RunSpec parse_config(const std::string& command, const json& doc);
RunSpec parse_config_file(const std::string& command, const std::string& path);

json render(const RunSpec& spec);  // inverse of parse_config

// Species from "species" name fields: built-in table or species_overrides.
species::SpeciesParams resolve_species(const json& root,
                                       const std::string& name);

detection::DetectionConfig parse_detection_config(const json& det);
detection::SolverOptions parse_solver_options(const json& det);
gate::TwoWellParams parse_gate_params(const json& g);
std::vector<gate::Token> parse_schedule(const json& g);

uint64_t fnv1a64(std::string_view s);
std::string config_hash(const json& doc);

}  // namespace aeqr::io
