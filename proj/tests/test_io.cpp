#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "aeqr/constants.hpp"
#include "aeqr/io/report.hpp"

using namespace aeqr;
using namespace aeqr::io;
using aeqr::constants::MHz;

TEST_CASE("minimal detect config fills defaults") {
  json doc;
  doc["detection"]["species"] = "Yb171";
  doc["detection"]["B_T"] = 2.0;
  doc["detection"]["Omega_MHz"] = 30.0;
  doc["detection"]["N_target"] = 100.0;
  const RunSpec spec = parse_config("detect", doc);
  const auto cfg = parse_detection_config(spec.config.at("detection"));
  CHECK(cfg.B == 2.0);
  CHECK(cfg.Omega == doctest::Approx(30.0 * MHz));
  CHECK(cfg.Delta == 0.0);
  CHECK(cfg.decay_cutoff == 30.0);
  CHECK_FALSE(cfg.tau.has_value());
  CHECK(spec.formats == std::vector<std::string>{"json", "csv"});
}

TEST_CASE("unknown keys are rejected with their path") {
  json doc;
  doc["detection"]["species"] = "Yb171";
  doc["detection"]["Omeag_MHz"] = 30.0;  // typo
  try {
    parse_config("detect", doc);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("/detection/Omeag_MHz") != std::string::npos);
  }
}

TEST_CASE("species overrides are validated at parse time") {
  json doc;
  json bad;
  bad["name"] = "X171";
  bad["I"] = 0.5;
  bad["Gamma_MHz"] = 20.0;
  bad["Q_MHz"] = 5.0;  // Q with I = 1/2
  doc["species_overrides"] = json::array({bad});
  CHECK_THROWS(parse_config("detect", doc));

  bad["Q_MHz"] = 0.0;
  doc["species_overrides"] = json::array({bad});
  const RunSpec ok = parse_config("detect", doc);
  const auto sp = resolve_species(ok.config, "X171");
  CHECK(sp.Gamma == doctest::Approx(20.0 * MHz));
}

TEST_CASE("built-in constants round-trip through config serialization") {
  for (const auto& sp : species::builtin_species()) {
    const json j = species_json(sp);
    json doc;
    doc["species_overrides"] = json::array({j});
    const RunSpec spec = parse_config("species", doc);
    const auto back = resolve_species(spec.config, sp.name);
    CHECK(back.I == sp.I);
    CHECK(back.Gamma == sp.Gamma);  // bitwise: built from the same MHz source
    CHECK(back.A == sp.A);
    CHECK(back.Q == sp.Q);
    CHECK(back.source.Gamma == sp.source.Gamma);
  }
}

TEST_CASE("render / parse round-trip reproduces the spec") {
  json doc;
  doc["seed"] = 7;
  doc["output_dir"] = "somewhere";
  doc["formats"] = json::array({"json"});
  doc["detection"]["species"] = "Sr87";
  doc["detection"]["B_T"] = 1.5;
  const RunSpec spec = parse_config("detect", doc);
  const RunSpec again = parse_config("detect", render(spec));
  CHECK(render(again) == render(spec));
  CHECK(again.seed == spec.seed);
  CHECK(again.formats == spec.formats);
}

TEST_CASE("gate config parses to parameters and schedule") {
  json doc;
  doc["gate"]["I"] = 1.5;
  doc["gate"]["J_MHz"] = 2.0;
  doc["gate"]["Ugg_over_J"] = 50.0;
  doc["gate"]["schedule"] = json::array({"bias", "phase_r_pos", "swap_r"});
  const RunSpec spec = parse_config("gate", doc);
  const auto p = parse_gate_params(spec.config.at("gate"));
  CHECK(p.I.twice == 3);
  CHECK(p.J == doctest::Approx(2.0 * MHz));
  CHECK(p.U_gg == doctest::Approx(100.0 * MHz));
  const auto sched = parse_schedule(spec.config.at("gate"));
  REQUIRE(sched.size() == 3);
  CHECK(sched[0] == gate::Token::bias);
  CHECK(sched[2] == gate::Token::swap_r);

  json bad = doc;
  bad["gate"]["schedule"].push_back("warp");
  CHECK_THROWS(parse_config("gate", bad));
}

TEST_CASE("report files are byte-identical across renders") {
  const auto tmp = std::filesystem::temp_directory_path() / "aeqr_io_test";
  std::filesystem::remove_all(tmp);

  detection::DetectionReport rep;
  rep.species = "Yb171";
  rep.B = 2.0;
  rep.Omega = 30.0 * MHz;
  rep.tau = 1.3e-6;
  rep.N = 99.7;
  rep.phi = {0.123456789123, 0.0};
  rep.Fbar = 0.99;
  rep.p = 0.01;

  json doc;
  doc["detection"]["species"] = "Yb171";
  const RunSpec spec = parse_config("detect", doc);

  const auto paths1 = write_report(tmp.string(), "a",
                                   detection_report_json(rep, nullptr),
                                   detection_report_csv(rep), spec);
  const auto paths2 = write_report(tmp.string(), "b",
                                   detection_report_json(rep, nullptr),
                                   detection_report_csv(rep), spec);
  REQUIRE(paths1.size() == paths2.size());
  for (size_t k = 0; k < paths1.size(); ++k) {
    std::ifstream f1(paths1[k]), f2(paths2[k]);
    const std::string s1((std::istreambuf_iterator<char>(f1)),
                         std::istreambuf_iterator<char>());
    const std::string s2((std::istreambuf_iterator<char>(f2)),
                         std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
  }
  std::filesystem::remove_all(tmp);
}

TEST_CASE("config hash is stable and content-sensitive") {
  json a, b;
  a["seed"] = 1;
  b["seed"] = 2;
  CHECK(config_hash(a) == config_hash(a));
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("9-significant-digit rounding") {
  CHECK(round9(1.0) == 1.0);
  CHECK(round9(0.123456789123456) == doctest::Approx(0.123456789).epsilon(1e-12));
  CHECK(round9(1e-300) > 0.0);
}
