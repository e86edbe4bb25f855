#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aeqr/detection/model.hpp"

namespace aeqr::detection {

// CPTP map on the g nuclear manifold extracted from one detection pulse:
// drive on for tau, then everything off for decay_cutoff/Gamma.
struct QuantumChannel {
  int d = 0;        // 2I+1
  CMatrix S;        // d^2 x d^2 superoperator, column stacking
  double tau = 0.0;
  double tp_defect = 0.0;
  double choi_min_eig = 0.0;
  double choi_herm_defect = 0.0;
};

struct DetectionReport {
  std::string species;
  double B = 0.0, Omega = 0.0, Delta = 0.0, Omega_c = 0.0;  // T, rad/s
  double tau = 0.0;            // s
  double N = 0.0;              // photons scattered
  std::vector<double> phi;     // target phases, m_I descending, phi[-I] = 0
  double Fbar = 0.0;
  double p = 0.0;              // 1 - Fbar
  double tp_defect = 0.0;
  double choi_min_eig = 0.0;
};

struct GJSensitivity {
  double gJ = 0.0;
  double p_lo = 0.0, p_hi = 0.0;  // p at 0.9 gJ and 1.1 gJ
  double dp_dgJ = 0.0;
};

struct AnalyticEstimates {
  double N_est = 0.0;  // Gamma tau Omega^2 / Delta^2
  // quadrupole splittings of the |e,0> ladder, m_I descending
  std::vector<double> delta_literal;      // 3 Q m^2
  std::vector<double> delta_hamiltonian;  // from the model diagonal at B
  double Gamma12_literal = 0.0, Gamma12_hamiltonian = 0.0;
  double p_literal = 0.0, p_hamiltonian = 0.0;  // Gamma12 * tau
  double p_scaling = 0.0;                       // N_est (Q/Delta)^2
};

struct RetentionReport {
  double N = 0.0;
  double retention = 0.0;  // 2 |<g,m|rho|s,m>| at the end
};

// Pulse-stage and decay-stage propagators for one configuration, reused by
// calibration (many tau) and channel extraction. A ramped pulse is a train
// of piecewise-constant segments, each with its own propagator.
class DetectionEngine {
 public:
  DetectionEngine(const DetectionSpace& space, const species::SpeciesParams& sp,
                  const DetectionConfig& cfg, const SolverOptions& opt = {});

  const DetectionSpace& space() const { return space_; }
  const species::SpeciesParams& species_params() const { return sp_; }
  const DetectionConfig& config() const { return cfg_; }
  double decay_time() const { return cfg_.decay_cutoff / sp_.Gamma; }
  bool rectangular() const { return segments_.size() == 1; }

  // vec(rho) of the maximally mixed g-manifold state
  std::vector<cd> mixed_g_state() const;
  // pulse for tau followed by the decay wait
  std::vector<cd> run_pulse(std::span<const cd> vrho0, double tau) const;
  // Gamma * integral of the e population over pulse plus decay wait
  double photons_from(std::span<const cd> vrho0, double tau) const;
  double photons(double tau) const;  // from the maximally mixed g state
  double residual_e_population(std::span<const cd> vrho_final) const;

  QuantumChannel channel(double tau) const;
  double calibrate_tau(double N_target, double* achieved = nullptr) const;

  // the flat (full-Omega) pulse segment and the drive-off generator
  const LindbladPropagator& pulse_propagator() const;
  const LindbladPropagator& decay_propagator() const { return off_; }

 private:
  struct Segment {
    double frac = 1.0;  // of tau
    std::shared_ptr<const LindbladPropagator> prop;  // fall mirrors rise
  };
  DetectionSpace space_;
  species::SpeciesParams sp_;
  DetectionConfig cfg_;
  std::vector<Segment> segments_;  // pulse stage, in time order
  size_t flat_segment_ = 0;
  LindbladPropagator off_;
  std::vector<cd> w_e_;  // row functional tr(P_e rho)
};

// Target phases phi_m (phi at m = -I fixed to 0, the rest read from the
// (m,-I) coherence amplitudes of the channel). m_I-descending order.
std::vector<double> ideal_phases(const QuantumChannel& ch);

// Average gate fidelity against U = diag(e^{i phi}) through the
// entanglement-fidelity identity (exact), and a Haar Monte-Carlo estimator.
double average_gate_fidelity(const QuantumChannel& ch,
                             std::span<const double> phi);
struct McFidelity {
  double mean = 0.0;
  double std_error = 0.0;
  int samples = 0;
};
McFidelity average_gate_fidelity_mc(const QuantumChannel& ch,
                                    std::span<const double> phi, int samples,
                                    uint64_t seed);

// calibrate -> channel -> phases -> fidelity
DetectionReport detection_error(const DetectionSpace& space,
                                const species::SpeciesParams& sp,
                                const DetectionConfig& cfg, double N_target,
                                const SolverOptions& opt = {});

GJSensitivity gj_sensitivity(const DetectionSpace& space,
                             const species::SpeciesParams& sp,
                             const DetectionConfig& cfg, double N_target,
                             const SolverOptions& opt = {});

AnalyticEstimates analytic_estimates(const species::SpeciesParams& sp,
                                     const DetectionConfig& cfg, HalfInt m1,
                                     HalfInt m2);

// Coherence of (|g,m> + |s,m>)/sqrt(2) surviving one detection pulse.
RetentionReport coherence_retention(const DetectionSpace& space,
                                    const species::SpeciesParams& sp,
                                    const DetectionConfig& cfg, HalfInt m,
                                    const SolverOptions& opt = {});

}  // namespace aeqr::detection
