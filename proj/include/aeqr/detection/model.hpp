#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "aeqr/detection/space.hpp"
#include "aeqr/la/expm.hpp"
#include "aeqr/la/matrix.hpp"
#include "aeqr/species/species.hpp"

namespace aeqr::detection {

using la::cd;
using la::CMatrix;

enum class PulseShape { rectangular, cos2_ramp };

struct DetectionConfig {
  double Omega = 0.0;    // rad/s, pi-polarized probe coupling |g><e,0|
  double Delta = 0.0;    // rad/s, probe detuning
  double B = 0.0;        // Tesla
  std::optional<double> tau;  // s; absent until calibrated
  double Omega_c = 0.0;  // rad/s, control coupling |r><e,0|
  double decay_cutoff = 30.0;  // post-pulse wait in units of 1/Gamma
  double tau_max = 10.0;       // s, calibration bracket limit
  // Probe switching. The default is the abrupt pulse; cos^2-shaped edges of
  // relative length ramp_fraction are available as piecewise-constant
  // segments (ramp_steps per edge).
  PulseShape pulse_shape = PulseShape::rectangular;
  double ramp_fraction = 0.1;  // of tau, per edge
  int ramp_steps = 8;
};

// Detection-state Hamiltonian in the probe rotating frame: hyperfine dipole
// and quadrupole terms on the e block, electronic and nuclear Zeeman terms,
// the -Delta shift of e, the pi probe coupling, and (when r is present) the
// control coupling in two-photon resonance. Hermitian by construction.
CMatrix build_hamiltonian(const DetectionSpace& space,
                          const species::SpeciesParams& sp,
                          const DetectionConfig& cfg);

// L_m = sqrt(Gamma) sum_{m_I} |g,m_I><e,m,m_I| for m in {+1, 0, -1};
// each jump preserves the nuclear spin.
std::array<CMatrix, 3> jump_operators(const DetectionSpace& space,
                                      const species::SpeciesParams& sp);

// Column-stacking superoperator of
// drho = -i[H,rho] - 1/2 sum (L'L rho + rho L'L - 2 L rho L').
CMatrix liouvillian(const CMatrix& h, std::span<const CMatrix> jumps);

// Options threaded through for testing the generic paths.
struct SolverOptions {
  bool force_dense = false;  // skip the conserved-quantity block split
  bool force_pade = false;   // skip eigendecomposition
  double cond_threshold = 1e8;
};

// exp(L t) for a fixed Liouvillian. The generator is split into independent
// blocks labeled by q = mF(row) - mF(col), which the detection model
// conserves exactly; the split is verified against the actual matrix and
// abandoned (dense fallback) if any coupling crosses blocks. Each block is
// handled by la::Propagator (eigendecomposition, Pade fallback).
class LindbladPropagator {
 public:
  LindbladPropagator(const CMatrix& l, std::vector<int> twice_mF,
                     const SolverOptions& opt = {});

  int hilbert_dim() const { return d_; }
  int vec_dim() const { return d_ * d_; }
  bool blocked() const { return members_.size() > 1; }
  size_t block_count() const { return members_.size(); }
  const std::vector<int>& block_members(size_t b) const { return members_[b]; }
  int block_of(int vec_index) const { return block_of_[vec_index]; }
  double max_cond() const;

  std::vector<cd> evolve(std::span<const cd> vrho, double t) const;
  // integral of w . rho(t') dt' over [0, t] (w a plain row functional)
  cd integrate_row(std::span<const cd> w, std::span<const cd> vrho0,
                   double t) const;

  // Dense exp(L_b t) of one block. Falls over to extended precision when the
  // accumulated phase |L_b| t is large enough that double-precision
  // eigendecomposition noise (~eps |L| t) would exceed ~1e-9.
  CMatrix block_exp(size_t b, double t) const;

 private:
  int d_ = 0;
  std::vector<std::vector<int>> members_;  // block -> vec indices (ascending)
  std::vector<int> block_of_;              // vec index -> block
  std::vector<la::Propagator> props_;
};

}  // namespace aeqr::detection
