#pragma once

#include <span>
#include <string>
#include <vector>

#include "aeqr/halfint.hpp"
#include "aeqr/la/matrix.hpp"

namespace aeqr::gate {

using la::cd;
using la::CMatrix;

enum class Site : int { L = 0, R = 1 };
enum class Orbital : int { g = 0, s = 1 };

// Two-particle fermionic Fock basis over modes (site, orbital, m_I).
// Mode order: site-major (all L before R), then orbital (g before s), then
// m ascending. Two-particle states are c+_p c+_q |0> with p < q; fermionic
// signs come from exact bit-parity bookkeeping, so anticommutation holds to
// the last ulp.
class FockBasis2 {
 public:
  explicit FockBasis2(HalfInt I);

  HalfInt I() const { return I_; }
  int nuclear_dim() const { return I_.multiplicity(); }
  int n_modes() const { return 4 * nuclear_dim(); }
  int dim() const { return n_modes() * (n_modes() - 1) / 2; }

  int mode(Site site, Orbital orb, HalfInt m) const;
  Site mode_site(int p) const;
  Orbital mode_orbital(int p) const;
  HalfInt mode_m(int p) const;

  int pair_index(int p, int q) const;  // requires p < q
  std::pair<int, int> pair_modes(int idx) const;
  bool one_per_site(int idx) const;

  // Creation operators between the 0-, 1- and 2-particle sectors (columns:
  // source sector). Used by the anticommutation checks and tests.
  CMatrix create_01(int p) const;  // |0>        -> 1-particle
  CMatrix create_12(int p) const;  // 1-particle -> 2-particle

 private:
  HalfInt I_;
};

struct TwoWellParams {
  HalfInt I{1};
  double J = 1.0;      // tunneling, rad/s
  double U_gg = 40.0;  // rad/s
  double U_ss = 0.0;
  double V = 0.0;      // direct interorbital, (U+ + U-)/2
  double V_ex = 0.0;   // exchange, (U+ - U-)/2
  double B = 0.0;      // Tesla
  double g_g = 0.0, g_s = 0.0;
};

// Interaction blockade requires U_gg to sit far (in units of J) from every
// other two-atom interaction energy.
double blockade_min_gap_over_J(const TwoWellParams& p);

// Two-well single-band Hubbard Hamiltonian on the 2-particle sector:
// tunneling, bias on the right well, Zeeman, same-orbital onsite U, direct V
// and exchange V_ex interorbital terms. Hermitian; exchange carries the full
// fermionic signs.
CMatrix build_hubbard(const FockBasis2& basis, const TwoWellParams& p,
                      double DeltaE);

// P: phase -1 on every (R, g, m>0) occupation. X: swap (R,g,m) <-> (R,g,-m)
// lifted to Fock space with reordering signs. Both involutive.
struct LocalUnitaries {
  CMatrix P, X;
};
LocalUnitaries local_unitaries(const FockBasis2& basis);

enum class Token { bias, phase_r_pos, swap_r };
// bias; phase, bias, phase; swap, bias, phase, bias, phase, swap
std::vector<Token> default_schedule();
Token token_from_string(const std::string& s);
const char* to_string(Token t);

struct PhaseRow {
  Orbital orb_L, orb_R;
  HalfInt m_L, m_R;
  double phase = 0.0;  // after reference normalization
  double amp = 0.0;    // |<state|U|state>|
  double leak = 0.0;   // population outside the one-per-site sector
};

struct GateReport {
  CMatrix U;  // reference-normalized protocol unitary
  std::vector<PhaseRow> table;
  double tau = 0.0;
  double eps = 0.0;  // 1 - |tr(Ut' U P)/d|^2 on the one-per-site sector
  double leakage_max = 0.0, leakage_mean = 0.0;
  double max_gg_phase_err = 0.0;         // vs pi
  double max_spectator_phase_err = 0.0;  // vs 0
  double unitarity_defect = 0.0;
  double blockade_gap_over_J = 0.0;
  bool blockade_ok = true;
};

// Runs the bias/phase/swap sequence with tau = pi/(sqrt(2) J) per bias and
// reports per-state phases relative to the frozen |s,+I;s,+I> reference.
GateReport run_gate_protocol(const TwoWellParams& p,
                             std::span<const Token> schedule);
GateReport run_gate_protocol(const TwoWellParams& p);

// Protocol phases with the accumulated nuclear-Zeeman phase of each
// one-per-site state removed (tracking the swap token's sign flips); in the
// blockade regime these match the B = 0 phases.
std::vector<double> zeeman_corrected_phases(const TwoWellParams& p,
                                            std::span<const Token> schedule,
                                            const GateReport& rep);

struct BiasPulseReport {
  double swap_max_deviation = 0.0;  // || U_restricted - SWAP ||_max
  double max_antisym_phase_err = 0.0;  // vs pi
  double max_sym_phase_err = 0.0;      // vs 0 (includes m1 = m2 states)
  double min_return_probability = 0.0;
};
// One bias pulse restricted to the gg one-per-site sector, compared against
// the nuclear exchange map.
BiasPulseReport bias_pulse_analysis(const TwoWellParams& p);

struct ScalingPoint {
  double j_over_u = 0.0;
  double eps = 0.0;
};
struct ScalingReport {
  std::vector<ScalingPoint> points;
  double slope = 0.0;  // d log(eps) / d log(J/U)
};
// Full protocol at each U_gg/J ratio, other interactions scaled
// proportionally.
ScalingReport blockade_scaling(const TwoWellParams& base,
                               std::span<const double> ratios);

}  // namespace aeqr::gate
