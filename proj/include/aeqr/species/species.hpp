#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "aeqr/halfint.hpp"

namespace aeqr::species {

// Atomic constants for one fermionic alkaline-earth(-like) isotope.
// Gamma/A/Q are angular frequencies (rad/s) of the 1P1 detection state;
// the linear-MHz inputs they were built from are kept verbatim in `source`
// so config serialization round-trips exactly.
struct SpeciesParams {
  std::string name;
  HalfInt I;
  double Gamma = 0.0;  // 1P1 linewidth
  double A = 0.0;      // magnetic-dipole hyperfine constant of |e>
  double Q = 0.0;      // electric-quadrupole hyperfine constant of |e>
  double gJ = 1.0;     // electronic g-factor of |e| (pure-singlet default)
  double gI = 0.0;     // nuclear g-factor, enters -gI mu_N Iz B
  // Effective clock-state g-factors, used only by the transition-spectrum
  // enumeration. No measured values are baked in; the defaults just provide
  // a nonzero differential and are meant to be overridden per experiment.
  double g_g = 0.0;
  double g_s = 0.1;

  struct SourceMHz {
    double Gamma = 0.0, A = 0.0, Q = 0.0;
  } source;
};

// Validates invariants (I > 0 fermionic, Gamma > 0, Q = 0 for I = 1/2) and
// converts linear-MHz constants to rad/s.
SpeciesParams make_species(std::string name, HalfInt I, double Gamma_MHz,
                           double A_MHz, double Q_MHz, double gJ = 1.0,
                           double gI = 0.0, double g_g = 0.0,
                           double g_s = 0.1);

const std::vector<SpeciesParams>& builtin_species();
SpeciesParams species_lookup(std::string_view name);

enum class Polarization { sigma_minus, pi, sigma_plus };
const char* to_string(Polarization p);

struct TransitionLine {
  HalfInt m_g, m_s;
  Polarization pol;
  double offset;  // rad/s relative to the zero-field line
};

struct Spectrum {
  std::vector<TransitionLine> lines;
  double min_spacing = 0.0;     // over all pairs of lines
  double min_pi_spacing = 0.0;  // over pi lines only
};

// All |g,m_g> -> |s,m_s> lines with |dm| <= 1 under level energies
// E(alpha, m) = -g_alpha mu_N m B; count is 6I+1.
Spectrum transition_spectrum(HalfInt I, double g_g, double g_s, double B);

}  // namespace aeqr::species
