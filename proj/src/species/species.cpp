#include "aeqr/species/species.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aeqr/constants.hpp"

namespace aeqr::species {

SpeciesParams make_species(std::string name, HalfInt I, double Gamma_MHz,
                           double A_MHz, double Q_MHz, double gJ, double gI,
                           double g_g, double g_s) {
  if (I.twice <= 0 || I.twice % 2 == 0)
    throw std::invalid_argument("species '" + name +
                                "': I must be a positive half-odd-integer "
                                "(fermionic isotope)");
  if (!(Gamma_MHz > 0.0))
    throw std::invalid_argument("species '" + name + "': Gamma must be > 0");
  if (I.twice == 1 && Q_MHz != 0.0)
    throw std::invalid_argument("species '" + name +
                                "': Q must be 0 for I = 1/2 (no quadrupole "
                                "moment)");
  SpeciesParams p;
  p.name = std::move(name);
  p.I = I;
  p.Gamma = Gamma_MHz * constants::MHz;
  p.A = A_MHz * constants::MHz;
  p.Q = Q_MHz * constants::MHz;
  p.gJ = gJ;
  p.gI = gI;
  p.g_g = g_g;
  p.g_s = g_s;
  p.source = {Gamma_MHz, A_MHz, Q_MHz};
  return p;
}

const std::vector<SpeciesParams>& builtin_species() {
  static const std::vector<SpeciesParams> table = {
      make_species("Yb171", HalfInt(1), 28.0, -213.0, 0.0),
      make_species("Sr87", HalfInt(9), 30.2, -3.4, 39.0),
      make_species("Ca43", HalfInt(7), 35.0, -15.5, -3.5),
  };
  return table;
}

SpeciesParams species_lookup(std::string_view name) {
  for (const auto& s : builtin_species())
    if (s.name == name) return s;
  std::string msg = "unknown species '" + std::string(name) + "'; available:";
  for (const auto& s : builtin_species()) msg += " " + s.name;
  throw std::invalid_argument(msg);
}

const char* to_string(Polarization p) {
  switch (p) {
    case Polarization::sigma_minus: return "sigma-";
    case Polarization::pi: return "pi";
    case Polarization::sigma_plus: return "sigma+";
  }
  return "?";
}

Spectrum transition_spectrum(HalfInt I, double g_g, double g_s, double B) {
  Spectrum sp;
  for (int tmg = I.twice; tmg >= -I.twice; tmg -= 2) {
    for (int dm = -1; dm <= 1; ++dm) {
      const int tms = tmg + 2 * dm;
      if (std::abs(tms) > I.twice) continue;
      TransitionLine line;
      line.m_g = HalfInt(tmg);
      line.m_s = HalfInt(tms);
      line.pol = dm == 0 ? Polarization::pi
                         : (dm > 0 ? Polarization::sigma_plus
                                   : Polarization::sigma_minus);
      // E(alpha, m) = -g_alpha mu_N m B, so the line offset
      // E_s(m_s) - E_g(m_g) = mu_N B (g_g m_g - g_s m_s).
      line.offset =
          constants::mu_N * B * (g_g * line.m_g.value() - g_s * line.m_s.value());
      sp.lines.push_back(line);
    }
  }

  auto min_gap = [](std::vector<double> v) {
    if (v.size() < 2) return std::numeric_limits<double>::infinity();
    std::sort(v.begin(), v.end());
    double g = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < v.size(); ++i) g = std::min(g, v[i] - v[i - 1]);
    return g;
  };
  std::vector<double> all, pis;
  for (const auto& l : sp.lines) {
    all.push_back(l.offset);
    if (l.pol == Polarization::pi) pis.push_back(l.offset);
  }
  sp.min_spacing = min_gap(std::move(all));
  sp.min_pi_spacing = min_gap(std::move(pis));
  return sp;
}

}  // namespace aeqr::species
