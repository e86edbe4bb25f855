#pragma once

#include <numbers>

namespace aeqr::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * pi;

// Magnetic moments as linear frequencies per Tesla (CODATA), the single
// source of truth for unit conversions in this project.
inline constexpr double mu_B_Hz_per_T = 13.996245e9;  // Bohr magneton / h
inline constexpr double mu_N_Hz_per_T = 7.6225932e6;  // nuclear magneton / h

// Angular-frequency versions (rad/s per Tesla); all internal Hamiltonians
// are written in rad/s with hbar = 1.
inline constexpr double mu_B = two_pi * mu_B_Hz_per_T;
inline constexpr double mu_N = two_pi * mu_N_Hz_per_T;

inline constexpr double MHz = two_pi * 1e6;  // rad/s per linear MHz
inline constexpr double GHz = two_pi * 1e9;
inline constexpr double us = 1e-6;           // seconds per microsecond

}  // namespace aeqr::constants
