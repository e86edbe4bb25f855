#pragma once

#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace aeqr {

// Half-integer angular momentum quantum number, stored as twice its value so
// that spins like 9/2 stay exact. Arithmetic that must stay exact (level
// counting, m enumeration) goes through `twice`; physics formulas use value().
struct HalfInt {
  int twice = 0;

  constexpr HalfInt() = default;
  constexpr explicit HalfInt(int twice_value) : twice(twice_value) {}

  static HalfInt from_value(double v) {
    const double t = 2.0 * v;
    const int ti = static_cast<int>(t > 0 ? t + 0.5 : t - 0.5);
    if (std::abs(t - ti) > 1e-9)
      throw std::invalid_argument("not a half-integer: " + std::to_string(v));
    return HalfInt(ti);
  }

  constexpr double value() const { return 0.5 * twice; }
  constexpr bool is_integer() const { return twice % 2 == 0; }
  constexpr int multiplicity() const { return twice + 1; }  // 2j+1

  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
  friend constexpr HalfInt operator-(HalfInt a) { return HalfInt(-a.twice); }
};

inline std::string to_string(HalfInt h) {
  if (h.twice % 2 == 0) return std::to_string(h.twice / 2);
  return std::to_string(h.twice) + "/2";
}

}  // namespace aeqr
