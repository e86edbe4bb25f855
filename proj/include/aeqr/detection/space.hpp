#pragma once

#include <vector>

#include "aeqr/halfint.hpp"

namespace aeqr::detection {

// Electronic levels entering the detection model. g (1S0) and e (1P1) are
// always present; r is a second J=0 level used for dark-state selectivity,
// s is the dark clock state kept as a spectator.
enum class Level : int { g = 0, e = 1, r = 2, s = 3 };

// Basis layout: level blocks in the order [g, e, r, s] (those present),
// nuclear index m_I descending within each block, and m_J descending
// (+1, 0, -1) as the outer index inside the e block.
class DetectionSpace {
 public:
  static DetectionSpace make(HalfInt I, bool with_r = false,
                             bool with_s = false);

  HalfInt I() const { return I_; }
  int nuclear_dim() const { return I_.multiplicity(); }
  int dim() const { return dim_; }
  bool has(Level lv) const { return offset_[static_cast<int>(lv)] >= 0; }

  // m_I descending: index 0 <-> m_I = +I
  int nuclear_index(HalfInt mI) const { return (I_.twice - mI.twice) / 2; }
  HalfInt nuclear_m(int idx) const { return HalfInt(I_.twice - 2 * idx); }

  // mJ in {-1, 0, +1}; must be 0 for J=0 levels
  int index(Level lv, int mJ, HalfInt mI) const;

  Level level_of(int idx) const;
  int mJ_of(int idx) const;
  HalfInt mI_of(int idx) const;
  // twice (m_I + m_J); conserved by the detection Hamiltonian and shifted
  // equally on both indices by the jumps, which is what makes the
  // Liouvillian block-diagonal (see LindbladPropagator).
  int twice_mF_of(int idx) const;
  std::vector<int> twice_mF_table() const;

 private:
  HalfInt I_;
  int dim_ = 0;
  int offset_[4] = {-1, -1, -1, -1};
};

}  // namespace aeqr::detection
