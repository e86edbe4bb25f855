#include "aeqr/detection/space.hpp"

#include <stdexcept>

namespace aeqr::detection {

DetectionSpace DetectionSpace::make(HalfInt I, bool with_r, bool with_s) {
  if (I.twice <= 0 || I.twice % 2 == 0)
    throw std::invalid_argument("DetectionSpace: I must be half-odd-integer");
  DetectionSpace sp;
  sp.I_ = I;
  const int nd = I.multiplicity();
  int off = 0;
  sp.offset_[static_cast<int>(Level::g)] = off;
  off += nd;
  sp.offset_[static_cast<int>(Level::e)] = off;
  off += 3 * nd;
  if (with_r) {
    sp.offset_[static_cast<int>(Level::r)] = off;
    off += nd;
  }
  if (with_s) {
    sp.offset_[static_cast<int>(Level::s)] = off;
    off += nd;
  }
  sp.dim_ = off;
  return sp;
}

int DetectionSpace::index(Level lv, int mJ, HalfInt mI) const {
  const int base = offset_[static_cast<int>(lv)];
  if (base < 0) throw std::invalid_argument("DetectionSpace: level absent");
  if (std::abs(mI.twice) > I_.twice || (I_.twice - mI.twice) % 2 != 0)
    throw std::invalid_argument("DetectionSpace: bad m_I");
  const int ni = nuclear_index(mI);
  if (lv == Level::e) {
    if (mJ < -1 || mJ > 1) throw std::invalid_argument("bad m_J");
    return base + (1 - mJ) * nuclear_dim() + ni;  // mJ descending
  }
  if (mJ != 0) throw std::invalid_argument("m_J must be 0 on a J=0 level");
  return base + ni;
}

Level DetectionSpace::level_of(int idx) const {
  const int nd = nuclear_dim();
  for (int lv = 3; lv >= 0; --lv) {
    const int base = offset_[lv];
    if (base >= 0 && idx >= base) {
      const int width = lv == static_cast<int>(Level::e) ? 3 * nd : nd;
      if (idx < base + width) return static_cast<Level>(lv);
    }
  }
  throw std::out_of_range("DetectionSpace: index out of range");
}

int DetectionSpace::mJ_of(int idx) const {
  const Level lv = level_of(idx);
  if (lv != Level::e) return 0;
  const int rel = idx - offset_[static_cast<int>(Level::e)];
  return 1 - rel / nuclear_dim();
}

HalfInt DetectionSpace::mI_of(int idx) const {
  const Level lv = level_of(idx);
  const int rel = idx - offset_[static_cast<int>(lv)];
  return nuclear_m(rel % nuclear_dim());
}

int DetectionSpace::twice_mF_of(int idx) const {
  return mI_of(idx).twice + 2 * mJ_of(idx);
}

std::vector<int> DetectionSpace::twice_mF_table() const {
  std::vector<int> t(dim_);
  for (int i = 0; i < dim_; ++i) t[i] = twice_mF_of(i);
  return t;
}

}  // namespace aeqr::detection
