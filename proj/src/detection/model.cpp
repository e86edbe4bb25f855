#include "aeqr/detection/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "aeqr/constants.hpp"
#include "aeqr/qcore/qcore.hpp"

namespace aeqr::detection {

CMatrix build_hamiltonian(const DetectionSpace& space,
                          const species::SpeciesParams& sp,
                          const DetectionConfig& cfg) {
  if (space.I() != sp.I)
    throw std::invalid_argument("build_hamiltonian: space/species I mismatch");
  if (sp.Q != 0.0 && sp.I.twice == 1)
    throw std::invalid_argument(
        "build_hamiltonian: Q != 0 requires I > 1/2 (quadrupole normalization "
        "divides by 2I-1)");
  if (cfg.Omega_c != 0.0 && !space.has(Level::r))
    throw std::invalid_argument("build_hamiltonian: Omega_c set but no r level");

  const HalfInt I = space.I();
  const int nd = space.nuclear_dim();
  const double Iv = I.value();
  const auto spinI = qcore::spin_operators(I);
  const auto spinJ = qcore::spin_operators(HalfInt(2));  // J = 1

  CMatrix h(space.dim(), space.dim());

  // e block: A I.J + quadrupole + gJ muB Jz B - Delta, all on J=1.
  // Both factors are m-descending, so kron(J-op, I-op) matches the layout
  // (mJ outer, mI inner).
  CMatrix idotj = kron(spinJ.jz, spinI.jz);
  CMatrix flip = kron(spinJ.jp, spinI.jm);
  flip += kron(spinJ.jm, spinI.jp);
  flip *= cd(0.5, 0.0);
  idotj += flip;

  CMatrix he = cd(sp.A, 0.0) * idotj;
  if (sp.Q != 0.0) {
    const double Jv = 1.0;
    const double kconst = Iv * (Iv + 1.0) * Jv * (Jv + 1.0);
    const double denom = 2.0 * Iv * Jv * (2.0 * Iv - 1.0) * (2.0 * Jv - 1.0);
    CMatrix quad = cd(3.0, 0.0) * (idotj * idotj);
    quad += cd(1.5, 0.0) * idotj;
    for (int i = 0; i < quad.rows(); ++i) quad(i, i) -= kconst;
    quad *= cd(sp.Q / denom, 0.0);
    he += quad;
  }
  he += cd(sp.gJ * constants::mu_B * cfg.B, 0.0) *
        kron(spinJ.jz, CMatrix::identity(nd));
  for (int i = 0; i < he.rows(); ++i) he(i, i) -= cd(cfg.Delta, 0.0);

  const int ebase = space.index(Level::e, 1, HalfInt(I.twice));
  for (int b = 0; b < 3 * nd; ++b)
    for (int a = 0; a < 3 * nd; ++a) h(ebase + a, ebase + b) = he(a, b);

  // nuclear Zeeman -gI muN Iz B on every block
  const double gzi = -sp.gI * constants::mu_N * cfg.B;
  for (int idx = 0; idx < space.dim(); ++idx)
    h(idx, idx) += cd(gzi * space.mI_of(idx).value(), 0.0);

  // probe -Omega (|g><e,0| + h.c.), nuclear-identity
  for (int ni = 0; ni < nd; ++ni) {
    const HalfInt m = space.nuclear_m(ni);
    const int gi = space.index(Level::g, 0, m);
    const int e0 = space.index(Level::e, 0, m);
    h(gi, e0) += cd(-cfg.Omega, 0.0);
    h(e0, gi) += cd(-cfg.Omega, 0.0);
  }

  // control -Omega_c (|r><e,0| + h.c.), r diagonal stays at the two-photon
  // resonance condition (zero up to nuclear Zeeman)
  if (space.has(Level::r) && cfg.Omega_c != 0.0) {
    for (int ni = 0; ni < nd; ++ni) {
      const HalfInt m = space.nuclear_m(ni);
      const int ri = space.index(Level::r, 0, m);
      const int e0 = space.index(Level::e, 0, m);
      h(ri, e0) += cd(-cfg.Omega_c, 0.0);
      h(e0, ri) += cd(-cfg.Omega_c, 0.0);
    }
  }
  return h;
}

std::array<CMatrix, 3> jump_operators(const DetectionSpace& space,
                                      const species::SpeciesParams& sp) {
  const double root = std::sqrt(sp.Gamma);
  std::array<CMatrix, 3> ls{CMatrix(space.dim(), space.dim()),
                            CMatrix(space.dim(), space.dim()),
                            CMatrix(space.dim(), space.dim())};
  for (int k = 0; k < 3; ++k) {
    const int mJ = 1 - k;  // +1, 0, -1
    for (int ni = 0; ni < space.nuclear_dim(); ++ni) {
      const HalfInt m = space.nuclear_m(ni);
      ls[k](space.index(Level::g, 0, m), space.index(Level::e, mJ, m)) =
          cd(root, 0.0);
    }
  }
  return ls;
}

CMatrix liouvillian(const CMatrix& h, std::span<const CMatrix> jumps) {
  const int d = h.rows();
  if (h.cols() != d) throw std::invalid_argument("liouvillian: H not square");
  for (const auto& l : jumps)
    if (l.rows() != d || l.cols() != d)
      throw std::invalid_argument("liouvillian: jump dimension mismatch");

  const CMatrix id = CMatrix::identity(d);
  // vec(A rho B) = (B^T (x) A) vec(rho), column stacking
  CMatrix sup = cd(0.0, -1.0) * kron(id, h);
  sup += cd(0.0, 1.0) * kron(h.transpose(), id);
  for (const auto& l : jumps) {
    const CMatrix ldl = l.adjoint() * l;
    sup += cd(-0.5, 0.0) * kron(id, ldl);
    sup += cd(-0.5, 0.0) * kron(ldl.transpose(), id);
    sup += kron(l.conjugate(), l);
  }
  return sup;
}

LindbladPropagator::LindbladPropagator(const CMatrix& l,
                                       std::vector<int> twice_mF,
                                       const SolverOptions& opt) {
  const size_t d2 = static_cast<size_t>(l.rows());
  d_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d2))));
  if (l.cols() != l.rows() || static_cast<size_t>(d_) * d_ != d2)
    throw std::invalid_argument("LindbladPropagator: not a D^2 superoperator");
  if (static_cast<int>(twice_mF.size()) != d_)
    throw std::invalid_argument("LindbladPropagator: mF table length");

  std::vector<int> block_of(d2, 0);
  bool split_ok = !opt.force_dense && d_ > 1;
  if (split_ok) {
    std::map<int, int> by_q;
    members_.clear();
    for (int j = 0; j < d_; ++j)
      for (int i = 0; i < d_; ++i) {
        const int q = twice_mF[i] - twice_mF[j];
        auto [it, fresh] = by_q.try_emplace(q, static_cast<int>(members_.size()));
        if (fresh) members_.emplace_back();
        const int b = it->second;
        block_of[i + static_cast<size_t>(j) * d_] = b;
        members_[b].push_back(i + j * d_);
      }
    // verify: no coupling may cross blocks
    for (size_t col = 0; col < d2 && split_ok; ++col)
      for (size_t row = 0; row < d2; ++row)
        if (l(static_cast<int>(row), static_cast<int>(col)) != cd(0.0, 0.0) &&
            block_of[row] != block_of[col]) {
          split_ok = false;
          break;
        }
  }
  if (!split_ok) {
    members_.assign(1, std::vector<int>(d2));
    for (size_t k = 0; k < d2; ++k) members_[0][k] = static_cast<int>(k);
    std::fill(block_of.begin(), block_of.end(), 0);
  }
  block_of_ = std::move(block_of);

  props_.reserve(members_.size());
  for (const auto& idx : members_) {
    const int n = static_cast<int>(idx.size());
    CMatrix sub(n, n);
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) sub(a, b) = l(idx[a], idx[b]);
    props_.emplace_back(std::move(sub),
                        opt.force_pade ? 0.0 : opt.cond_threshold);
  }
}

double LindbladPropagator::max_cond() const {
  double c = 0.0;
  for (const auto& p : props_) c = std::max(c, p.cond());
  return c;
}

CMatrix LindbladPropagator::block_exp(size_t b, double t) const {
  const la::Propagator& p = props_[b];
  // eps * |L| t is the phase-noise scale of the double-precision spectral
  // route; past ~1e7 rad it would creep above 1e-9 in the channel entries
  const double phase_budget = p.generator().norm_1() * std::abs(t);
  if (phase_budget > 1e7) {
    CMatrix gt = p.generator();
    gt *= cd(t, 0.0);
    return la::expm_pade_extended(gt);
  }
  return p.at(t);
}

std::vector<cd> LindbladPropagator::evolve(std::span<const cd> vrho,
                                           double t) const {
  if (static_cast<int>(vrho.size()) != vec_dim())
    throw std::invalid_argument("LindbladPropagator::evolve size");
  std::vector<cd> out(vrho.size(), cd(0.0, 0.0));
  std::vector<cd> sub;
  for (size_t b = 0; b < members_.size(); ++b) {
    const auto& idx = members_[b];
    sub.assign(idx.size(), cd(0.0, 0.0));
    bool active = false;
    for (size_t k = 0; k < idx.size(); ++k) {
      sub[k] = vrho[idx[k]];
      active = active || sub[k] != cd(0.0, 0.0);
    }
    if (!active) continue;
    const std::vector<cd> res = props_[b].apply(t, sub);
    for (size_t k = 0; k < idx.size(); ++k) out[idx[k]] = res[k];
  }
  return out;
}

cd LindbladPropagator::integrate_row(std::span<const cd> w,
                                     std::span<const cd> vrho0,
                                     double t) const {
  if (static_cast<int>(w.size()) != vec_dim() ||
      static_cast<int>(vrho0.size()) != vec_dim())
    throw std::invalid_argument("LindbladPropagator::integrate_row size");
  cd acc(0.0, 0.0);
  std::vector<cd> wb, vb;
  for (size_t b = 0; b < members_.size(); ++b) {
    const auto& idx = members_[b];
    wb.assign(idx.size(), cd(0.0, 0.0));
    vb.assign(idx.size(), cd(0.0, 0.0));
    bool active_w = false, active_v = false;
    for (size_t k = 0; k < idx.size(); ++k) {
      wb[k] = w[idx[k]];
      vb[k] = vrho0[idx[k]];
      active_w = active_w || wb[k] != cd(0.0, 0.0);
      active_v = active_v || vb[k] != cd(0.0, 0.0);
    }
    if (!active_w || !active_v) continue;
    acc += props_[b].integrate_row(wb, vb, t);
  }
  return acc;
}

}  // namespace aeqr::detection
