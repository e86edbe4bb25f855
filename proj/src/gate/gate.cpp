#include "aeqr/gate/gate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aeqr/constants.hpp"
#include "aeqr/la/expm.hpp"

namespace aeqr::gate {

namespace {

// parity of occupied modes below p
inline int jw_sign(uint64_t mask, int p) {
  const uint64_t below = mask & ((1ULL << p) - 1);
  return (__builtin_popcountll(below) & 1) ? -1 : 1;
}

// c_p / c+_p on a bitmask; returns 0 on annihilation of the state
inline int apply_annihilate(uint64_t& mask, int p) {
  if ((mask & (1ULL << p)) == 0) return 0;
  const int s = jw_sign(mask, p);
  mask &= ~(1ULL << p);
  return s;
}

inline int apply_create(uint64_t& mask, int p) {
  if ((mask & (1ULL << p)) != 0) return 0;
  const int s = jw_sign(mask, p);
  mask |= 1ULL << p;
  return s;
}

double wrap_angle(double x) { return std::atan2(std::sin(x), std::cos(x)); }

}  // namespace

FockBasis2::FockBasis2(HalfInt I) : I_(I) {
  if (I.twice <= 0 || I.twice % 2 == 0)
    throw std::invalid_argument("FockBasis2: I must be half-odd-integer");
  if (n_modes() > 62) throw std::invalid_argument("FockBasis2: I too large");
}

int FockBasis2::mode(Site site, Orbital orb, HalfInt m) const {
  if (std::abs(m.twice) > I_.twice || (I_.twice - m.twice) % 2 != 0)
    throw std::invalid_argument("FockBasis2: bad m");
  const int mi = (m.twice + I_.twice) / 2;  // m ascending
  return static_cast<int>(site) * 2 * nuclear_dim() +
         static_cast<int>(orb) * nuclear_dim() + mi;
}

Site FockBasis2::mode_site(int p) const {
  return static_cast<Site>(p / (2 * nuclear_dim()));
}

Orbital FockBasis2::mode_orbital(int p) const {
  return static_cast<Orbital>((p / nuclear_dim()) % 2);
}

HalfInt FockBasis2::mode_m(int p) const {
  return HalfInt(2 * (p % nuclear_dim()) - I_.twice);
}

int FockBasis2::pair_index(int p, int q) const {
  if (!(0 <= p && p < q && q < n_modes()))
    throw std::invalid_argument("FockBasis2: bad mode pair");
  return p * n_modes() - p * (p + 1) / 2 + (q - p - 1);
}

std::pair<int, int> FockBasis2::pair_modes(int idx) const {
  const int m = n_modes();
  int p = 0;
  int base = 0;
  while (idx >= base + (m - 1 - p)) {
    base += m - 1 - p;
    ++p;
  }
  return {p, p + 1 + (idx - base)};
}

bool FockBasis2::one_per_site(int idx) const {
  const auto [p, q] = pair_modes(idx);
  return mode_site(p) != mode_site(q);
}

CMatrix FockBasis2::create_01(int p) const {
  CMatrix c(n_modes(), 1);
  c(p, 0) = cd(1.0, 0.0);
  return c;
}

CMatrix FockBasis2::create_12(int p) const {
  CMatrix c(dim(), n_modes());
  for (int b = 0; b < n_modes(); ++b) {
    if (b == p) continue;
    uint64_t mask = 1ULL << b;
    const int s = apply_create(mask, p);
    const int lo = std::min(p, b), hi = std::max(p, b);
    c(pair_index(lo, hi), b) = cd(s, 0.0);
  }
  return c;
}

double blockade_min_gap_over_J(const TwoWellParams& p) {
  const double gaps[3] = {std::abs(p.U_gg - p.U_ss),
                          std::abs(p.U_gg - (p.V + p.V_ex)),
                          std::abs(p.U_gg - (p.V - p.V_ex))};
  return *std::min_element(gaps, gaps + 3) / p.J;
}

CMatrix build_hubbard(const FockBasis2& basis, const TwoWellParams& p,
                      double DeltaE) {
  if (basis.I() != p.I)
    throw std::invalid_argument("build_hubbard: basis/params I mismatch");
  const int dim = basis.dim();
  CMatrix h(dim, dim);

  auto mask_of = [&](int idx) {
    const auto [a, b] = basis.pair_modes(idx);
    return (1ULL << a) | (1ULL << b);
  };
  auto index_of = [&](uint64_t mask) {
    const int a = __builtin_ctzll(mask);
    const int b = 63 - __builtin_clzll(mask);
    return basis.pair_index(a, b);
  };
  // h(out, in) += t * <out| c+_a c_b |in>
  auto add_hop = [&](int a, int b, double t, int in, uint64_t in_mask) {
    uint64_t m = in_mask;
    const int s1 = apply_annihilate(m, b);
    if (s1 == 0) return;
    const int s2 = apply_create(m, a);
    if (s2 == 0) return;
    h(index_of(m), in) += cd(t * s1 * s2, 0.0);
  };

  for (int in = 0; in < dim; ++in) {
    const uint64_t mask = mask_of(in);
    const auto [pm, qm] = basis.pair_modes(in);

    // bias and Zeeman diagonals
    double diag = 0.0;
    for (int mode : {pm, qm}) {
      if (basis.mode_site(mode) == Site::R) diag += DeltaE;
      const double g =
          basis.mode_orbital(mode) == Orbital::g ? p.g_g : p.g_s;
      diag -= constants::mu_N * p.B * basis.mode_m(mode).value() * g;
    }
    // onsite interactions
    if (basis.mode_site(pm) == basis.mode_site(qm)) {
      if (basis.mode_orbital(pm) == basis.mode_orbital(qm))
        diag += basis.mode_orbital(pm) == Orbital::g ? p.U_gg : p.U_ss;
      else
        diag += p.V;
    }
    h(in, in) += cd(diag, 0.0);

    // tunneling -J sum (c+_L c_R + h.c.)
    for (int orb = 0; orb < 2; ++orb)
      for (int mi = 0; mi < basis.nuclear_dim(); ++mi) {
        const HalfInt m(2 * mi - basis.I().twice);
        const int lmode = basis.mode(Site::L, static_cast<Orbital>(orb), m);
        const int rmode = basis.mode(Site::R, static_cast<Orbital>(orb), m);
        add_hop(lmode, rmode, -p.J, in, mask);
        add_hop(rmode, lmode, -p.J, in, mask);
      }

    // exchange V_ex sum_i,m,m' c+_{igm} c+_{ism'} c_{igm'} c_{ism}
    if (p.V_ex != 0.0) {
      for (int site = 0; site < 2; ++site)
        for (int mi = 0; mi < basis.nuclear_dim(); ++mi)
          for (int mj = 0; mj < basis.nuclear_dim(); ++mj) {
            const HalfInt m(2 * mi - basis.I().twice);
            const HalfInt mp(2 * mj - basis.I().twice);
            uint64_t work = mask;
            const int s1 =
                apply_annihilate(work, basis.mode(static_cast<Site>(site),
                                                  Orbital::s, m));
            if (s1 == 0) continue;
            const int s2 =
                apply_annihilate(work, basis.mode(static_cast<Site>(site),
                                                  Orbital::g, mp));
            if (s2 == 0) continue;
            const int s3 = apply_create(
                work, basis.mode(static_cast<Site>(site), Orbital::s, mp));
            if (s3 == 0) continue;
            const int s4 = apply_create(
                work, basis.mode(static_cast<Site>(site), Orbital::g, m));
            if (s4 == 0) continue;
            h(index_of(work), in) += cd(p.V_ex * s1 * s2 * s3 * s4, 0.0);
          }
    }
  }
  return h;
}

LocalUnitaries local_unitaries(const FockBasis2& basis) {
  const int dim = basis.dim();
  LocalUnitaries u{CMatrix(dim, dim), CMatrix(dim, dim)};

  auto is_rg_pos = [&](int mode) {
    return basis.mode_site(mode) == Site::R &&
           basis.mode_orbital(mode) == Orbital::g && basis.mode_m(mode).twice > 0;
  };
  auto swap_image = [&](int mode) {
    if (basis.mode_site(mode) == Site::R &&
        basis.mode_orbital(mode) == Orbital::g)
      return basis.mode(Site::R, Orbital::g, -basis.mode_m(mode));
    return mode;
  };

  for (int idx = 0; idx < dim; ++idx) {
    const auto [pm, qm] = basis.pair_modes(idx);
    const int count = (is_rg_pos(pm) ? 1 : 0) + (is_rg_pos(qm) ? 1 : 0);
    u.P(idx, idx) = cd(count % 2 ? -1.0 : 1.0, 0.0);

    const int a = swap_image(pm), b = swap_image(qm);
    if (a < b)
      u.X(basis.pair_index(a, b), idx) = cd(1.0, 0.0);
    else
      u.X(basis.pair_index(b, a), idx) = cd(-1.0, 0.0);
  }
  return u;
}

std::vector<Token> default_schedule() {
  using enum Token;
  return {bias,   phase_r_pos, bias, phase_r_pos, swap_r,
          bias,   phase_r_pos, bias, phase_r_pos, swap_r};
}

Token token_from_string(const std::string& s) {
  if (s == "bias") return Token::bias;
  if (s == "phase_r_pos") return Token::phase_r_pos;
  if (s == "swap_r") return Token::swap_r;
  throw std::invalid_argument("unknown schedule token '" + s + "'");
}

const char* to_string(Token t) {
  switch (t) {
    case Token::bias: return "bias";
    case Token::phase_r_pos: return "phase_r_pos";
    case Token::swap_r: return "swap_r";
  }
  return "?";
}

GateReport run_gate_protocol(const TwoWellParams& p,
                             std::span<const Token> schedule) {
  if (p.J <= 0.0) throw std::invalid_argument("gate: J must be > 0");
  const FockBasis2 basis(p.I);
  const int dim = basis.dim();
  const double tau = constants::pi / (std::sqrt(2.0) * p.J);

  CMatrix g = build_hubbard(basis, p, p.U_gg);
  g *= cd(0.0, -1.0);
  const la::Propagator prop(std::move(g));
  const CMatrix bias_u = prop.at(tau);
  const LocalUnitaries lu = local_unitaries(basis);

  CMatrix u = CMatrix::identity(dim);
  for (const Token t : schedule) {
    switch (t) {
      case Token::bias: u = bias_u * u; break;
      case Token::phase_r_pos: u = lu.P * u; break;
      case Token::swap_r: u = lu.X * u; break;
    }
  }

  GateReport rep;
  rep.tau = tau;
  rep.blockade_gap_over_J = blockade_min_gap_over_J(p);
  rep.blockade_ok = rep.blockade_gap_over_J >= 10.0;

  // remove the global phase against a Pauli-frozen |s,+I; s,+I> reference
  const int ref = basis.pair_index(basis.mode(Site::L, Orbital::s, p.I),
                                   basis.mode(Site::R, Orbital::s, p.I));
  const cd ref_amp = u(ref, ref);
  if (std::abs(ref_amp) < 1e-6)
    throw std::runtime_error("gate: reference state depleted; not in the "
                             "blockade regime");
  u *= std::exp(cd(0.0, -std::arg(ref_amp)));

  std::vector<int> sector;
  for (int idx = 0; idx < dim; ++idx)
    if (basis.one_per_site(idx)) sector.push_back(idx);

  cd tr(0.0, 0.0);
  double leak_sum = 0.0;
  for (const int idx : sector) {
    const auto [pm, qm] = basis.pair_modes(idx);
    PhaseRow row;
    row.orb_L = basis.mode_orbital(pm);
    row.m_L = basis.mode_m(pm);
    row.orb_R = basis.mode_orbital(qm);
    row.m_R = basis.mode_m(qm);
    const cd amp = u(idx, idx);
    row.phase = std::arg(amp);
    row.amp = std::abs(amp);
    double inside = 0.0;
    for (const int k : sector) inside += std::norm(u(k, idx));
    row.leak = std::max(0.0, 1.0 - inside);
    rep.table.push_back(row);

    const bool gg = row.orb_L == Orbital::g && row.orb_R == Orbital::g;
    tr += (gg ? cd(-1.0, 0.0) : cd(1.0, 0.0)) * amp;
    leak_sum += row.leak;
    rep.leakage_max = std::max(rep.leakage_max, row.leak);
    if (gg)
      rep.max_gg_phase_err = std::max(
          rep.max_gg_phase_err, std::abs(wrap_angle(row.phase - constants::pi)));
    else
      rep.max_spectator_phase_err =
          std::max(rep.max_spectator_phase_err, std::abs(wrap_angle(row.phase)));
  }
  rep.leakage_mean = leak_sum / sector.size();
  const double overlap = std::abs(tr) / sector.size();
  rep.eps = std::max(0.0, 1.0 - overlap * overlap);

  CMatrix udu = u.adjoint() * u;
  for (int i = 0; i < dim; ++i) udu(i, i) -= cd(1.0, 0.0);
  rep.unitarity_defect = udu.norm_max();
  rep.U = std::move(u);
  return rep;
}

GateReport run_gate_protocol(const TwoWellParams& p) {
  const auto sched = default_schedule();
  return run_gate_protocol(p, sched);
}

std::vector<double> zeeman_corrected_phases(const TwoWellParams& p,
                                            std::span<const Token> schedule,
                                            const GateReport& rep) {
  const FockBasis2 basis(p.I);
  const double tau = rep.tau;

  // Zeeman phase accumulated by a (possibly swap-relabeled) one-per-site
  // configuration across the bias intervals; everything else is instantaneous.
  auto zeeman_phase = [&](Orbital oL, HalfInt mL, Orbital oR, HalfInt mR) {
    double phase = 0.0;
    HalfInt curR = mR;
    for (const Token t : schedule) {
      if (t == Token::swap_r && oR == Orbital::g) curR = -curR;
      if (t == Token::bias) {
        const double e =
            -constants::mu_N * p.B *
            ((oL == Orbital::g ? p.g_g : p.g_s) * mL.value() +
             (oR == Orbital::g ? p.g_g : p.g_s) * curR.value());
        phase += -e * tau;  // amplitude evolves as e^{-i E t}
      }
    }
    return phase;
  };

  const double ref_phase =
      zeeman_phase(Orbital::s, p.I, Orbital::s, p.I);
  std::vector<double> out;
  out.reserve(rep.table.size());
  for (const PhaseRow& row : rep.table) {
    const double zp = zeeman_phase(row.orb_L, row.m_L, row.orb_R, row.m_R);
    out.push_back(std::atan2(std::sin(row.phase - zp + ref_phase),
                             std::cos(row.phase - zp + ref_phase)));
  }
  return out;
}

BiasPulseReport bias_pulse_analysis(const TwoWellParams& p) {
  const FockBasis2 basis(p.I);
  const double tau = constants::pi / (std::sqrt(2.0) * p.J);
  CMatrix g = build_hubbard(basis, p, p.U_gg);
  g *= cd(0.0, -1.0);
  const CMatrix bu = la::Propagator(std::move(g)).at(tau);

  const int nd = basis.nuclear_dim();
  // gg one-per-site states indexed by (nuclear index on L, nuclear index on R)
  std::vector<int> idx(nd * nd);
  for (int a = 0; a < nd; ++a)
    for (int b = 0; b < nd; ++b) {
      const HalfInt mL(2 * a - p.I.twice), mR(2 * b - p.I.twice);
      idx[a * nd + b] = basis.pair_index(basis.mode(Site::L, Orbital::g, mL),
                                         basis.mode(Site::R, Orbital::g, mR));
    }

  // the |m,m> states are exact eigenstates; use the top one as phase anchor
  const cd anchor = bu(idx[(nd - 1) * nd + (nd - 1)],
                       idx[(nd - 1) * nd + (nd - 1)]);
  const cd unphase = std::exp(cd(0.0, -std::arg(anchor)));

  CMatrix r(nd * nd, nd * nd);
  for (int cb = 0; cb < nd * nd; ++cb)
    for (int ra = 0; ra < nd * nd; ++ra)
      r(ra, cb) = bu(idx[ra], idx[cb]) * unphase;

  BiasPulseReport rep;
  double dev = 0.0;
  for (int a = 0; a < nd; ++a)
    for (int b = 0; b < nd; ++b)
      for (int c = 0; c < nd; ++c)
        for (int d = 0; d < nd; ++d) {
          const cd want = (c == b && d == a) ? cd(1.0, 0.0) : cd(0.0, 0.0);
          dev = std::max(dev, std::abs(r(c * nd + d, a * nd + b) - want));
        }
  rep.swap_max_deviation = dev;

  double min_ret = 1.0;
  for (int col = 0; col < nd * nd; ++col) {
    double ret = 0.0;
    for (int row = 0; row < nd * nd; ++row) ret += std::norm(r(row, col));
    min_ret = std::min(min_ret, ret);
  }
  rep.min_return_probability = min_ret;

  for (int a = 0; a < nd; ++a)
    for (int b = 0; b <= a; ++b) {
      if (a == b) {
        const double ph = std::arg(r(a * nd + a, a * nd + a));
        rep.max_sym_phase_err = std::max(rep.max_sym_phase_err, std::abs(ph));
        continue;
      }
      const int ab = a * nd + b, ba = b * nd + a;
      const cd ee = r(ab, ab) + r(ba, ba);
      const cd eo = r(ab, ba) + r(ba, ab);
      const cd sym = 0.5 * (ee + eo);
      const cd anti = 0.5 * (ee - eo);
      rep.max_sym_phase_err =
          std::max(rep.max_sym_phase_err, std::abs(std::arg(sym)));
      rep.max_antisym_phase_err = std::max(
          rep.max_antisym_phase_err,
          std::abs(wrap_angle(std::arg(anti) - constants::pi)));
    }
  return rep;
}

ScalingReport blockade_scaling(const TwoWellParams& base,
                               std::span<const double> ratios) {
  const double m_ss = base.U_ss / base.U_gg;
  const double m_v = base.V / base.U_gg;
  const double m_vex = base.V_ex / base.U_gg;
  ScalingReport rep;
  for (const double r : ratios) {
    if (r < 10.0)
      throw std::invalid_argument("blockade_scaling: ratios must be >= 10");
    TwoWellParams p = base;
    p.U_gg = r * base.J;
    p.U_ss = m_ss * p.U_gg;
    p.V = m_v * p.U_gg;
    p.V_ex = m_vex * p.U_gg;
    const GateReport g = run_gate_protocol(p);
    rep.points.push_back({1.0 / r, g.eps});
  }
  // least-squares slope of log(eps) vs log(J/U)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(rep.points.size());
  for (const auto& pt : rep.points) {
    const double x = std::log(pt.j_over_u), y = std::log(pt.eps);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  return rep;
}

}  // namespace aeqr::gate
