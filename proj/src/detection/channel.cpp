#include "aeqr/detection/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aeqr/constants.hpp"

#include "aeqr/la/decomp.hpp"
#include "aeqr/qcore/qcore.hpp"

namespace aeqr::detection {

namespace {

DetectionConfig drives_off(DetectionConfig cfg) {
  cfg.Omega = 0.0;
  cfg.Omega_c = 0.0;
  return cfg;
}

std::vector<CMatrix> to_vector(std::array<CMatrix, 3> a) {
  return {std::move(a[0]), std::move(a[1]), std::move(a[2])};
}

}  // namespace

DetectionEngine::DetectionEngine(const DetectionSpace& space,
                                 const species::SpeciesParams& sp,
                                 const DetectionConfig& cfg,
                                 const SolverOptions& opt)
    : space_(space),
      sp_(sp),
      cfg_(cfg),
      off_(liouvillian(build_hamiltonian(space, sp, drives_off(cfg)),
                       to_vector(jump_operators(space, sp))),
           space.twice_mF_table(), opt) {
  if (cfg_.decay_cutoff < 10.0)
    throw std::invalid_argument("decay_cutoff must be >= 10 (in 1/Gamma)");
  if (cfg_.Omega < 0.0 || cfg_.Omega_c < 0.0)
    throw std::invalid_argument("Omega and Omega_c must be >= 0");

  const auto jumps = to_vector(jump_operators(space, sp));
  auto make_prop = [&](double scale) {
    DetectionConfig c = cfg;
    c.Omega = scale * cfg.Omega;
    return std::make_shared<const LindbladPropagator>(
        liouvillian(build_hamiltonian(space, sp, c), jumps),
        space.twice_mF_table(), opt);
  };

  if (cfg_.pulse_shape == PulseShape::rectangular || cfg_.Omega == 0.0) {
    segments_.push_back({1.0, make_prop(1.0)});
    flat_segment_ = 0;
  } else {
    const int n = std::max(2, cfg_.ramp_steps);
    const double fr = cfg_.ramp_fraction;
    if (!(fr > 0.0 && fr < 0.5))
      throw std::invalid_argument("ramp_fraction must be in (0, 0.5)");
    // cos^2 rise sampled at segment midpoints; the fall reuses the same
    // propagators in reverse order
    for (int k = 0; k < n; ++k) {
      const double x = (k + 0.5) / n;  // position inside the ramp
      segments_.push_back(
          {fr / n, make_prop(0.5 * (1.0 - std::cos(constants::pi * x)))});
    }
    segments_.push_back({1.0 - 2.0 * fr, make_prop(1.0)});
    flat_segment_ = segments_.size() - 1;
    for (int k = n - 1; k >= 0; --k)
      segments_.push_back({fr / n, segments_[k].prop});
  }

  const int d = space_.dim();
  w_e_.assign(static_cast<size_t>(d) * d, cd(0.0, 0.0));
  for (int i = 0; i < d; ++i)
    if (space_.level_of(i) == Level::e)
      w_e_[i + static_cast<size_t>(i) * d] = cd(1.0, 0.0);
}

const LindbladPropagator& DetectionEngine::pulse_propagator() const {
  return *segments_[flat_segment_].prop;
}

std::vector<cd> DetectionEngine::mixed_g_state() const {
  const int d = space_.dim();
  std::vector<cd> v(static_cast<size_t>(d) * d, cd(0.0, 0.0));
  const double w = 1.0 / space_.nuclear_dim();
  for (int ni = 0; ni < space_.nuclear_dim(); ++ni) {
    const int gi = space_.index(Level::g, 0, space_.nuclear_m(ni));
    v[gi + static_cast<size_t>(gi) * d] = cd(w, 0.0);
  }
  return v;
}

std::vector<cd> DetectionEngine::run_pulse(std::span<const cd> vrho0,
                                           double tau) const {
  if (tau < 0.0) throw std::invalid_argument("run_pulse: tau < 0");
  std::vector<cd> v(vrho0.begin(), vrho0.end());
  for (const Segment& seg : segments_) v = seg.prop->evolve(v, seg.frac * tau);
  return off_.evolve(v, decay_time());
}

double DetectionEngine::photons_from(std::span<const cd> vrho0,
                                     double tau) const {
  if (tau < 0.0) throw std::invalid_argument("photons_from: tau < 0");
  if (tau == 0.0) return 0.0;
  std::vector<cd> v(vrho0.begin(), vrho0.end());
  cd acc(0.0, 0.0);
  for (const Segment& seg : segments_) {
    acc += seg.prop->integrate_row(w_e_, v, seg.frac * tau);
    v = seg.prop->evolve(v, seg.frac * tau);
  }
  acc += off_.integrate_row(w_e_, v, decay_time());
  return sp_.Gamma * acc.real();
}

double DetectionEngine::photons(double tau) const {
  return photons_from(mixed_g_state(), tau);
}

double DetectionEngine::residual_e_population(
    std::span<const cd> vrho_final) const {
  const int d = space_.dim();
  double pop = 0.0;
  for (int i = 0; i < d; ++i)
    if (space_.level_of(i) == Level::e)
      pop += vrho_final[i + static_cast<size_t>(i) * d].real();
  return pop;
}

QuantumChannel DetectionEngine::channel(double tau) const {
  if (space_.has(Level::s))
    throw std::invalid_argument(
        "detection_channel: the channel acts on g only; build the space "
        "without the s block");
  if (space_.has(Level::r) && cfg_.Omega_c != 0.0)
    throw std::invalid_argument(
        "detection_channel: Omega_c > 0 strands population in r, so no CPTP "
        "map on g exists; use coherence_retention for selectivity runs");
  if (tau < 0.0) throw std::invalid_argument("channel: tau < 0");

  const int D = space_.dim();
  const int d = space_.nuclear_dim();
  QuantumChannel ch;
  ch.d = d;
  ch.tau = tau;
  ch.S = CMatrix(d * d, d * d);

  std::vector<int> gidx(d);
  for (int ni = 0; ni < d; ++ni)
    gidx[ni] = space_.index(Level::g, 0, space_.nuclear_m(ni));

  // Stage exponentials are computed once per block that the g-manifold
  // units actually touch; block_exp switches to extended precision when the
  // phase content would make the spectral route visibly non-trace-preserving.
  const LindbladPropagator& on = pulse_propagator();
  const bool same_split =
      rectangular() && on.block_count() == off_.block_count() &&
      [&] {
        for (size_t b = 0; b < on.block_count(); ++b)
          if (on.block_members(b) != off_.block_members(b)) return false;
        return true;
      }();

  std::vector<cd> out(static_cast<size_t>(D) * D);
  std::vector<cd> mixed_final(static_cast<size_t>(D) * D, cd(0.0, 0.0));
  if (same_split) {
    std::vector<CMatrix> stage(on.block_count());
    for (int n = 0; n < d; ++n)
      for (int m = 0; m < d; ++m) {
        const int k0 = gidx[m] + gidx[n] * D;
        const size_t b = static_cast<size_t>(on.block_of(k0));
        if (stage[b].empty())
          stage[b] = off_.block_exp(b, decay_time()) * on.block_exp(b, tau);
        const auto& members = on.block_members(b);
        const int pos = static_cast<int>(
            std::lower_bound(members.begin(), members.end(), k0) -
            members.begin());
        std::fill(out.begin(), out.end(), cd(0.0, 0.0));
        for (size_t a = 0; a < members.size(); ++a)
          out[members[a]] = stage[b](static_cast<int>(a), pos);
        const int c = m + n * d;
        for (int j = 0; j < d; ++j)
          for (int i = 0; i < d; ++i)
            ch.S(i + j * d, c) =
                out[gidx[i] + static_cast<size_t>(gidx[j]) * D];
        if (m == n)
          for (size_t k = 0; k < out.size(); ++k)
            mixed_final[k] += out[k] / static_cast<double>(d);
      }
  } else {
    std::vector<cd> unit(static_cast<size_t>(D) * D);
    for (int n = 0; n < d; ++n)
      for (int m = 0; m < d; ++m) {
        std::fill(unit.begin(), unit.end(), cd(0.0, 0.0));
        unit[gidx[m] + static_cast<size_t>(gidx[n]) * D] = cd(1.0, 0.0);
        out = run_pulse(unit, tau);
        const int c = m + n * d;
        for (int j = 0; j < d; ++j)
          for (int i = 0; i < d; ++i)
            ch.S(i + j * d, c) =
                out[gidx[i] + static_cast<size_t>(gidx[j]) * D];
        if (m == n)
          for (size_t k = 0; k < out.size(); ++k)
            mixed_final[k] += out[k] / static_cast<double>(d);
      }
  }

  // all population must be back in g at readout
  const double resid = residual_e_population(mixed_final);
  if (resid > 1e-10)
    throw std::runtime_error(
        "detection_channel: residual excited-state population " +
        std::to_string(resid) + " at readout; increase decay_cutoff");

  // trace preservation: column sums of the population rows
  double tp = 0.0;
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) {
      cd s(0.0, 0.0);
      for (int i = 0; i < d; ++i) s += ch.S(i + i * d, m + n * d);
      tp = std::max(tp, std::abs(s - (m == n ? cd(1.0, 0.0) : cd(0.0, 0.0))));
    }
  ch.tp_defect = tp;

  // complete positivity via the Choi operator
  CMatrix choi(d * d, d * d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m)
      for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
          choi(i * d + m, j * d + n) = ch.S(i + j * d, m + n * d);
  ch.choi_herm_defect = choi.hermiticity_defect();
  CMatrix h = choi;
  h += choi.adjoint();
  h *= cd(0.5, 0.0);
  const la::HermEig eig = la::eig_hermitian(h);
  ch.choi_min_eig = eig.w.empty() ? 0.0 : eig.w.front();
  return ch;
}

double DetectionEngine::calibrate_tau(double N_target, double* achieved) const {
  if (N_target < 0.0)
    throw std::invalid_argument("calibrate_tau: N_target < 0");
  if (N_target == 0.0) {
    if (achieved != nullptr) *achieved = 0.0;
    return 0.0;
  }
  if (cfg_.Omega <= 0.0)
    throw std::invalid_argument("calibrate_tau: needs Omega > 0");

  const std::vector<cd> v0 = mixed_g_state();
  double lo = 0.0, hi = 1.0 / sp_.Gamma;
  double n_hi = photons_from(v0, hi);
  while (n_hi < N_target) {
    hi *= 2.0;
    if (hi > cfg_.tau_max)
      throw std::runtime_error(
          "calibrate_tau: no bracket below tau_max = " +
          std::to_string(cfg_.tau_max) + " s (N only reaches " +
          std::to_string(n_hi) + ")");
    n_hi = photons_from(v0, hi);
  }
  double n_mid = n_hi, mid = hi;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    n_mid = photons_from(v0, mid);
    if (std::abs(n_mid - N_target) <= 0.5) break;
    (n_mid < N_target ? lo : hi) = mid;
  }
  if (std::abs(n_mid - N_target) > 0.5)
    throw std::runtime_error("calibrate_tau: bisection failed to converge");
  if (achieved != nullptr) *achieved = n_mid;
  return mid;
}

std::vector<double> ideal_phases(const QuantumChannel& ch) {
  const int d = ch.d;
  std::vector<double> phi(d, 0.0);
  for (int m = 0; m < d - 1; ++m) {
    // coherence rho_{m,-I}: m_I-descending index of -I is d-1
    const int k = m + (d - 1) * d;
    const cd amp = ch.S(k, k);
    if (std::abs(amp) < 1e-12)
      throw std::runtime_error(
          "ideal_phases: vanishing (m,-I) coherence amplitude, phase "
          "undefined");
    phi[m] = std::arg(amp);
  }
  phi[d - 1] = 0.0;
  return phi;
}

double average_gate_fidelity(const QuantumChannel& ch,
                             std::span<const double> phi) {
  const int d = ch.d;
  if (static_cast<int>(phi.size()) != d)
    throw std::invalid_argument("average_gate_fidelity: phase table size");
  cd fe(0.0, 0.0);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) {
      const cd u = std::exp(cd(0.0, phi[n] - phi[m]));
      fe += u * ch.S(m + n * d, m + n * d);
    }
  fe /= static_cast<double>(d) * d;
  return (d * fe.real() + 1.0) / (d + 1.0);
}

McFidelity average_gate_fidelity_mc(const QuantumChannel& ch,
                                    std::span<const double> phi, int samples,
                                    uint64_t seed) {
  const int d = ch.d;
  if (static_cast<int>(phi.size()) != d)
    throw std::invalid_argument("average_gate_fidelity_mc: phase table size");
  std::vector<cd> u(d);
  for (int i = 0; i < d; ++i) u[i] = std::exp(cd(0.0, phi[i]));

  double sum = 0.0, sum2 = 0.0;
  std::vector<cd> vin(static_cast<size_t>(d) * d), vout;
  for (int k = 0; k < samples; ++k) {
    const std::vector<cd> psi = qcore::haar_state(d, seed + k);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i)
        vin[i + static_cast<size_t>(j) * d] = psi[i] * std::conj(psi[j]);
    vout = la::matvec(ch.S, vin);
    cd val(0.0, 0.0);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i)
        val += std::conj(u[i] * psi[i]) * vout[i + static_cast<size_t>(j) * d] *
               (u[j] * psi[j]);
    sum += val.real();
    sum2 += val.real() * val.real();
  }
  McFidelity mc;
  mc.samples = samples;
  mc.mean = sum / samples;
  const double var = std::max(0.0, sum2 / samples - mc.mean * mc.mean);
  mc.std_error = std::sqrt(var / samples);
  return mc;
}

DetectionReport detection_error(const DetectionSpace& space,
                                const species::SpeciesParams& sp,
                                const DetectionConfig& cfg, double N_target,
                                const SolverOptions& opt) {
  const DetectionEngine eng(space, sp, cfg, opt);
  double achieved = 0.0;
  const double tau = cfg.tau.has_value()
                         ? *cfg.tau
                         : eng.calibrate_tau(N_target, &achieved);
  if (cfg.tau.has_value()) achieved = eng.photons(tau);

  const QuantumChannel ch = eng.channel(tau);
  const std::vector<double> phi = ideal_phases(ch);
  const double fbar = average_gate_fidelity(ch, phi);
  if (fbar < -1e-9 || fbar > 1.0 + 1e-9)
    throw std::runtime_error("detection_error: Fbar outside [0,1]: " +
                             std::to_string(fbar));

  DetectionReport rep;
  rep.species = sp.name;
  rep.B = cfg.B;
  rep.Omega = cfg.Omega;
  rep.Delta = cfg.Delta;
  rep.Omega_c = cfg.Omega_c;
  rep.tau = tau;
  rep.N = achieved;
  rep.phi = phi;
  rep.Fbar = fbar;
  rep.p = 1.0 - fbar;
  rep.tp_defect = ch.tp_defect;
  rep.choi_min_eig = ch.choi_min_eig;
  return rep;
}

GJSensitivity gj_sensitivity(const DetectionSpace& space,
                             const species::SpeciesParams& sp,
                             const DetectionConfig& cfg, double N_target,
                             const SolverOptions& opt) {
  GJSensitivity out;
  out.gJ = sp.gJ;
  species::SpeciesParams lo = sp, hi = sp;
  lo.gJ = 0.9 * sp.gJ;
  hi.gJ = 1.1 * sp.gJ;
  out.p_lo = detection_error(space, lo, cfg, N_target, opt).p;
  out.p_hi = detection_error(space, hi, cfg, N_target, opt).p;
  const double dg = 0.2 * sp.gJ;
  out.dp_dgJ = dg != 0.0 ? (out.p_hi - out.p_lo) / dg : 0.0;
  return out;
}

AnalyticEstimates analytic_estimates(const species::SpeciesParams& sp,
                                     const DetectionConfig& cfg, HalfInt m1,
                                     HalfInt m2) {
  if (cfg.Delta == 0.0)
    throw std::invalid_argument("analytic_estimates: requires Delta != 0");
  if (!cfg.tau.has_value())
    throw std::invalid_argument("analytic_estimates: requires tau");
  const double tau = *cfg.tau;

  AnalyticEstimates est;
  est.N_est = sp.Gamma * tau * cfg.Omega * cfg.Omega / (cfg.Delta * cfg.Delta);

  const DetectionSpace space = DetectionSpace::make(sp.I);
  DetectionConfig hcfg = cfg;
  hcfg.Omega = 0.0;
  hcfg.Omega_c = 0.0;
  hcfg.Delta = 0.0;
  const CMatrix h = build_hamiltonian(space, sp, hcfg);

  const int nd = space.nuclear_dim();
  est.delta_literal.resize(nd);
  est.delta_hamiltonian.resize(nd);
  for (int ni = 0; ni < nd; ++ni) {
    const HalfInt m = space.nuclear_m(ni);
    est.delta_literal[ni] = 3.0 * sp.Q * m.value() * m.value();
    const int e0 = space.index(Level::e, 0, m);
    const int g = space.index(Level::g, 0, m);
    est.delta_hamiltonian[ni] = h(e0, e0).real() - h(g, g).real();
  }

  auto gamma12 = [&](const std::vector<double>& delta) {
    const double d1 = delta[space.nuclear_index(m1)];
    const double d2 = delta[space.nuclear_index(m2)];
    const double dd = d1 - d2;
    return dd * dd * cfg.Omega * cfg.Omega * sp.Gamma /
           (2.0 * std::pow(cfg.Delta, 4));
  };
  est.Gamma12_literal = gamma12(est.delta_literal);
  est.Gamma12_hamiltonian = gamma12(est.delta_hamiltonian);
  est.p_literal = est.Gamma12_literal * tau;
  est.p_hamiltonian = est.Gamma12_hamiltonian * tau;
  est.p_scaling = est.N_est * (sp.Q / cfg.Delta) * (sp.Q / cfg.Delta);
  return est;
}

RetentionReport coherence_retention(const DetectionSpace& space,
                                    const species::SpeciesParams& sp,
                                    const DetectionConfig& cfg, HalfInt m,
                                    const SolverOptions& opt) {
  if (!space.has(Level::s))
    throw std::invalid_argument("coherence_retention: needs the s block");
  if (cfg.Omega_c > 0.0 && !space.has(Level::r))
    throw std::invalid_argument(
        "coherence_retention: Omega_c > 0 needs the r block");
  if (!cfg.tau.has_value())
    throw std::invalid_argument("coherence_retention: requires tau");

  const DetectionEngine eng(space, sp, cfg, opt);
  const int D = space.dim();
  const int gi = space.index(Level::g, 0, m);
  const int si = space.index(Level::s, 0, m);

  std::vector<cd> v(static_cast<size_t>(D) * D, cd(0.0, 0.0));
  v[gi + static_cast<size_t>(gi) * D] = cd(0.5, 0.0);
  v[gi + static_cast<size_t>(si) * D] = cd(0.5, 0.0);
  v[si + static_cast<size_t>(gi) * D] = cd(0.5, 0.0);
  v[si + static_cast<size_t>(si) * D] = cd(0.5, 0.0);

  RetentionReport rep;
  rep.N = eng.photons_from(v, *cfg.tau);
  const std::vector<cd> out = eng.run_pulse(v, *cfg.tau);
  rep.retention = 2.0 * std::abs(out[gi + static_cast<size_t>(si) * D]);
  return rep;
}

}  // namespace aeqr::detection
