#include "aeqr/la/expm.hpp"

#include <cmath>
#include <stdexcept>

#include "aeqr/la/kernels.hpp"

namespace aeqr::la {

namespace {

// --- compensated (double-double) helpers -------------------------------
// Liouvillian propagations can reach |Im lambda| * t ~ 1e9 rad; both the
// eigenvalues themselves (O(eps |A|) absolute error from zgeev) and the
// plain double product lambda*t would then carry ~1e-7 rad of phase noise,
// which shows up directly as trace-preservation defects of the channel.

struct DD {
  double hi = 0.0, lo = 0.0;
};

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

// accumulator for sums of products, exact to second order
struct CAcc {
  DD re, im;
  void add_prod(double x, double y, bool to_im) {
    const double p = x * y;
    const double e = std::fma(x, y, -p);
    DD& acc = to_im ? im : re;
    const DD s = two_sum(acc.hi, p);
    acc.hi = s.hi;
    acc.lo += s.lo + e;
  }
  void add(cd a, cd b) {  // += a*b
    add_prod(a.real(), b.real(), false);
    add_prod(-a.imag(), b.imag(), false);
    add_prod(a.real(), b.imag(), true);
    add_prod(a.imag(), b.real(), true);
  }
  cd value() const { return {re.hi + re.lo, im.hi + im.lo}; }
};

// exp(z t) with the oscillatory argument Im(z)*t reduced mod 2pi in
// double-double, so phases stay meaningful for |Im z| t up to ~1e12
cd exp_zt(cd z, double t) {
  constexpr double two_pi_hi = 6.283185307179586;
  constexpr double two_pi_lo = 2.4492935982947064e-16;
  const double p = z.imag() * t;
  const double perr = std::fma(z.imag(), t, -p);
  const double k = std::nearbyint(p / two_pi_hi);
  double r = std::fma(-k, two_pi_hi, p);
  r = r - k * two_pi_lo + perr;
  const double mag = std::exp(z.real() * t);
  return {mag * std::cos(r), mag * std::sin(r)};
}

// One Rayleigh-quotient correction per eigenpair, with compensated
// residuals: the corrected eigenvalues are accurate well below
// eps*|A|, which keeps exact nullspaces (e.g. the trace functional of a
// Liouvillian) stationary over long propagations.
void refine_eigenvalues(const CMatrix& a, const CMatrix& v,
                        const CMatrix& vinv, std::vector<cd>& w) {
  const int n = a.rows();
  std::vector<cd> r(n);
  for (int k = 0; k < n; ++k) {
    const cd* vk = v.col(k);
    for (int i = 0; i < n; ++i) {
      CAcc acc;
      for (int j = 0; j < n; ++j) acc.add(a(i, j), vk[j]);
      acc.add(-w[k], vk[i]);
      r[i] = acc.value();
    }
    CAcc num, den;
    for (int j = 0; j < n; ++j) {
      num.add(vinv(k, j), r[j]);
      den.add(vinv(k, j), vk[j]);
    }
    const cd d = den.value();
    if (std::abs(d) > 0.1) w[k] += num.value() / d;
  }
}

constexpr double theta13 = 5.371920351148152;

const double pade13_b[14] = {64764752532480000.0,
                             32382376266240000.0,
                             7771770303897600.0,
                             1187353796428800.0,
                             129060195264000.0,
                             10559470521600.0,
                             670442572800.0,
                             33522128640.0,
                             1323241920.0,
                             40840800.0,
                             960960.0,
                             16380.0,
                             182.0,
                             1.0};

CMatrix add_scaled_identity(CMatrix m, double a) {
  for (int i = 0; i < m.rows(); ++i) m(i, i) += a;
  return m;
}

}  // namespace

CMatrix expm_pade(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: not square");
  if (!a.all_finite()) throw std::invalid_argument("expm: non-finite entries");
  const int n = a.rows();
  if (n == 0) return CMatrix();

  const double nrm = a.norm_1();
  int s = 0;
  if (nrm > theta13)
    s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
  CMatrix x = a;
  if (s > 0) x *= cd(std::ldexp(1.0, -s), 0.0);

  const CMatrix x2 = x * x;
  const CMatrix x4 = x2 * x2;
  const CMatrix x6 = x2 * x4;

  // U = x * (x6*(b13 x6 + b11 x4 + b9 x2) + b7 x6 + b5 x4 + b3 x2 + b1 I)
  CMatrix w1 = cd(pade13_b[13], 0.0) * x6;
  w1 += cd(pade13_b[11], 0.0) * x4;
  w1 += cd(pade13_b[9], 0.0) * x2;
  CMatrix w = x6 * w1;
  w += cd(pade13_b[7], 0.0) * x6;
  w += cd(pade13_b[5], 0.0) * x4;
  w += cd(pade13_b[3], 0.0) * x2;
  w = add_scaled_identity(std::move(w), pade13_b[1]);
  const CMatrix u = x * w;

  // V = x6*(b12 x6 + b10 x4 + b8 x2) + b6 x6 + b4 x4 + b2 x2 + b0 I
  CMatrix z1 = cd(pade13_b[12], 0.0) * x6;
  z1 += cd(pade13_b[10], 0.0) * x4;
  z1 += cd(pade13_b[8], 0.0) * x2;
  CMatrix v = x6 * z1;
  v += cd(pade13_b[6], 0.0) * x6;
  v += cd(pade13_b[4], 0.0) * x4;
  v += cd(pade13_b[2], 0.0) * x2;
  v = add_scaled_identity(std::move(v), pade13_b[0]);

  CMatrix num = v;
  num += u;
  CMatrix den = v;
  den -= u;
  const LuFactors f = lu_factor(std::move(den));
  lu_solve(f, num);

  for (int i = 0; i < s; ++i) num = num * num;
  return num;
}

namespace {

using cld = std::complex<long double>;

// partial-pivot Gaussian elimination, solves in place
void solve_ld(std::vector<cld>& a, std::vector<cld>& b, int n) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    long double best = std::abs(a[col + static_cast<size_t>(col) * n]);
    for (int i = col + 1; i < n; ++i) {
      const long double v = std::abs(a[i + static_cast<size_t>(col) * n]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0L) throw std::runtime_error("expm_pade_extended: singular");
    if (piv != col) {
      for (int j = 0; j < n; ++j)
        std::swap(a[piv + static_cast<size_t>(j) * n],
                  a[col + static_cast<size_t>(j) * n]);
      for (int j = 0; j < n; ++j)
        std::swap(b[piv + static_cast<size_t>(j) * n],
                  b[col + static_cast<size_t>(j) * n]);
    }
    const cld d = a[col + static_cast<size_t>(col) * n];
    for (int i = col + 1; i < n; ++i) {
      const cld f = a[i + static_cast<size_t>(col) * n] / d;
      if (f == cld(0.0L, 0.0L)) continue;
      for (int j = col; j < n; ++j)
        a[i + static_cast<size_t>(j) * n] -=
            f * a[col + static_cast<size_t>(j) * n];
      for (int j = 0; j < n; ++j)
        b[i + static_cast<size_t>(j) * n] -=
            f * b[col + static_cast<size_t>(j) * n];
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    const cld d = a[col + static_cast<size_t>(col) * n];
    for (int j = 0; j < n; ++j) {
      cld s = b[col + static_cast<size_t>(j) * n];
      for (int i = col + 1; i < n; ++i)
        s -= a[col + static_cast<size_t>(i) * n] *
             b[i + static_cast<size_t>(j) * n];
      b[col + static_cast<size_t>(j) * n] = s / d;
    }
  }
}

std::vector<cld> mul_ld(const std::vector<cld>& a, const std::vector<cld>& b,
                        int n) {
  std::vector<cld> c(static_cast<size_t>(n) * n, cld(0.0L, 0.0L));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      const cld blj = b[l + static_cast<size_t>(j) * n];
      if (blj == cld(0.0L, 0.0L)) continue;
      const cld* al = a.data() + static_cast<size_t>(l) * n;
      cld* cj = c.data() + static_cast<size_t>(j) * n;
      for (int i = 0; i < n; ++i) cj[i] += al[i] * blj;
    }
  return c;
}

}  // namespace

CMatrix expm_pade_extended(const CMatrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("expm_pade_extended: not square");
  const int n = a.rows();
  if (n == 0) return CMatrix();

  std::vector<cld> x(static_cast<size_t>(n) * n);
  long double nrm = 0.0L;
  for (int j = 0; j < n; ++j) {
    long double colsum = 0.0L;
    for (int i = 0; i < n; ++i) {
      const cd v = a(i, j);
      x[i + static_cast<size_t>(j) * n] = cld(v.real(), v.imag());
      colsum += std::abs(x[i + static_cast<size_t>(j) * n]);
    }
    nrm = std::max(nrm, colsum);
  }
  int s = 0;
  if (nrm > theta13)
    s = static_cast<int>(std::ceil(std::log2(static_cast<double>(nrm) /
                                             theta13)));
  if (s > 0) {
    const long double f = std::ldexp(1.0L, -s);
    for (auto& v : x) v *= f;
  }

  const auto x2 = mul_ld(x, x, n);
  const auto x4 = mul_ld(x2, x2, n);
  const auto x6 = mul_ld(x2, x4, n);

  const size_t nn = static_cast<size_t>(n) * n;
  std::vector<cld> w1(nn), z1(nn);
  for (size_t k = 0; k < nn; ++k) {
    w1[k] = static_cast<long double>(pade13_b[13]) * x6[k] +
            static_cast<long double>(pade13_b[11]) * x4[k] +
            static_cast<long double>(pade13_b[9]) * x2[k];
    z1[k] = static_cast<long double>(pade13_b[12]) * x6[k] +
            static_cast<long double>(pade13_b[10]) * x4[k] +
            static_cast<long double>(pade13_b[8]) * x2[k];
  }
  auto w = mul_ld(x6, w1, n);
  auto v = mul_ld(x6, z1, n);
  for (size_t k = 0; k < nn; ++k) {
    w[k] += static_cast<long double>(pade13_b[7]) * x6[k] +
            static_cast<long double>(pade13_b[5]) * x4[k] +
            static_cast<long double>(pade13_b[3]) * x2[k];
    v[k] += static_cast<long double>(pade13_b[6]) * x6[k] +
            static_cast<long double>(pade13_b[4]) * x4[k] +
            static_cast<long double>(pade13_b[2]) * x2[k];
  }
  for (int i = 0; i < n; ++i) {
    w[i + static_cast<size_t>(i) * n] +=
        static_cast<long double>(pade13_b[1]);
    v[i + static_cast<size_t>(i) * n] +=
        static_cast<long double>(pade13_b[0]);
  }
  const auto u = mul_ld(x, w, n);
  std::vector<cld> num(nn), den(nn);
  for (size_t k = 0; k < nn; ++k) {
    num[k] = v[k] + u[k];
    den[k] = v[k] - u[k];
  }
  solve_ld(den, num, n);
  for (int k = 0; k < s; ++k) num = mul_ld(num, num, n);

  CMatrix out(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const cld v2 = num[i + static_cast<size_t>(j) * n];
      out(i, j) = cd(static_cast<double>(v2.real()),
                     static_cast<double>(v2.imag()));
    }
  return out;
}

Propagator::Propagator(CMatrix g, double cond_threshold) : g_(std::move(g)) {
  if (g_.rows() != g_.cols())
    throw std::invalid_argument("Propagator: generator not square");
  if (!g_.all_finite())
    throw std::invalid_argument("Propagator: non-finite generator");
  const int n = g_.rows();
  if (n == 0) return;

  const double scale = std::max(1.0, g_.norm_max());
  double herm = 0.0, antiherm = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) {
      herm = std::max(herm, std::abs(g_(i, j) - std::conj(g_(j, i))));
      antiherm = std::max(antiherm, std::abs(g_(i, j) + std::conj(g_(j, i))));
    }
  const double tol = 1e-13 * scale;

  if (herm <= tol || antiherm <= tol) {
    // G = V diag(w) V^dagger with real w, or G = -iH with H = iG Hermitian
    const bool anti = antiherm <= tol;
    CMatrix h = g_;
    if (anti) h *= cd(0.0, 1.0);
    HermEig e = eig_hermitian(h);
    v_ = std::move(e.V);
    vadj_or_inv_ = v_.adjoint();
    w_.resize(n);
    for (int i = 0; i < n; ++i)
      w_[i] = anti ? cd(0.0, -e.w[i]) : cd(e.w[i], 0.0);
    method_ = anti ? Method::anti_hermitian : Method::hermitian;
    cond_ = 1.0;
    return;
  }

  GenEig e = eig_general(g_);
  cond_ = e.cond1;
  if (cond_ <= cond_threshold) {
    v_ = std::move(e.V);
    vadj_or_inv_ = std::move(e.Vinv);
    w_ = std::move(e.w);
    refine_eigenvalues(g_, v_, vadj_or_inv_, w_);
    method_ = Method::diagonalized;
  } else {
    method_ = Method::pade;
  }
}

std::vector<cd> Propagator::phases(double t) const {
  std::vector<cd> p(w_.size());
  for (size_t i = 0; i < w_.size(); ++i) p[i] = exp_zt(w_[i], t);
  return p;
}

void Propagator::apply_diag(double t, CMatrix& x) const {
  // x <- V diag(e^{w t}) Vinv x
  CMatrix y = vadj_or_inv_ * x;
  const std::vector<cd> p = phases(t);
  for (int j = 0; j < y.cols(); ++j)
    kernels::ops().diag_mul(y.rows(), p.data(), y.col(j), y.col(j));
  x = v_ * y;
}

CMatrix Propagator::at(double t) const {
  if (dim() == 0) return CMatrix();
  if (method_ == Method::pade) {
    CMatrix gt = g_;
    gt *= cd(t, 0.0);
    return expm_pade(gt);
  }
  CMatrix x = CMatrix::identity(dim());
  apply_diag(t, x);
  return x;
}

void Propagator::apply(double t, CMatrix& x) const {
  if (x.rows() != dim()) throw std::invalid_argument("Propagator::apply dim");
  if (method_ == Method::pade) {
    x = at(t) * x;
    return;
  }
  apply_diag(t, x);
}

std::vector<cd> Propagator::apply(double t, std::span<const cd> x) const {
  CMatrix m(dim(), 1);
  for (int i = 0; i < dim(); ++i) m(i, 0) = x[i];
  apply(t, m);
  return std::vector<cd>(m.data(), m.data() + dim());
}

namespace {
// (e^{z} - 1)/z with a series for small |z|
cd expm1_over(cd z) {
  if (std::abs(z) < 1e-6)
    return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0)));
  return (std::exp(z) - 1.0) / z;
}
}  // namespace

cd Propagator::integrate_row(std::span<const cd> w, std::span<const cd> v,
                             double t) const {
  const int n = dim();
  if (static_cast<int>(w.size()) != n || static_cast<int>(v.size()) != n)
    throw std::invalid_argument("integrate_row dim");
  if (t == 0.0 || n == 0) return cd(0.0, 0.0);

  if (method_ != Method::pade) {
    // sum_k (w V)_k (Vinv v)_k * t * phi(w_k t),  phi(z) = (e^z - 1)/z
    std::vector<cd> wv(n, cd(0.0, 0.0)), iv(n, cd(0.0, 0.0));
    kernels::ops().gemm_nn(1, n, n, w.data(), 1, v_.data(), n, wv.data(), 1,
                           false);
    kernels::ops().gemm_nn(n, 1, n, vadj_or_inv_.data(), n, v.data(), n,
                           iv.data(), n, false);
    cd acc(0.0, 0.0);
    for (int k = 0; k < n; ++k)
      acc += wv[k] * iv[k] * (t * expm1_over(w_[k] * t));
    return acc;
  }

  // Pade fallback: composite Simpson on f(t') = w^T exp(G t') v, refining
  // until the estimate settles to 0.5%.
  auto sample = [&](int segments) {
    const double h = t / segments;
    const CMatrix step = at(h);
    std::vector<cd> state(v.begin(), v.end());
    std::vector<cd> f(segments + 1);
    auto dot = [&](const std::vector<cd>& s) {
      cd acc(0.0, 0.0);
      for (int i = 0; i < n; ++i) acc += w[i] * s[i];
      return acc;
    };
    f[0] = dot(state);
    for (int k = 1; k <= segments; ++k) {
      state = matvec(step, state);
      f[k] = dot(state);
    }
    cd integral(0.0, 0.0);
    for (int k = 0; k + 2 <= segments; k += 2)
      integral += (h / 3.0) * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
    return integral;
  };
  cd prev = sample(16);
  for (int segments = 32; segments <= 4096; segments *= 2) {
    const cd cur = sample(segments);
    if (std::abs(cur - prev) <= 5e-3 * std::max(1e-300, std::abs(cur)))
      return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace aeqr::la
