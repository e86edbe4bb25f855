#include "aeqr/la/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define AEQR_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#endif

// AVX2/FMA kernels. A __m256d holds two interleaved complex<double>.
// Complex scalar products use the fmaddsub trick:
//   res = fmaddsub(x, re(b), swap(x) * im(b))
// which yields [xr*br - xi*bi, xi*br + xr*bi] per lane pair.

namespace aeqr::la::kernels {

#ifdef AEQR_HAVE_AVX2_BUILD
namespace {

inline __m256d cmul_bcast(__m256d x, __m256d br, __m256d bi) {
  const __m256d xs = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, br, _mm256_mul_pd(xs, bi));
}

void gemm_nn_avx2(int m, int n, int k, const cd* A, int lda, const cd* B,
                  int ldb, cd* C, int ldc, bool accumulate) {
  const int m4 = m - (m % 4);
  int j = 0;
  for (; j + 2 <= n; j += 2) {
    const cd* b0 = B + static_cast<size_t>(j) * ldb;
    const cd* b1 = b0 + ldb;
    cd* c0 = C + static_cast<size_t>(j) * ldc;
    cd* c1 = c0 + ldc;
    for (int i = 0; i < m4; i += 4) {
      __m256d acc00, acc01, acc10, acc11;
      if (accumulate) {
        acc00 = _mm256_loadu_pd(reinterpret_cast<const double*>(c0 + i));
        acc01 = _mm256_loadu_pd(reinterpret_cast<const double*>(c0 + i + 2));
        acc10 = _mm256_loadu_pd(reinterpret_cast<const double*>(c1 + i));
        acc11 = _mm256_loadu_pd(reinterpret_cast<const double*>(c1 + i + 2));
      } else {
        acc00 = acc01 = acc10 = acc11 = _mm256_setzero_pd();
      }
      for (int l = 0; l < k; ++l) {
        const cd* al = A + static_cast<size_t>(l) * lda + i;
        const __m256d a0 = _mm256_loadu_pd(reinterpret_cast<const double*>(al));
        const __m256d a1 =
            _mm256_loadu_pd(reinterpret_cast<const double*>(al + 2));
        const __m256d br0 = _mm256_set1_pd(b0[l].real());
        const __m256d bi0 = _mm256_set1_pd(b0[l].imag());
        const __m256d br1 = _mm256_set1_pd(b1[l].real());
        const __m256d bi1 = _mm256_set1_pd(b1[l].imag());
        acc00 = _mm256_add_pd(acc00, cmul_bcast(a0, br0, bi0));
        acc01 = _mm256_add_pd(acc01, cmul_bcast(a1, br0, bi0));
        acc10 = _mm256_add_pd(acc10, cmul_bcast(a0, br1, bi1));
        acc11 = _mm256_add_pd(acc11, cmul_bcast(a1, br1, bi1));
      }
      _mm256_storeu_pd(reinterpret_cast<double*>(c0 + i), acc00);
      _mm256_storeu_pd(reinterpret_cast<double*>(c0 + i + 2), acc01);
      _mm256_storeu_pd(reinterpret_cast<double*>(c1 + i), acc10);
      _mm256_storeu_pd(reinterpret_cast<double*>(c1 + i + 2), acc11);
    }
    for (int i = m4; i < m; ++i) {
      cd s0 = accumulate ? c0[i] : cd(0.0, 0.0);
      cd s1 = accumulate ? c1[i] : cd(0.0, 0.0);
      for (int l = 0; l < k; ++l) {
        const cd a = A[static_cast<size_t>(l) * lda + i];
        s0 += a * b0[l];
        s1 += a * b1[l];
      }
      c0[i] = s0;
      c1[i] = s1;
    }
  }
  for (; j < n; ++j) {
    const cd* bj = B + static_cast<size_t>(j) * ldb;
    cd* cj = C + static_cast<size_t>(j) * ldc;
    for (int i = 0; i < m4; i += 4) {
      __m256d acc0, acc1;
      if (accumulate) {
        acc0 = _mm256_loadu_pd(reinterpret_cast<const double*>(cj + i));
        acc1 = _mm256_loadu_pd(reinterpret_cast<const double*>(cj + i + 2));
      } else {
        acc0 = acc1 = _mm256_setzero_pd();
      }
      for (int l = 0; l < k; ++l) {
        const cd* al = A + static_cast<size_t>(l) * lda + i;
        const __m256d a0 = _mm256_loadu_pd(reinterpret_cast<const double*>(al));
        const __m256d a1 =
            _mm256_loadu_pd(reinterpret_cast<const double*>(al + 2));
        const __m256d br = _mm256_set1_pd(bj[l].real());
        const __m256d bi = _mm256_set1_pd(bj[l].imag());
        acc0 = _mm256_add_pd(acc0, cmul_bcast(a0, br, bi));
        acc1 = _mm256_add_pd(acc1, cmul_bcast(a1, br, bi));
      }
      _mm256_storeu_pd(reinterpret_cast<double*>(cj + i), acc0);
      _mm256_storeu_pd(reinterpret_cast<double*>(cj + i + 2), acc1);
    }
    for (int i = m4; i < m; ++i) {
      cd s = accumulate ? cj[i] : cd(0.0, 0.0);
      for (int l = 0; l < k; ++l)
        s += A[static_cast<size_t>(l) * lda + i] * bj[l];
      cj[i] = s;
    }
  }
}

void axpy_avx2(int n, cd a, const cd* x, cd* y) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    __m256d yv = _mm256_loadu_pd(reinterpret_cast<double*>(y + i));
    yv = _mm256_add_pd(yv, cmul_bcast(xv, ar, ai));
    _mm256_storeu_pd(reinterpret_cast<double*>(y + i), yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

cd dotc_avx2(int n, const cd* x, const cd* y) {
  // acc_a lanes: [sum xr*yr, sum xi*yi, ...]; acc_b: [sum xi*yr, sum xr*yi, ...]
  __m256d acc_a = _mm256_setzero_pd();
  __m256d acc_b = _mm256_setzero_pd();
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    const __m256d yv = _mm256_loadu_pd(reinterpret_cast<const double*>(y + i));
    const __m256d xs = _mm256_permute_pd(xv, 0x5);
    acc_a = _mm256_fmadd_pd(xv, yv, acc_a);
    acc_b = _mm256_fmadd_pd(xs, yv, acc_b);
  }
  alignas(32) double a[4], b[4];
  _mm256_store_pd(a, acc_a);
  _mm256_store_pd(b, acc_b);
  double re = a[0] + a[1] + a[2] + a[3];
  double im = (b[1] - b[0]) + (b[3] - b[2]);
  for (; i < n; ++i) {
    const cd t = std::conj(x[i]) * y[i];
    re += t.real();
    im += t.imag();
  }
  return cd(re, im);
}

void diag_mul_avx2(int n, const cd* d, const cd* x, cd* y) {
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d dv = _mm256_loadu_pd(reinterpret_cast<const double*>(d + i));
    const __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    const __m256d xr = _mm256_permute_pd(xv, 0x0);
    const __m256d xi = _mm256_permute_pd(xv, 0xF);
    const __m256d ds = _mm256_permute_pd(dv, 0x5);
    const __m256d res = _mm256_fmaddsub_pd(xr, dv, _mm256_mul_pd(xi, ds));
    _mm256_storeu_pd(reinterpret_cast<double*>(y + i), res);
  }
  for (; i < n; ++i) y[i] = d[i] * x[i];
}

double nrm2sq_avx2(int n, const cd* x) {
  __m256d acc = _mm256_setzero_pd();
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  alignas(32) double a[4];
  _mm256_store_pd(a, acc);
  double s = a[0] + a[1] + a[2] + a[3];
  for (; i < n; ++i) s += std::norm(x[i]);
  return s;
}

void scal_avx2(int n, cd a, cd* x) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(reinterpret_cast<const double*>(x + i));
    _mm256_storeu_pd(reinterpret_cast<double*>(x + i), cmul_bcast(xv, ar, ai));
  }
  for (; i < n; ++i) x[i] *= a;
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops t{gemm_nn_avx2, axpy_avx2,   dotc_avx2,
                     diag_mul_avx2, nrm2sq_avx2, scal_avx2,
                     "avx2"};
  return t;
}
#else
const Ops& avx2_ops() { return scalar_ops(); }
#endif

}  // namespace aeqr::la::kernels
