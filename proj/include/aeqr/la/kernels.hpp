#pragma once

#include <complex>
#include <cstdint>

// Dense complex<double> kernels behind all hot loops in the linear-algebra
// layer. Two implementations ship: a portable scalar reference and an
// AVX2/FMA variant. Selection happens once at startup from CPUID, overridable
// with AEQR_SIMD=scalar|avx2|auto. The two must agree to floating-point
// roundoff; tests/test_kernels.cpp holds the equivalence suite.

namespace aeqr::la::kernels {

using cd = std::complex<double>;

struct Ops {
  // C[m x n] = A[m x k] * B[k x n] (+ C if accumulate), column-major with
  // leading dimensions lda/ldb/ldc.
  void (*gemm_nn)(int m, int n, int k, const cd* A, int lda, const cd* B,
                  int ldb, cd* C, int ldc, bool accumulate);
  // y += a * x
  void (*axpy)(int n, cd a, const cd* x, cd* y);
  // sum conj(x_i) * y_i
  cd (*dotc)(int n, const cd* x, const cd* y);
  // y_i = d_i * x_i
  void (*diag_mul)(int n, const cd* d, const cd* x, cd* y);
  // sum |x_i|^2
  double (*nrm2sq)(int n, const cd* x);
  // x *= a
  void (*scal)(int n, cd a, cd* x);
  const char* name;
};

const Ops& scalar_ops();
const Ops& avx2_ops();   // valid only if cpu_supports_avx2()
bool cpu_supports_avx2();

// The active table (resolved once, thread-safe).
const Ops& ops();

}  // namespace aeqr::la::kernels
