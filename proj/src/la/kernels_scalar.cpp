#include "aeqr/la/kernels.hpp"

// Reference kernels. Deliberately straightforward: these define the semantics
// the SIMD variants are tested against.

namespace aeqr::la::kernels {
namespace {

void gemm_nn_scalar(int m, int n, int k, const cd* A, int lda, const cd* B,
                    int ldb, cd* C, int ldc, bool accumulate) {
  for (int j = 0; j < n; ++j) {
    cd* cj = C + static_cast<size_t>(j) * ldc;
    if (!accumulate)
      for (int i = 0; i < m; ++i) cj[i] = cd(0.0, 0.0);
    const cd* bj = B + static_cast<size_t>(j) * ldb;
    for (int l = 0; l < k; ++l) {
      const cd b = bj[l];
      if (b == cd(0.0, 0.0)) continue;
      const cd* al = A + static_cast<size_t>(l) * lda;
      for (int i = 0; i < m; ++i) cj[i] += al[i] * b;
    }
  }
}

void axpy_scalar(int n, cd a, const cd* x, cd* y) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

cd dotc_scalar(int n, const cd* x, const cd* y) {
  cd s(0.0, 0.0);
  for (int i = 0; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

void diag_mul_scalar(int n, const cd* d, const cd* x, cd* y) {
  for (int i = 0; i < n; ++i) y[i] = d[i] * x[i];
}

double nrm2sq_scalar(int n, const cd* x) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::norm(x[i]);
  return s;
}

void scal_scalar(int n, cd a, cd* x) {
  for (int i = 0; i < n; ++i) x[i] *= a;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops t{gemm_nn_scalar, axpy_scalar,   dotc_scalar,
                     diag_mul_scalar, nrm2sq_scalar, scal_scalar,
                     "scalar"};
  return t;
}

}  // namespace aeqr::la::kernels
