#include "aeqr/la/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "aeqr/la/kernels.hpp"

namespace aeqr::la {

namespace {
void check_same_shape(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix shape mismatch");
}
}  // namespace

CMatrix CMatrix::identity(int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = cd(1.0, 0.0);
  return m;
}

CMatrix CMatrix::diagonal(std::span<const cd> d) {
  CMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i)
    m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  check_same_shape(*this, o);
  kernels::ops().axpy(static_cast<int>(size()), cd(1.0, 0.0), o.data(), data());
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  check_same_shape(*this, o);
  kernels::ops().axpy(static_cast<int>(size()), cd(-1.0, 0.0), o.data(),
                      data());
  return *this;
}

CMatrix& CMatrix::operator*=(cd a) {
  kernels::ops().scal(static_cast<int>(size()), a, data());
  return *this;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (int j = 0; j < cols_; ++j)
    for (int i = 0; i < rows_; ++i) r(j, i) = std::conj((*this)(i, j));
  return r;
}

CMatrix CMatrix::transpose() const {
  CMatrix r(cols_, rows_);
  for (int j = 0; j < cols_; ++j)
    for (int i = 0; i < rows_; ++i) r(j, i) = (*this)(i, j);
  return r;
}

CMatrix CMatrix::conjugate() const {
  CMatrix r(rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = std::conj(data_[i]);
  return r;
}

double CMatrix::norm_fro() const {
  return std::sqrt(kernels::ops().nrm2sq(static_cast<int>(size()), data()));
}

double CMatrix::norm_max() const {
  double m = 0.0;
  for (const cd& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double CMatrix::norm_1() const {
  double m = 0.0;
  for (int j = 0; j < cols_; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
    m = std::max(m, s);
  }
  return m;
}

bool CMatrix::all_finite() const {
  for (const cd& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double CMatrix::hermiticity_defect() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (int j = 0; j < cols_; ++j)
    for (int i = 0; i <= j; ++i)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("gemm shape mismatch");
  CMatrix c(a.rows(), b.cols());
  kernels::ops().gemm_nn(a.rows(), b.cols(), a.cols(), a.data(), a.rows(),
                         b.data(), b.rows(), c.data(), c.rows(), false);
  return c;
}

void gemm_acc(CMatrix& c, cd alpha, const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols())
    throw std::invalid_argument("gemm shape mismatch");
  if (alpha == cd(1.0, 0.0)) {
    kernels::ops().gemm_nn(a.rows(), b.cols(), a.cols(), a.data(), a.rows(),
                           b.data(), b.rows(), c.data(), c.rows(), true);
    return;
  }
  CMatrix t(a.rows(), b.cols());
  kernels::ops().gemm_nn(a.rows(), b.cols(), a.cols(), a.data(), a.rows(),
                         b.data(), b.rows(), t.data(), t.rows(), false);
  kernels::ops().axpy(static_cast<int>(t.size()), alpha, t.data(), c.data());
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int ja = 0; ja < a.cols(); ++ja)
    for (int ia = 0; ia < a.rows(); ++ia) {
      const cd av = a(ia, ja);
      if (av == cd(0.0, 0.0)) continue;
      for (int jb = 0; jb < b.cols(); ++jb)
        for (int ib = 0; ib < b.rows(); ++ib)
          r(ia * b.rows() + ib, ja * b.cols() + jb) = av * b(ib, jb);
    }
  return r;
}

cd trace(const CMatrix& a) {
  cd t(0.0, 0.0);
  for (int i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

std::vector<cd> matvec(const CMatrix& a, std::span<const cd> x) {
  if (static_cast<size_t>(a.cols()) != x.size())
    throw std::invalid_argument("matvec shape mismatch");
  std::vector<cd> y(a.rows(), cd(0.0, 0.0));
  kernels::ops().gemm_nn(a.rows(), 1, a.cols(), a.data(), a.rows(), x.data(),
                         a.cols(), y.data(), a.rows(), false);
  return y;
}

}  // namespace aeqr::la
