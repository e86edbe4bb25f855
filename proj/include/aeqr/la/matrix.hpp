#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace aeqr::la {

using cd = std::complex<double>;

// Dense complex matrix, column-major (entry (i,j) at data[i + j*rows]).
// Value-semantic; all arithmetic routes through the kernel layer.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        data_(static_cast<size_t>(rows) * cols, cd(0.0, 0.0)) {}

  static CMatrix identity(int n);
  static CMatrix diagonal(std::span<const cd> d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  cd& operator()(int i, int j) {
    return data_[static_cast<size_t>(j) * rows_ + i];
  }
  const cd& operator()(int i, int j) const {
    return data_[static_cast<size_t>(j) * rows_ + i];
  }

  cd* data() { return data_.data(); }
  const cd* data() const { return data_.data(); }
  cd* col(int j) { return data_.data() + static_cast<size_t>(j) * rows_; }
  const cd* col(int j) const {
    return data_.data() + static_cast<size_t>(j) * rows_;
  }

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cd a);

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conjugate() const;

  double norm_fro() const;
  double norm_max() const;   // max |entry|
  double norm_1() const;     // max column abs sum
  bool all_finite() const;
  double hermiticity_defect() const;  // max |A - A^dagger| entry

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(cd a, CMatrix m) { return m *= a; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cd> data_;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);
cd trace(const CMatrix& a);
std::vector<cd> matvec(const CMatrix& a, std::span<const cd> x);
// C += alpha * A * B without temporaries
void gemm_acc(CMatrix& c, cd alpha, const CMatrix& a, const CMatrix& b);

}  // namespace aeqr::la
