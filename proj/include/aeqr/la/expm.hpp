#pragma once

#include <span>
#include <vector>

#include "aeqr/la/decomp.hpp"
#include "aeqr/la/matrix.hpp"

namespace aeqr::la {

// Scaling-and-squaring matrix exponential (13th-order Pade approximant).
CMatrix expm_pade(const CMatrix& a);

// Same algorithm carried out in 80-bit extended precision. Used where the
// phase content |A| is so large (~1e8 rad and up) that double-precision
// eigendecomposition noise would be visible in the result.
CMatrix expm_pade_extended(const CMatrix& a);

// exp(G t) for a fixed generator G and many times t. Diagonalizes G once:
// an (anti-)Hermitian G goes through the Hermitian solver, anything else
// through the general solver. If the eigenvector basis is ill-conditioned
// (cond_1 above `cond_threshold`, e.g. near an exceptional point of a
// Liouvillian) every evaluation falls back to Pade on G*t instead.
class Propagator {
 public:
  enum class Method { hermitian, anti_hermitian, diagonalized, pade };

  explicit Propagator(CMatrix g, double cond_threshold = 1e8);

  int dim() const { return g_.rows(); }
  Method method() const { return method_; }
  double cond() const { return cond_; }
  const CMatrix& generator() const { return g_; }

  CMatrix at(double t) const;
  // x <- exp(G t) x for a block of column vectors
  void apply(double t, CMatrix& x) const;
  std::vector<cd> apply(double t, std::span<const cd> x) const;

  // Integral of w^T exp(G t') v over t' in [0, t] (w is a plain row
  // functional, not conjugated). Closed form through the eigenvalues when
  // diagonalized; adaptive Simpson under the Pade fallback.
  cd integrate_row(std::span<const cd> w, std::span<const cd> v,
                   double t) const;

  // eigenvalues when available (diagonalized methods only)
  std::span<const cd> eigenvalues() const { return w_; }

 private:
  void apply_diag(double t, CMatrix& x) const;
  std::vector<cd> phases(double t) const;

  CMatrix g_;
  Method method_ = Method::pade;
  double cond_ = 1.0;
  CMatrix v_, vadj_or_inv_;
  std::vector<cd> w_;
};

}  // namespace aeqr::la
