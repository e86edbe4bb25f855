#pragma once

#include <vector>

#include "aeqr/la/matrix.hpp"

namespace aeqr::la {

// A = V diag(w) V^dagger, w real ascending.
struct HermEig {
  std::vector<double> w;
  CMatrix V;
};
HermEig eig_hermitian(const CMatrix& a);

// A V = V diag(w). cond1 is the 1-norm condition estimate of V; it decides
// whether the eigendecomposition is trustworthy for function evaluation.
struct GenEig {
  std::vector<cd> w;
  CMatrix V;
  CMatrix Vinv;
  double cond1 = 0.0;
};
GenEig eig_general(const CMatrix& a);

struct LuFactors {
  CMatrix lu;
  std::vector<int> piv;
};
LuFactors lu_factor(CMatrix a);
// Solve A X = B in place given lu_factor(A).
void lu_solve(const LuFactors& f, CMatrix& b);
CMatrix inverse(const CMatrix& a);

}  // namespace aeqr::la
