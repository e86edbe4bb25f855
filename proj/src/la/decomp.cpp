#include "aeqr/la/decomp.hpp"

#include <stdexcept>
#include <string>

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

namespace aeqr::la {

namespace {
void require_square(const CMatrix& a, const char* who) {
  if (a.rows() != a.cols())
    throw std::invalid_argument(std::string(who) + ": matrix not square");
  if (!a.all_finite())
    throw std::invalid_argument(std::string(who) + ": non-finite entries");
}
}  // namespace

HermEig eig_hermitian(const CMatrix& a) {
  require_square(a, "eig_hermitian");
  const int n = a.rows();
  HermEig out;
  out.V = a;
  out.w.assign(n, 0.0);
  if (n == 0) return out;
  const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, out.V.data(),
                                  n, out.w.data());
  if (info != 0)
    throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
  return out;
}

GenEig eig_general(const CMatrix& a) {
  require_square(a, "eig_general");
  const int n = a.rows();
  GenEig out;
  out.w.assign(n, cd(0.0, 0.0));
  out.V = CMatrix(n, n);
  if (n == 0) return out;
  CMatrix work = a;
  const int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n,
                    out.w.data(), nullptr, n, out.V.data(), n);
  if (info != 0)
    throw std::runtime_error("zgeev failed, info=" + std::to_string(info));
  out.Vinv = inverse(out.V);
  out.cond1 = out.V.norm_1() * out.Vinv.norm_1();
  return out;
}

LuFactors lu_factor(CMatrix a) {
  require_square(a, "lu_factor");
  const int n = a.rows();
  LuFactors f{std::move(a), std::vector<int>(n, 0)};
  if (n == 0) return f;
  const int info =
      LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, f.lu.data(), n, f.piv.data());
  if (info != 0)
    throw std::runtime_error("zgetrf failed (singular?), info=" +
                             std::to_string(info));
  return f;
}

void lu_solve(const LuFactors& f, CMatrix& b) {
  const int n = f.lu.rows();
  if (b.rows() != n) throw std::invalid_argument("lu_solve shape mismatch");
  if (n == 0 || b.cols() == 0) return;
  const int info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, b.cols(),
                                  f.lu.data(), n, f.piv.data(), b.data(), n);
  if (info != 0)
    throw std::runtime_error("zgetrs failed, info=" + std::to_string(info));
}

CMatrix inverse(const CMatrix& a) {
  LuFactors f = lu_factor(a);
  const int n = a.rows();
  if (n == 0) return CMatrix();
  const int info =
      LAPACKE_zgetri(LAPACK_COL_MAJOR, n, f.lu.data(), n, f.piv.data());
  if (info != 0)
    throw std::runtime_error("zgetri failed, info=" + std::to_string(info));
  return std::move(f.lu);
}

}  // namespace aeqr::la
