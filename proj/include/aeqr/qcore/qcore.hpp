#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aeqr/halfint.hpp"
#include "aeqr/la/expm.hpp"
#include "aeqr/la/matrix.hpp"

namespace aeqr::qcore {

using la::cd;
using la::CMatrix;

// Angular momentum operators for spin j in the m-descending basis
// (index 0 <-> m = +j, index 2j <-> m = -j), hbar = 1.
struct SpinOperators {
  HalfInt j;
  CMatrix jx, jy, jz, jp, jm;
};
SpinOperators spin_operators(HalfInt j);

// Places `op` on the subspace spanned by index_map (op basis k -> full basis
// index_map[k]); the complement stays zero. Callers add identity blocks
// themselves where needed.
CMatrix embed_operator(const CMatrix& op, std::span<const int> index_map,
                       int total_dim);

// exp(G t); structure-aware (see la::Propagator). t must be >= 0.
CMatrix propagator(const CMatrix& g, double t);

// Deterministic counter-based uniforms/normals: stream `seed`, word index i.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : seed_(seed) {}
  double uniform(uint64_t i) const;                 // [0, 1)
  std::pair<double, double> normal_pair(uint64_t i) const;  // Box-Muller

 private:
  uint64_t seed_;
};

// Haar-uniform random pure state of dimension d (normalized isotropic
// complex Gaussian vector); bitwise reproducible for fixed (d, seed).
std::vector<cd> haar_state(int d, uint64_t seed);

}  // namespace aeqr::qcore
