#include "aeqr/qcore/qcore.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "aeqr/constants.hpp"

namespace aeqr::qcore {

SpinOperators spin_operators(HalfInt j) {
  if (j.twice < 0) throw std::invalid_argument("spin_operators: j < 0");
  const int n = j.multiplicity();
  const double jv = j.value();
  SpinOperators s{j, CMatrix(n, n), CMatrix(n, n), CMatrix(n, n),
                  CMatrix(n, n), CMatrix(n, n)};
  // index i <-> m = j - i
  for (int i = 0; i < n; ++i) s.jz(i, i) = cd(jv - i, 0.0);
  // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, |m+1> sits one index above
  for (int i = 1; i < n; ++i) {
    const double m = jv - i;
    s.jp(i - 1, i) = cd(std::sqrt(jv * (jv + 1.0) - m * (m + 1.0)), 0.0);
  }
  s.jm = s.jp.adjoint();
  s.jx = s.jp;
  s.jx += s.jm;
  s.jx *= cd(0.5, 0.0);
  s.jy = s.jp;
  s.jy -= s.jm;
  s.jy *= cd(0.0, -0.5);
  return s;
}

CMatrix embed_operator(const CMatrix& op, std::span<const int> index_map,
                       int total_dim) {
  if (op.rows() != op.cols())
    throw std::invalid_argument("embed_operator: op not square");
  if (static_cast<int>(index_map.size()) != op.rows())
    throw std::invalid_argument("embed_operator: map length != op dim");
  std::set<int> seen;
  for (int idx : index_map) {
    if (idx < 0 || idx >= total_dim)
      throw std::invalid_argument("embed_operator: index out of range");
    if (!seen.insert(idx).second)
      throw std::invalid_argument("embed_operator: index collision");
  }
  CMatrix r(total_dim, total_dim);
  for (int b = 0; b < op.cols(); ++b)
    for (int a = 0; a < op.rows(); ++a)
      r(index_map[a], index_map[b]) = op(a, b);
  return r;
}

CMatrix propagator(const CMatrix& g, double t) {
  if (t < 0.0) throw std::invalid_argument("propagator: t < 0");
  return la::Propagator(g).at(t);
}

namespace {
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

double CounterRng::uniform(uint64_t i) const {
  const uint64_t w = mix64(mix64(seed_) ^ mix64(i + 0x632be59bd9b4e019ULL));
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

std::pair<double, double> CounterRng::normal_pair(uint64_t i) const {
  double u1 = uniform(2 * i);
  const double u2 = uniform(2 * i + 1);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = constants::two_pi * u2;
  return {r * std::cos(th), r * std::sin(th)};
}

std::vector<cd> haar_state(int d, uint64_t seed) {
  if (d < 1) throw std::invalid_argument("haar_state: d < 1");
  const CounterRng rng(seed);
  std::vector<cd> v(d);
  double n2 = 0.0;
  for (int k = 0; k < d; ++k) {
    const auto [re, im] = rng.normal_pair(static_cast<uint64_t>(k));
    v[k] = cd(re, im);
    n2 += re * re + im * im;
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& c : v) c *= inv;
  return v;
}

}  // namespace aeqr::qcore
