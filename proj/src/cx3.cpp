#include "ncg/cx3.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace ncg {

namespace {

// Subtract the bilinear projections onto the already chosen directions and
// normalize to <<x,x>> = 1.  Fails (returns false) when the remainder is too
// close to the null cone for a stable division.
bool gs_step(const CVec3& seed, const std::array<const CVec3*, 2>& prev, int nprev,
             CVec3& out) {
  CVec3 x = seed;
  for (int k = 0; k < nprev; ++k) x -= bilinear(x, *prev[k]) * (*prev[k]);
  const cplx s = bilinear(x, x);
  const double h = norm2(x);
  if (h == 0.0 || std::abs(s) <= 1e-10 * h) return false;
  out = x / std::sqrt(s);
  return true;
}

}  // namespace

ConjugateFrame conjugate_frame(const CVec3& nu) {
  const double h = norm2(nu);
  if (h == 0.0) throw std::invalid_argument("conjugate_frame: zero vector");
  const CVec3 nc = nu.conjugate();
  const cplx q = bilinear(nc, nc);
  if (std::abs(q) <= 1e-8 * h)
    throw std::invalid_argument("conjugate_frame: normal direction is null");

  ConjugateFrame f;
  f.w = nc / std::sqrt(q);

  // Seed order: standard basis vectors least aligned with w first, ties by
  // lowest index; each candidate may still project onto the null cone, in
  // which case the next seed is tried.
  std::array<int, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double da = std::abs(f.w(a)), db = std::abs(f.w(b));
    if (da != db) return da < db;
    return a < b;
  });

  std::array<const CVec3*, 2> prev = {&f.w, nullptr};
  bool have_u = false;
  std::array<bool, 3> used = {false, false, false};
  for (int idx : order) {
    if (gs_step(CVec3::Unit(idx), prev, 1, f.u)) {
      have_u = true;
      used[idx] = true;
      break;
    }
  }
  if (!have_u) throw std::runtime_error("conjugate_frame: no stable first completion");

  prev = {&f.w, &f.u};
  bool have_v = false;
  for (int idx : order) {
    if (used[idx]) continue;
    if (gs_step(CVec3::Unit(idx), prev, 2, f.v)) {
      have_v = true;
      break;
    }
  }
  if (!have_v) {
    // Mixed seeds as a fallback; all three singles plus pairs failing would
    // require nu itself to be numerically null, which was excluded above.
    for (int a = 0; a < 3 && !have_v; ++a)
      for (int b = a + 1; b < 3 && !have_v; ++b)
        have_v = gs_step((CVec3::Unit(a) + CVec3::Unit(b)) / std::sqrt(2.0), prev, 2, f.v);
  }
  if (!have_v) throw std::runtime_error("conjugate_frame: no stable second completion");

  CMat3 B;
  B.col(0) = f.u;
  B.col(1) = f.v;
  B.col(2) = f.w;
  // The columns are bilinear-orthonormal, so the inverse is the plain transpose.
  f.A = B.transpose();
  return f;
}

CVec3 null_in_hyperplane(const CVec3& nu) {
  const ConjugateFrame f = conjugate_frame(nu);
  return f.u + cplx(0, 1) * f.v;
}

}  // namespace ncg
