/**
 * @file polytope.hpp
 * @brief Membership in the fractional relaxation polytope
 * P = { y in [0,1]^n : sum_i y_i * c_r(i) <= L_r for every r }.
 */

#pragma once

#include "subknap/instance.hpp"
#include "subknap/multilinear.hpp"

namespace subknap {

/// Inclusive membership test, one comparison per dimension.
inline bool contains(const Instance& inst, const Vec& y) {
  for (double v : y)
    if (!(v >= 0.0) || !(v <= 1.0)) throw InputError("contains: point must lie in [0, 1]^n");
  const Vec cost = costOfPoint(inst, y);
  for (int r = 0; r < inst.d(); ++r)
    if (!(cost[r] <= inst.budget(r))) return false;
  return true;
}

inline bool contains(const Instance& inst, const FractionalPoint& y) { return contains(inst, y.entries()); }

/// The instance's relaxation polytope. Contains the all-zeros point and is
/// downward closed componentwise.
struct Polytope {
  explicit Polytope(const Instance& inst) : inst_(&inst) {}
  bool contains(const Vec& y) const { return subknap::contains(*inst_, y); }
  bool contains(const FractionalPoint& y) const { return subknap::contains(*inst_, y); }

private:
  const Instance* inst_;
};

namespace detail {

/// Scale a point down until it satisfies the budget constraints exactly.
/// Repairs the at-most-ulp overshoot that accumulating float sums may leave
/// on otherwise feasible solver outputs; a handful of iterations suffice.
inline void clampToPolytope(const Instance& inst, Vec& y) {
  for (double& v : y) v = std::min(1.0, std::max(0.0, v));
  for (int pass = 0; pass < 64; ++pass) {
    const Vec cost = costOfPoint(inst, y);
    double scale = 1.0;
    for (int r = 0; r < inst.d(); ++r) {
      const double b = inst.budget(r);
      if (cost[r] <= b) continue;
      if (b <= 0.0) {
        for (int i = 0; i < inst.n(); ++i)
          if (inst.cost(r, i) > 0.0) y[i] = 0.0;
      } else {
        scale = std::min(scale, b / cost[r]);
      }
    }
    if (scale >= 1.0 && contains(inst, y)) return;
    for (double& v : y) v *= scale;
  }
  y.assign(y.size(), 0.0); // unreachable in practice
}

} // namespace detail

} // namespace subknap
