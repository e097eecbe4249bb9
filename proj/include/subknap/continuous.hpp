/**
 * @file continuous.hpp
 * @brief Solvers for the continuous relaxation: find y in P approximately
 * maximizing F(y).
 *
 * Three interchangeable solvers are provided. The continuous greedy ascent
 * handles monotone oracles, a restarted grid local search handles arbitrary
 * non-negative oracles, and an exhaustive grid scan serves as a verification
 * oracle on tiny instances. Any callable with the ContinuousSolver signature
 * can be registered by name and used by the end-to-end algorithms.
 */

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>

#include "subknap/multilinear.hpp"
#include "subknap/polytope.hpp"
#include "subknap/simplex.hpp"

namespace subknap {

/// Tunables for the built-in continuous solvers.
struct ContinuousConfig {
  int steps = 100;              // greedy ascent steps
  long samplesPerGradient = 1000; // draws per sampled marginal estimate
  int gridDenominator = 8;      // local search / grid scan resolution 1/m, m in [2, 16]
  int restarts = 4;             // local search restarts
  std::uint64_t seed = 0;

  void validate() const {
    if (steps < 1) throw InputError("continuous: steps must be >= 1");
    if (samplesPerGradient < 2) throw InputError("continuous: samplesPerGradient must be >= 2");
    if (gridDenominator < 2 || gridDenominator > 16)
      throw InputError("continuous: grid resolution must be 1/2 .. 1/16");
    if (restarts < 1) throw InputError("continuous: restarts must be >= 1");
  }
};

namespace detail {

/// Improvements below this are treated as float noise by the local search.
inline constexpr double kImprovementTol = 1e-9;

/// max w*v over v in P intersected with [0,1]^n. Entries with non-positive
/// weight are fixed to zero; a final pass saturates zero-weight entries into
/// leftover budget so that monotone instances with slack saturate fully.
inline Vec directionInPolytope(const Instance& inst, const Vec& w) {
  const int n = inst.n();
  Vec v(n, 0.0);
  std::vector<int> active;
  for (int i = 0; i < n; ++i)
    if (w[i] > 0.0) active.push_back(i);

  if (!active.empty()) {
    if (inst.d() == 1) {
      // fractional knapsack: zero-cost first, then by weight per unit cost
      std::vector<int> order = active;
      std::sort(order.begin(), order.end(), [&](int x, int y) {
        const double cx = inst.cost(0, x), cy = inst.cost(0, y);
        if ((cx == 0.0) != (cy == 0.0)) return cx == 0.0;
        if (cx == 0.0) return x < y;
        const double rx = w[x] / cx, ry = w[y] / cy;
        if (rx != ry) return rx > ry;
        return x < y;
      });
      double remaining = inst.budget(0);
      for (int i : order) {
        const double ci = inst.cost(0, i);
        if (ci == 0.0) {
          v[i] = 1.0;
          continue;
        }
        if (remaining <= 0.0) break;
        const double take = std::min(1.0, remaining / ci);
        v[i] = take;
        remaining -= ci * take;
      }
    } else {
      // small LP: budget rows plus unit upper bounds over the active entries
      const int k = static_cast<int>(active.size());
      std::vector<Vec> a(inst.d() + k, Vec(k, 0.0));
      Vec b(inst.d() + k, 0.0), c(k, 0.0);
      for (int r = 0; r < inst.d(); ++r) {
        for (int idx = 0; idx < k; ++idx) a[r][idx] = inst.cost(r, active[idx]);
        b[r] = inst.budget(r);
      }
      for (int idx = 0; idx < k; ++idx) {
        a[inst.d() + idx][idx] = 1.0;
        b[inst.d() + idx] = 1.0;
        c[idx] = w[active[idx]];
      }
      const Vec x = simplexMax(a, b, c);
      for (int idx = 0; idx < k; ++idx) v[active[idx]] = std::clamp(x[idx], 0.0, 1.0);
    }
  }

  // saturate whatever still fits, ascending index
  Vec cost = costOfPoint(inst, v);
  for (int i = 0; i < n; ++i) {
    if (v[i] >= 1.0) continue;
    double room = 1.0 - v[i];
    for (int r = 0; r < inst.d(); ++r) {
      const double ci = inst.cost(r, i);
      if (ci <= 0.0) continue;
      const double slack = inst.budget(r) - cost[r];
      room = std::min(room, slack > 0.0 ? slack / ci : 0.0);
    }
    if (room <= 0.0) continue;
    v[i] += room;
    for (int r = 0; r < inst.d(); ++r) cost[r] += inst.cost(r, i) * room;
  }

  clampToPolytope(inst, v);
  return v;
}

/// Marginal weight of each element at R ~ y. Exact through the extension
/// (w_i = F(y with y_i=1) - F(y with y_i=0)) when an exact evaluator is
/// available, otherwise estimated from common draws.
inline Vec marginalWeights(const Instance& inst, const Vec& y, long samples, Rng& rng) {
  const int n = inst.n();
  Vec w(n, 0.0);
  const bool closed = detail::closedFormExtension(inst.oracle(), y).has_value();
  if (closed || n <= kMaxExactSupport) {
    Vec probe = y;
    for (int i = 0; i < n; ++i) {
      const double yi = probe[i];
      probe[i] = 1.0;
      const double hi = extensionValue(inst, FractionalPoint(probe));
      probe[i] = 0.0;
      const double lo = extensionValue(inst, FractionalPoint(probe));
      probe[i] = yi;
      w[i] = hi - lo;
    }
    return w;
  }
  const SubmodularOracle& f = inst.oracle();
  IndexSet withI, withoutI;
  for (long k = 0; k < samples; ++k) {
    const IndexSet r = sampleFromPoint(y, rng);
    for (int i = 0; i < n; ++i) {
      withoutI.clear();
      for (int e : r)
        if (e != i) withoutI.push_back(e);
      withI = withoutI;
      withI.insert(std::lower_bound(withI.begin(), withI.end(), i), i);
      w[i] += f.value(withI) - f.value(withoutI);
    }
  }
  for (double& wi : w) wi /= static_cast<double>(samples);
  return w;
}

} // namespace detail

/**
 * @brief Continuous greedy ascent for monotone oracles.
 *
 * Follows y(t+1) = y(t) + v(t)/steps where v(t) maximizes the estimated
 * marginal weights over P. Output always lies in P; deterministic per seed.
 */
inline FractionalPoint continuousGreedy(const Instance& inst, const ContinuousConfig& cfg) {
  cfg.validate();
  if (!inst.oracle().monotone())
    throw InputError("continuous greedy: oracle is not monotone; use the local search solver");
  const int n = inst.n();
  Vec y(n, 0.0);
  Rng rng(cfg.seed);
  for (int t = 0; t < cfg.steps; ++t) {
    const Vec w = detail::marginalWeights(inst, y, cfg.samplesPerGradient, rng);
    const Vec v = detail::directionInPolytope(inst, w);
    for (int i = 0; i < n; ++i) y[i] = std::min(1.0, y[i] + v[i] / static_cast<double>(cfg.steps));
  }
  detail::clampToPolytope(inst, y);
  return FractionalPoint(std::move(y));
}

/**
 * @brief Restarted local search over the grid (multiples of 1/m) inside P.
 *
 * Accepts the best single-coordinate move while it improves F by more than
 * the noise tolerance; returns the best point over all restarts. Works for
 * any non-negative oracle.
 */
inline FractionalPoint localSearchFractional(const Instance& inst, const ContinuousConfig& cfg) {
  cfg.validate();
  const int n = inst.n();
  const int den = cfg.gridDenominator;

  const auto toPoint = [&](const std::vector<int>& units) {
    Vec y(n);
    for (int i = 0; i < n; ++i) y[i] = static_cast<double>(units[i]) / static_cast<double>(den);
    return FractionalPoint(std::move(y));
  };
  const auto evaluate = [&](const FractionalPoint& p) {
    if (auto closed = detail::closedFormExtension(inst.oracle(), p.entries())) return *closed;
    if (static_cast<int>(p.fractionalSupport().size()) <= kMaxExactSupport) return fExact(inst, p);
    return fEstimate(inst, p, cfg.samplesPerGradient, deriveSeed(cfg.seed, 0x10ca15e)).mean;
  };

  std::vector<int> bestUnits(n, 0);
  double bestValue = evaluate(toPoint(bestUnits));

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    Rng rng(deriveSeed(cfg.seed, static_cast<std::uint64_t>(restart)));
    std::vector<int> units(n, 0);
    if (restart > 0) {
      // random feasible grid start, raising one coordinate at a time
      for (int i = 0; i < n; ++i) {
        int target = static_cast<int>(rng.below(static_cast<std::uint64_t>(den + 1)));
        for (; target > 0; --target) {
          units[i] = target;
          if (contains(inst, toPoint(units))) break;
          units[i] = 0;
        }
      }
    }
    double current = evaluate(toPoint(units));

    for (int iter = 0; iter < 1000; ++iter) {
      int moveI = -1, moveDir = 0;
      double moveValue = current;
      for (int i = 0; i < n; ++i) {
        for (int dir : {+1, -1}) {
          const int u = units[i] + dir;
          if (u < 0 || u > den) continue;
          units[i] = u;
          const FractionalPoint cand = toPoint(units);
          units[i] -= dir;
          if (!contains(inst, cand)) continue;
          const double value = evaluate(cand);
          if (value > moveValue + detail::kImprovementTol) {
            moveValue = value;
            moveI = i;
            moveDir = dir;
          }
        }
      }
      if (moveI < 0) break;
      units[moveI] += moveDir;
      current = moveValue;
    }
    if (current > bestValue) {
      bestValue = current;
      bestUnits = units;
    }
  }
  return toPoint(bestUnits);
}

/**
 * @brief Exact maximizer of F over P intersected with the grid of
 * resolution 1/m. Verification oracle; the scan is capped at 10^7 points.
 */
inline FractionalPoint gridBruteforce(const Instance& inst, int denominator) {
  if (denominator < 2 || denominator > 16)
    throw InputError("grid scan: resolution must be 1/2 .. 1/16");
  const int n = inst.n();
  double points = 1.0;
  for (int i = 0; i < n; ++i) points *= static_cast<double>(denominator + 1);
  if (points > 1e7)
    throw CapacityError("grid scan: " + std::to_string(static_cast<long long>(points)) +
                        " grid points exceed the 1e7 cap");

  std::vector<int> units(n, 0), bestUnits(n, 0);
  const auto toPoint = [&](const std::vector<int>& u) {
    Vec y(n);
    for (int i = 0; i < n; ++i) y[i] = static_cast<double>(u[i]) / static_cast<double>(denominator);
    return FractionalPoint(std::move(y));
  };
  double bestValue = extensionValue(inst, toPoint(bestUnits));

  // odometer scan; prefix infeasibility cannot be cured by later entries
  Vec prefixCost(inst.d(), 0.0);
  std::function<void(int, Vec&)> scan = [&](int i, Vec& cost) {
    bool over = false;
    for (int r = 0; r < inst.d(); ++r)
      if (cost[r] > inst.budget(r) + 1e-12) over = true;
    if (over) return;
    if (i == n) {
      const FractionalPoint p = toPoint(units);
      if (!contains(inst, p)) return;
      const double value = extensionValue(inst, p);
      if (value > bestValue) {
        bestValue = value;
        bestUnits = units;
      }
      return;
    }
    for (int u = 0; u <= denominator; ++u) {
      units[i] = u;
      Vec next = cost;
      const double frac = static_cast<double>(u) / static_cast<double>(denominator);
      for (int r = 0; r < inst.d(); ++r) next[r] += inst.cost(r, i) * frac;
      scan(i + 1, next);
    }
    units[i] = 0;
  };
  scan(0, prefixCost);
  return toPoint(bestUnits);
}

/// Signature every continuous solver exposes: (instance, seed) -> y in P.
using ContinuousSolver = std::function<FractionalPoint(const Instance&, std::uint64_t)>;

/// Named registry of continuous solvers; the end-to-end algorithms look the
/// solver up by name, so user code can plug in its own.
class SolverRegistry {
public:
  void add(const std::string& name, ContinuousSolver solver) { solvers_[name] = std::move(solver); }

  bool has(const std::string& name) const { return solvers_.count(name) > 0; }

  const ContinuousSolver& get(const std::string& name) const {
    auto it = solvers_.find(name);
    if (it == solvers_.end()) throw InputError("unknown continuous solver '" + name + "'");
    return it->second;
  }

  /// "greedy", "local" and "grid" built from the given configuration.
  static SolverRegistry builtin(ContinuousConfig cfg = {}) {
    SolverRegistry reg;
    reg.add("greedy", [cfg](const Instance& inst, std::uint64_t seed) {
      ContinuousConfig c = cfg;
      c.seed = seed;
      return continuousGreedy(inst, c);
    });
    reg.add("local", [cfg](const Instance& inst, std::uint64_t seed) {
      ContinuousConfig c = cfg;
      c.seed = seed;
      return localSearchFractional(inst, c);
    });
    reg.add("grid", [cfg](const Instance& inst, std::uint64_t) {
      return gridBruteforce(inst, cfg.gridDenominator);
    });
    return reg;
  }

private:
  std::map<std::string, ContinuousSolver> solvers_;
};

} // namespace subknap
