/**
 * @file rounding.hpp
 * @brief Randomized rounding of a fractional point: draw, filter to nearly
 * feasible, and repair to feasible by partition-and-remove.
 */

#pragma once

#include <algorithm>

#include "subknap/multilinear.hpp"
#include "subknap/polytope.hpp"

namespace subknap {

/// The three stages of one rounding attempt.
struct RoundingOutcome {
  SolutionSet drawn;      // the raw draw D ~ y
  SolutionSet filtered;   // D if nearly feasible, empty otherwise
  SolutionSet fixed;      // feasible repair of the filtered set
  Feasibility drawClass = Feasibility::Feasible;
};

/// Draw D ~ y: element i joins independently with probability y_i.
/// Deterministic per seed.
inline SolutionSet sampleRound(const Instance& inst, const FractionalPoint& y, std::uint64_t seed) {
  if (y.size() != inst.n()) throw InputError("sampleRound: point has wrong length");
  Rng rng(seed);
  return SolutionSet::of(inst, sampleFromPoint(y.entries(), rng));
}

/// D if D is eps-nearly feasible, empty otherwise. The output is therefore
/// always eps-nearly feasible.
inline SolutionSet filterNearlyFeasible(const Instance& inst, const SolutionSet& d, double eps) {
  if (classifyCost(inst, d.cost, eps) == Feasibility::Infeasible) return SolutionSet::empty(inst);
  return d;
}

namespace detail {

/// Partition the members by descending cost in dimension r, closing a subset
/// once it reaches eps*budget; elements left over when the scan ends join
/// the last closed subset.
inline std::vector<IndexSet> partitionByCost(const Instance& inst, const IndexSet& members, int r,
                                             double eps) {
  std::vector<int> order(members);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ca = inst.cost(r, a), cb = inst.cost(r, b);
    if (ca != cb) return ca > cb;
    return a < b;
  });
  const double threshold = eps * inst.budget(r);
  std::vector<IndexSet> parts;
  IndexSet current;
  double currentCost = 0.0;
  for (int i : order) {
    current.push_back(i);
    currentCost += inst.cost(r, i);
    if (currentCost >= threshold) {
      parts.push_back(std::move(current));
      current.clear();
      currentCost = 0.0;
    }
  }
  if (!current.empty()) {
    if (parts.empty())
      parts.push_back(std::move(current));
    else
      for (int i : current) parts.back().push_back(i);
  }
  for (IndexSet& p : parts) std::sort(p.begin(), p.end());
  return parts;
}

inline IndexSet setMinus(const IndexSet& s, const IndexSet& sub) {
  IndexSet out;
  out.reserve(s.size());
  std::set_difference(s.begin(), s.end(), sub.begin(), sub.end(), std::back_inserter(out));
  return out;
}

} // namespace detail

/**
 * @brief Repair an eps-nearly feasible set of small elements into a feasible
 * subset.
 *
 * Dimensions are handled in ascending order. For a violated dimension the
 * members are partitioned into subsets of cost at least eps*budget each, and
 * among the subsets whose removal restores that dimension the one with the
 * smallest marginal value f(S) - f(S minus subset) is removed (ties to the
 * lowest subset index).
 */
inline SolutionSet fixNearlyFeasible(const Instance& inst, const SolutionSet& dPrime, double eps) {
  if (classifyCost(inst, dPrime.cost, eps) == Feasibility::Infeasible)
    throw InputError("fix: input set is not eps-nearly feasible");
  for (int i : dPrime.members)
    if (!isSmall(inst, i, eps))
      throw InputError("fix: element " + std::to_string(i) + " is not small");

  const SubmodularOracle& f = inst.oracle();
  IndexSet s = dPrime.members;
  for (int r = 0; r < inst.d(); ++r) {
    // one removal restores a dimension; the loop guards float edge cases
    for (int round = 0; round < inst.n() + 1 && !s.empty(); ++round) {
      if (costOfSet(inst, s)[r] <= inst.budget(r)) break;
      const std::vector<IndexSet> parts = detail::partitionByCost(inst, s, r, eps);
      int bestJ = -1;
      double bestMarginal = 0.0;
      const double fS = f.value(s);
      for (std::size_t j = 0; j < parts.size(); ++j) {
        const IndexSet rest = detail::setMinus(s, parts[j]);
        if (!(costOfSet(inst, rest)[r] <= inst.budget(r))) continue; // removal must restore r
        const double m = fS - f.value(rest);
        if (bestJ < 0 || m < bestMarginal) {
          bestJ = static_cast<int>(j);
          bestMarginal = m;
        }
      }
      if (bestJ < 0) {
        // no single subset restores the dimension (ulp-grade corner);
        // drop the costliest subset and rescan
        std::size_t heaviest = 0;
        double heaviestCost = -1.0;
        for (std::size_t j = 0; j < parts.size(); ++j) {
          double cj = 0.0;
          for (int i : parts[j]) cj += inst.cost(r, i);
          if (cj > heaviestCost) {
            heaviestCost = cj;
            heaviest = j;
          }
        }
        s = detail::setMinus(s, parts[heaviest]);
      } else {
        s = detail::setMinus(s, parts[bestJ]);
      }
    }
  }
  return SolutionSet::of(inst, s);
}

/// One draw -> filter -> fix chain.
inline RoundingOutcome roundOnce(const Instance& inst, const FractionalPoint& y, double eps,
                                 std::uint64_t seed) {
  RoundingOutcome out;
  out.drawn = sampleRound(inst, y, seed);
  out.drawClass = classifyCost(inst, out.drawn.cost, eps);
  out.filtered = filterNearlyFeasible(inst, out.drawn, eps);
  out.fixed = fixNearlyFeasible(inst, out.filtered, eps);
  return out;
}

/**
 * @brief Randomized rounding for instances whose support has no big
 * elements: best fixed set over `attempts` independent draws.
 *
 * attempts = 1 is the plain single-shot algorithm; more attempts only take
 * the max over independent repetitions. The result is always feasible.
 */
inline SolutionSet roundNoBig(const Instance& inst, const FractionalPoint& y, double eps,
                              std::uint64_t seed, int attempts = 16) {
  if (attempts < 1) throw InputError("roundNoBig: attempts must be >= 1");
  if (!contains(inst, y)) throw InputError("roundNoBig: point lies outside the polytope");
  for (int i = 0; i < inst.n(); ++i) // any positive probability counts as support here
    if (y[i] > 0.0 && !isSmall(inst, i, eps))
      throw InputError("roundNoBig: big element " + std::to_string(i) + " in the support");

  SolutionSet best;
  bool haveBest = false;
  for (int a = 0; a < attempts; ++a) {
    RoundingOutcome outcome = roundOnce(inst, y, eps, deriveSeed(seed, static_cast<std::uint64_t>(a)));
    if (!haveBest || outcome.fixed.value > best.value) {
      best = std::move(outcome.fixed);
      haveBest = true;
    }
  }
  return best;
}

} // namespace subknap
