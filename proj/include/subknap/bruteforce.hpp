/**
 * @file bruteforce.hpp
 * @brief Exact verification oracles: the integral optimum by subset
 * enumeration, and the exact distribution of the filtered rounding draw.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>

#include "subknap/instance.hpp"
#include "subknap/multilinear.hpp"

namespace subknap {

struct ExactResult {
  IndexSet optimumSet;
  double optimumValue = 0.0;
  std::uint64_t enumeratedCount = 0; // feasible subsets visited
  std::optional<std::map<double, std::uint64_t>> histogram;
};

inline constexpr int kMaxBruteforceUniverse = 22;

/**
 * @brief Exhaustive scan of all feasible subsets. Elements are explored in
 * decreasing max-dimension cost so infeasible prefixes prune early; a branch
 * is cut only when its cost already exceeds the budget beyond float noise,
 * and every reported set is verified with the canonical cost. Ties go to the
 * lexicographically smallest member set.
 */
inline ExactResult exactOpt(const Instance& inst, bool withHistogram = false) {
  const int n = inst.n();
  if (n > kMaxBruteforceUniverse)
    throw CapacityError("exactOpt: universe size " + std::to_string(n) + " exceeds " +
                        std::to_string(kMaxBruteforceUniverse));
  const SubmodularOracle& f = inst.oracle();

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    double ma = 0.0, mb = 0.0;
    for (int r = 0; r < inst.d(); ++r) {
      ma = std::max(ma, inst.cost(r, a));
      mb = std::max(mb, inst.cost(r, b));
    }
    if (ma != mb) return ma > mb;
    return a < b;
  });

  ExactResult result;
  if (withHistogram) result.histogram.emplace();
  bool have = false;
  IndexSet chosen;
  Vec cost(inst.d(), 0.0);

  const auto consider = [&](const IndexSet& membersUnsorted) {
    IndexSet members = membersUnsorted;
    std::sort(members.begin(), members.end());
    const Vec exact = costOfSet(inst, members);
    for (int r = 0; r < inst.d(); ++r)
      if (!(exact[r] <= inst.budget(r))) return;
    ++result.enumeratedCount;
    const double value = f.value(members);
    if (result.histogram) ++(*result.histogram)[value];
    if (!have || value > result.optimumValue ||
        (value == result.optimumValue &&
         std::lexicographical_compare(members.begin(), members.end(), result.optimumSet.begin(),
                                      result.optimumSet.end()))) {
      result.optimumSet = members;
      result.optimumValue = value;
      have = true;
    }
  };

  std::function<void(int)> scan = [&](int pos) {
    for (int r = 0; r < inst.d(); ++r)
      if (cost[r] > inst.budget(r) + 1e-12) return;
    if (pos == n) {
      consider(chosen);
      return;
    }
    scan(pos + 1); // exclude order[pos]
    const int e = order[pos];
    chosen.push_back(e);
    for (int r = 0; r < inst.d(); ++r) cost[r] += inst.cost(r, e);
    scan(pos + 1); // include order[pos]
    chosen.pop_back();
    for (int r = 0; r < inst.d(); ++r) cost[r] -= inst.cost(r, e);
  };
  scan(0);
  return result;
}

/// Exact law of one rounding draw D ~ y under the filter.
struct RoundingDistribution {
  double expectedRaw = 0.0;      // E[f(D)], no filter; equals F(y)
  double expectedFiltered = 0.0; // E[f(D')] with D' = D when nearly feasible, else empty
  double prInfeasible = 0.0;     // Pr[D is not eps-nearly feasible]
  double prRatioAbove = 0.0;     // Pr[max_r c_r(D)/L_r > ratioThreshold]
  double ratioThreshold = 2.0;
};

/**
 * @brief Exact sums over all realizations of D ~ y, weighted by their
 * product probabilities. Requires fractional support of at most 20.
 */
inline RoundingDistribution exactRoundingDistribution(const Instance& inst, const FractionalPoint& y,
                                                      double eps, double ratioThreshold = 2.0) {
  if (y.size() != inst.n()) throw InputError("exactRoundingDistribution: point has wrong length");
  const IndexSet& frac = y.fractionalSupport();
  const int s = static_cast<int>(frac.size());
  if (s > kMaxExactSupport)
    throw CapacityError("exactRoundingDistribution: fractional support " + std::to_string(s) +
                        " exceeds " + std::to_string(kMaxExactSupport));
  const IndexSet ones = y.onesSet();
  const SubmodularOracle& f = inst.oracle();

  RoundingDistribution dist;
  dist.ratioThreshold = ratioThreshold;
  IndexSet members;
  const std::uint32_t count = 1u << s;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    double prob = 1.0;
    for (int fi = 0; fi < s; ++fi)
      prob *= (mask & (1u << fi)) ? y[frac[fi]] : 1.0 - y[frac[fi]];
    if (prob == 0.0) continue;
    members.clear();
    std::size_t oi = 0;
    for (int fi = 0; fi < s; ++fi) {
      if (!(mask & (1u << fi))) continue;
      while (oi < ones.size() && ones[oi] < frac[fi]) members.push_back(ones[oi++]);
      members.push_back(frac[fi]);
    }
    while (oi < ones.size()) members.push_back(ones[oi++]);

    const double value = f.value(members);
    const Vec cost = costOfSet(inst, members);
    dist.expectedRaw += prob * value;
    if (classifyCost(inst, cost, eps) == Feasibility::Infeasible)
      dist.prInfeasible += prob;
    else
      dist.expectedFiltered += prob * value;
    double worst = 0.0;
    for (int r = 0; r < inst.d(); ++r) {
      if (inst.budget(r) > 0.0)
        worst = std::max(worst, cost[r] / inst.budget(r));
      else if (cost[r] > 0.0)
        worst = std::numeric_limits<double>::infinity();
    }
    if (worst > ratioThreshold) dist.prRatioAbove += prob;
  }
  return dist;
}

} // namespace subknap
