/**
 * @file verify.hpp
 * @brief Randomized structural checks a user can run against any instance:
 * submodularity, monotonicity, the marginal inequalities, extension oracle
 * agreement, and rounding soundness.
 */

#pragma once

#include <string>

#include "subknap/bruteforce.hpp"
#include "subknap/polytope.hpp"
#include "subknap/rounding.hpp"

namespace subknap {

struct CheckResult {
  std::string name;
  bool pass = true;
  bool skipped = false;
  std::string detail;
};

namespace detail {

inline constexpr double kPropertyTol = 1e-9;

inline IndexSet randomSubset(int n, Rng& rng) {
  IndexSet s;
  for (int i = 0; i < n; ++i)
    if (rng.uniform01() < 0.5) s.push_back(i);
  return s;
}

inline IndexSet randomSubsetOf(const IndexSet& base, Rng& rng) {
  IndexSet s;
  for (int i : base)
    if (rng.uniform01() < 0.5) s.push_back(i);
  return s;
}

inline IndexSet unionOf(const IndexSet& a, const IndexSet& b) {
  IndexSet u;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  return u;
}

inline IndexSet intersectionOf(const IndexSet& a, const IndexSet& b) {
  IndexSet u;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  return u;
}

/// Split the members of s into `parts` disjoint groups (some may be empty).
inline std::vector<IndexSet> randomPartition(const IndexSet& s, int parts, Rng& rng) {
  std::vector<IndexSet> out(parts);
  for (int i : s) out[rng.below(static_cast<std::uint64_t>(parts))].push_back(i);
  return out;
}

} // namespace detail

/// Run the structural checks with `trials` random probes per check.
inline std::vector<CheckResult> verifyInstance(const Instance& inst, std::uint64_t seed, int trials = 2000) {
  if (trials < 1) throw InputError("verify: trials must be >= 1");
  const SubmodularOracle& f = inst.oracle();
  const int n = inst.n();
  std::vector<CheckResult> results;
  const auto add = [&](const std::string& name, bool pass, const std::string& detail, bool skipped = false) {
    results.push_back({name, pass, skipped, detail});
  };
  using detail::kPropertyTol;

  add("empty-set-value", f.value({}) >= 0.0, "f(empty) = " + formatG17(f.value({})));

  {
    Rng rng(deriveSeed(seed, 1));
    int bad = 0;
    for (int t = 0; t < trials; ++t) {
      const IndexSet s = detail::randomSubset(n, rng), u = detail::randomSubset(n, rng);
      if (f.value(s) + f.value(u) < f.value(detail::unionOf(s, u)) + f.value(detail::intersectionOf(s, u)) - kPropertyTol)
        ++bad;
    }
    add("submodularity", bad == 0, std::to_string(bad) + "/" + std::to_string(trials) + " violations");
  }

  if (f.monotone()) {
    Rng rng(deriveSeed(seed, 2));
    int bad = 0;
    for (int t = 0; t < trials; ++t) {
      const IndexSet big = detail::randomSubset(n, rng);
      const IndexSet small = detail::randomSubsetOf(big, rng);
      if (f.value(small) > f.value(big) + kPropertyTol) ++bad;
    }
    add("monotonicity", bad == 0, std::to_string(bad) + "/" + std::to_string(trials) + " violations");
  } else {
    add("monotonicity", true, "not declared monotone", true);
  }

  {
    Rng rng(deriveSeed(seed, 3));
    int bad = 0;
    for (int t = 0; t < trials; ++t) {
      const IndexSet s = detail::randomSubset(n, rng);
      const auto parts = detail::randomPartition(s, 2 + static_cast<int>(rng.below(3)), rng);
      double sum = 0.0;
      for (const auto& p : parts) sum += f.value(p);
      if (f.value(s) > sum + kPropertyTol) ++bad;
    }
    add("disjoint-union-subadditivity", bad == 0, std::to_string(bad) + "/" + std::to_string(trials) + " violations");
  }

  {
    Rng rng(deriveSeed(seed, 4));
    int bad = 0;
    for (int t = 0; t < trials; ++t) {
      const IndexSet t2 = detail::randomSubset(n, rng);
      const IndexSet t1 = detail::randomSubsetOf(t2, rng);
      IndexSet rest;
      for (int i = 0; i < n; ++i)
        if (!std::binary_search(t2.begin(), t2.end(), i)) rest.push_back(i);
      const IndexSet s = detail::randomSubsetOf(rest, rng);
      if (marginal(f, t2, s) > marginal(f, t1, s) + kPropertyTol) ++bad;
    }
    add("marginal-shrinks-with-context", bad == 0, std::to_string(bad) + "/" + std::to_string(trials) + " violations");
  }

  {
    Rng rng(deriveSeed(seed, 5));
    int bad = 0;
    for (int t = 0; t < trials; ++t) {
      const IndexSet s = detail::randomSubset(n, rng);
      const auto parts = detail::randomPartition(s, 2 + static_cast<int>(rng.below(3)), rng);
      double sum = 0.0;
      for (const auto& p : parts) sum += marginal(f, detail::setMinus(s, p), p);
      if (f.value(s) < sum - kPropertyTol) ++bad;
    }
    add("partition-marginal-bound", bad == 0, std::to_string(bad) + "/" + std::to_string(trials) + " violations");
  }

  {
    Rng rng(deriveSeed(seed, 6));
    int bad = 0;
    for (int t = 0; t < trials; ++t) {
      const IndexSet s = detail::randomSubset(n, rng);
      const double e1 = rng.uniform(0.05, 0.5), e2 = e1 + rng.uniform(0.01, 0.5);
      if (classify(inst, s, e1) == Feasibility::NearlyFeasible &&
          classify(inst, s, e2) == Feasibility::Infeasible)
        ++bad;
    }
    add("classify-eps-monotone", bad == 0, std::to_string(bad) + "/" + std::to_string(trials) + " violations");
  }

  {
    const bool closed = detail::closedFormExtension(f, Vec(n, 0.0)).has_value();
    if (closed && n <= kMaxExactSupport) {
      Rng rng(deriveSeed(seed, 7));
      double worst = 0.0;
      const int points = std::min(trials, 50);
      for (int t = 0; t < points; ++t) {
        Vec y(n);
        for (double& v : y) v = rng.uniform01();
        const FractionalPoint p(std::move(y));
        worst = std::max(worst, std::abs(*detail::closedFormExtension(f, p.entries()) - fExact(inst, p)));
      }
      add("extension-closed-vs-exact", worst <= 1e-12, "max deviation " + formatG17(worst));
    } else {
      add("extension-closed-vs-exact", true, closed ? "universe too large for the exact sum" : "no closed form", true);
    }
  }

  {
    if (n <= kMaxExactSupport) {
      Rng rng(deriveSeed(seed, 8));
      int bad = 0;
      const int points = 20;
      for (int t = 0; t < points; ++t) {
        Vec y(n);
        for (double& v : y) v = rng.uniform01();
        const FractionalPoint p(std::move(y));
        const Estimate est = fEstimate(inst, p, 4000, deriveSeed(seed, 100 + t));
        if (std::abs(est.mean - fExact(inst, p)) > 4.0 * est.stdError) ++bad;
      }
      add("estimator-within-4-stderr", bad <= 1, std::to_string(bad) + "/" + std::to_string(points) + " outside");
    } else {
      add("estimator-within-4-stderr", true, "universe too large for the exact sum", true);
    }
  }

  {
    Rng rng(deriveSeed(seed, 9));
    int bad = 0;
    const double eps = 0.2;
    for (int t = 0; t < std::min(trials, 500); ++t) {
      Vec y(n);
      for (double& v : y) v = rng.uniform01();
      detail::clampToPolytope(inst, y);
      const FractionalPoint p(std::move(y));
      const SolutionSet d = sampleRound(inst, p, rng.raw());
      const SolutionSet filtered = filterNearlyFeasible(inst, d, eps);
      if (classifyCost(inst, filtered.cost, eps) == Feasibility::Infeasible) ++bad;
    }
    add("filter-soundness", bad == 0, std::to_string(bad) + " unsound filter outputs");
  }

  return results;
}

} // namespace subknap
