/**
 * @file enumeration.hpp
 * @brief Residual instances and the guess-enumeration wrapper that turns the
 * no-big-elements rounder into the full randomized algorithm.
 */

#pragma once

#include <chrono>
#include <cmath>
#include <limits>

#include "subknap/report.hpp"
#include "subknap/rounding.hpp"

namespace subknap {

/// The guess budget the analysis prescribes: ceil(d / eps^4), saturating.
inline long long prescribedH(int d, double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw InputError("prescribedH: eps must lie in (0, 1)");
  const double h = std::ceil(static_cast<double>(d) / (eps * eps * eps * eps));
  if (h >= static_cast<double>(std::numeric_limits<long long>::max())) return std::numeric_limits<long long>::max();
  return static_cast<long long>(h);
}

/// Desk-scale default guess budget: the prescribed value capped at 3.
inline long long defaultH(int d, double eps) { return std::min<long long>(prescribedH(d, eps), 3); }

/**
 * @brief Sub-problem left after committing to a guessed set T.
 *
 * The residual budget is the base budget minus the cost of T. The residual
 * universe keeps T (at cost zero) plus every other element that is small
 * with respect to the residual budget, so the residual instance has no big
 * elements and any of its feasible solutions is feasible for the base.
 */
struct ResidualInstance {
  Instance problem;          // compacted instance in the base's normalized frame
  IndexSet guessed;          // T in base indices
  std::vector<int> toBase;   // residual index -> base index

  IndexSet lift(const IndexSet& members) const {
    IndexSet out;
    out.reserve(members.size());
    for (int i : members) out.push_back(toBase[i]);
    return out; // toBase ascending keeps the order sorted
  }
};

inline ResidualInstance residual(const Instance& base, const IndexSet& t, double eps) {
  detail::checkMembers(t, base.n());
  if (!(eps > 0.0) || !(eps < 1.0)) throw InputError("residual: eps must lie in (0, 1)");
  const Vec costT = costOfSet(base, t);
  Vec budget(base.d());
  for (int r = 0; r < base.d(); ++r) {
    if (!(costT[r] <= base.budget(r)))
      throw InputError("residual: guessed set exceeds budget in dimension " + std::to_string(r));
    budget[r] = base.budget(r) - costT[r];
  }

  const double e3 = eps * eps * eps;
  std::vector<int> toBase;
  std::size_t ti = 0;
  for (int i = 0; i < base.n(); ++i) {
    if (ti < t.size() && t[ti] == i) {
      toBase.push_back(i);
      ++ti;
      continue;
    }
    bool small = true;
    for (int r = 0; r < base.d(); ++r)
      if (!(base.cost(r, i) <= e3 * budget[r])) small = false;
    if (small) toBase.push_back(i);
  }

  const int m = static_cast<int>(toBase.size());
  std::vector<Vec> cost(base.d(), Vec(m, 0.0));
  ti = 0;
  for (int idx = 0; idx < m; ++idx) {
    const int i = toBase[idx];
    const bool inT = std::binary_search(t.begin(), t.end(), i);
    if (!inT)
      for (int r = 0; r < base.d(); ++r) cost[r][idx] = base.cost(r, i);
  }

  InstanceMeta meta = base.meta();
  auto oracle = std::make_shared<RemappedOracle>(base.oraclePtr(), toBase);
  ResidualInstance res{Instance::inFrame(std::move(cost), std::move(budget), std::move(oracle), std::move(meta)),
                       t, std::move(toBase)};
  return res;
}

/**
 * @brief Lexicographic iterator over guess sets: all T with |T| <= h and
 * cost(T) within budget. Starts at the empty set; supersets of infeasible
 * sets are pruned because costs are non-negative.
 */
class GuessSets {
public:
  GuessSets(const Instance& inst, long long h) : inst_(&inst), h_(h) {
    if (h < 0) throw InputError("guess sets: h must be >= 0");
  }

  /// Writes the next guess into t; returns false when exhausted.
  bool next(IndexSet& t) {
    if (!started_) {
      started_ = true;
      current_.clear();
      t = current_;
      return true; // the empty set is always first
    }
    // extend if allowed, otherwise advance the last element, backtracking as needed
    int candidate = current_.empty() ? 0 : current_.back() + 1;
    if (static_cast<long long>(current_.size()) == h_) {
      if (current_.empty()) return false;
      candidate = current_.back() + 1;
      current_.pop_back();
    }
    while (true) {
      if (candidate < inst_->n()) {
        current_.push_back(candidate);
        if (feasible()) {
          t = current_;
          return true;
        }
        current_.pop_back();
        ++candidate;
        continue;
      }
      if (current_.empty()) return false;
      candidate = current_.back() + 1;
      current_.pop_back();
    }
  }

  /// All guesses, materialized (tests and tiny h only).
  std::vector<IndexSet> collect() {
    std::vector<IndexSet> all;
    IndexSet t;
    while (next(t)) all.push_back(t);
    return all;
  }

private:
  bool feasible() const {
    const Vec c = costOfSet(*inst_, current_);
    for (int r = 0; r < inst_->d(); ++r)
      if (!(c[r] <= inst_->budget(r))) return false;
    return true;
  }

  const Instance* inst_;
  long long h_;
  IndexSet current_;
  bool started_ = false;
};

struct SolveResult {
  SolutionSet best;
  RunReport report;
};

namespace detail {

/// Content hash of a guess set; per-guess seeds derive from it so that the
/// same guess sees the same randomness regardless of enumeration order.
inline std::uint64_t guessHash(const IndexSet& t) {
  std::uint64_t h = 0x5eedULL;
  for (int i : t) h = splitMix64(h ^ static_cast<std::uint64_t>(i + 1));
  return h;
}

/// Best-candidate tracker implementing the deterministic tie-breaks:
/// larger value wins; on equal value the earlier guess wins, and within one
/// guess the lexicographically smaller member set wins.
struct BestTracker {
  SolutionSet best;
  long long guessOrdinal = -1;
  bool have = false;

  void consider(SolutionSet cand, long long ordinal) {
    if (!have || cand.value > best.value ||
        (cand.value == best.value && ordinal == guessOrdinal &&
         std::lexicographical_compare(cand.members.begin(), cand.members.end(), best.members.begin(),
                                      best.members.end()))) {
      best = std::move(cand);
      guessOrdinal = ordinal;
      have = true;
    }
  }
};

template <typename Fn>
[[noreturn]] void rethrowWithGuess(const IndexSet& t, Fn&& describe) {
  std::string ts = "{";
  for (std::size_t i = 0; i < t.size(); ++i) ts += (i ? "," : "") + std::to_string(t[i]);
  ts += "}";
  try {
    throw;
  } catch (const CapacityError& e) {
    throw CapacityError(describe() + " failed for guess T=" + ts + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(describe() + " failed for guess T=" + ts + ": " + e.what());
  }
}

} // namespace detail

/**
 * @brief The full randomized algorithm: enumerate guesses, solve the
 * continuous residual problem, round, and keep the best feasible outcome.
 *
 * Each feasible guess also competes as a bare solution, so the result value
 * is at least max f(T) over the enumerated guesses even for non-monotone
 * oracles. The returned set is always feasible for the base instance.
 */
inline SolveResult solveRandomized(const Instance& inst, const SolverRegistry& registry,
                                   const std::string& solverName, double eps, long long h,
                                   std::uint64_t seed, int attempts = 16) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw InputError("solve: eps must lie in (0, 1)");
  const ContinuousSolver& solver = registry.get(solverName);
  const auto start = std::chrono::steady_clock::now();

  detail::BestTracker tracker;
  tracker.consider(SolutionSet::empty(inst), -1);

  GuessSets guesses(inst, h);
  IndexSet t;
  long long ordinal = 0;
  while (guesses.next(t)) {
    const ResidualInstance res = residual(inst, t, eps);
    const std::uint64_t guessSeed = detail::guessHash(t);
    SolutionSet lifted;
    try {
      const FractionalPoint y = solver(res.problem, deriveSeed(seed, guessSeed));
      const SolutionSet rounded =
          roundNoBig(res.problem, y, eps, deriveSeed(seed, splitMix64(guessSeed)), attempts);
      lifted = SolutionSet::of(inst, res.lift(rounded.members));
    } catch (...) {
      detail::rethrowWithGuess(t, [&] { return "residual pipeline (solver '" + solverName + "')"; });
    }
    if (classifyCost(inst, lifted.cost, eps) == Feasibility::Feasible) tracker.consider(std::move(lifted), ordinal);
    tracker.consider(SolutionSet::of(inst, t), ordinal); // bare guess
    ++ordinal;
  }

  RunReport report;
  report.instance = inst.meta().name;
  report.algorithm = "randomized";
  report.solver = solverName;
  report.epsilon = eps;
  report.hEff = h;
  report.hPaper = prescribedH(inst.d(), eps);
  report.seed = seed;
  report.attempts = attempts;
  report.value = tracker.best.value;
  report.feasibility = feasibilityName(classifyCost(inst, tracker.best.cost, eps));
  report.wallMs =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return {std::move(tracker.best), std::move(report)};
}

} // namespace subknap
