/**
 * @file derandomize.hpp
 * @brief Deterministic rounding: quantize costs, eliminate fractional
 * entries along pipage directions without losing extension value, then
 * enumerate the remaining realizations exhaustively.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "subknap/enumeration.hpp"
#include "subknap/multilinear.hpp"
#include "subknap/polytope.hpp"
#include "subknap/rounding.hpp"

namespace subknap {

/**
 * @brief Geometrically quantized costs for the fractional entries of a point.
 *
 * For a fractional entry i the cost c_r(i) maps to 0 when it is at most
 * base_r = eps*L_r/(2k), and otherwise to the largest base_r*(1+eps/2)^j not
 * exceeding it; integral entries keep their cost untouched. Entries sharing
 * the quantized tuple across all dimensions form one exchange class, keyed
 * here by the integer rung indices so equality is bit-stable.
 */
struct QuantizedCosts {
  std::vector<Vec> values;              // d x n quantized cost matrix
  std::vector<std::vector<int>> rung;   // d x n: kUntouched, kZeroRung, or j >= 0
  int k = 0;                            // fractional-entry count the ladder was built for

  static constexpr int kUntouched = std::numeric_limits<int>::min();
  static constexpr int kZeroRung = -1;

  /// Exchange-class key of element i: the rung tuple across dimensions.
  std::vector<int> classKey(int i) const {
    std::vector<int> key(rung.size());
    for (std::size_t r = 0; r < rung.size(); ++r) key[r] = rung[r][i];
    return key;
  }
};

inline QuantizedCosts quantize(const Instance& inst, const FractionalPoint& y, double eps) {
  if (y.size() != inst.n()) throw InputError("quantize: point has wrong length");
  if (!(eps > 0.0) || !(eps < 1.0)) throw InputError("quantize: eps must lie in (0, 1)");
  const IndexSet& frac = y.fractionalSupport();
  if (frac.empty()) throw InputError("quantize: point has no fractional entries");
  for (int i : frac)
    if (!isSmall(inst, i, eps))
      throw InputError("quantize: big element " + std::to_string(i) + " in the fractional support");

  QuantizedCosts q;
  q.k = static_cast<int>(frac.size());
  q.values.assign(inst.d(), Vec(inst.n(), 0.0));
  q.rung.assign(inst.d(), std::vector<int>(inst.n(), QuantizedCosts::kUntouched));
  for (int r = 0; r < inst.d(); ++r)
    for (int i = 0; i < inst.n(); ++i) q.values[r][i] = inst.cost(r, i);

  const double growth = 1.0 + eps / 2.0;
  for (int r = 0; r < inst.d(); ++r) {
    const double base = eps * inst.budget(r) / (2.0 * static_cast<double>(q.k));
    for (int i : frac) {
      const double c = inst.cost(r, i);
      if (c <= base) {
        q.values[r][i] = 0.0;
        q.rung[r][i] = QuantizedCosts::kZeroRung;
        continue;
      }
      // rung from the closed form, then nudged across float drift at joints
      int j = static_cast<int>(std::floor(std::log(c / base) / std::log(growth)));
      if (j < 0) j = 0;
      while (base * std::pow(growth, j + 1) <= c) ++j;
      while (j > 0 && base * std::pow(growth, j) > c) --j;
      q.values[r][i] = base * std::pow(growth, j);
      q.rung[r][i] = j;
    }
  }
  return q;
}

/// Record of one fractional-entry elimination pass.
struct ReductionTrace {
  struct Step {
    int i, j;          // mass moved toward i, away from j
    double delta;      // chosen endpoint shift
    double fBefore, fAfter;
  };
  std::vector<Step> steps;
  int finalFractionalCount = 0;
};

/// Evaluation policy for the extension during pipage. The default uses a
/// closed form when the oracle has one and exact summation otherwise; the
/// estimator path compares endpoints on common draws and widens the sample
/// size until the gap clears three standard errors (or the cap is reached,
/// in which case the upward endpoint is preferred).
struct PipageOptions {
  bool forceEstimator = false;
  long samples = 4096;
  long maxSamples = 65536;
  std::uint64_t seed = 0x9127e5;
};

namespace detail {

struct EndpointChoice {
  bool takePlus;
  double fCurrent, fPlus, fMinus;
};

/// Paired-draw comparison of the two pipage endpoints: each sample realizes
/// both endpoints (and the current point) on the same uniforms, so the value
/// difference is estimated with far less variance than two independent runs.
inline EndpointChoice compareEndpointsSampled(const Instance& inst, const FractionalPoint& current,
                                              const FractionalPoint& plus, const FractionalPoint& minus,
                                              const PipageOptions& opts, std::uint64_t stepSeed) {
  const SubmodularOracle& f = inst.oracle();
  const int n = inst.n();
  long m = opts.samples;
  for (int round = 0;; ++round) {
    Rng rng(deriveSeed(opts.seed, stepSeed * 97 + static_cast<std::uint64_t>(round)));
    double sumCur = 0.0, sumPlus = 0.0, sumMinus = 0.0, sumDiff = 0.0, sumDiffSq = 0.0;
    IndexSet dCur, dPlus, dMinus;
    for (long s = 0; s < m; ++s) {
      dCur.clear();
      dPlus.clear();
      dMinus.clear();
      for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        if (u < current[i]) dCur.push_back(i);
        if (u < plus[i]) dPlus.push_back(i);
        if (u < minus[i]) dMinus.push_back(i);
      }
      const double vp = f.value(dPlus), vm = f.value(dMinus);
      sumCur += f.value(dCur);
      sumPlus += vp;
      sumMinus += vm;
      const double diff = vp - vm;
      sumDiff += diff;
      sumDiffSq += diff * diff;
    }
    const double md = static_cast<double>(m);
    const double meanDiff = sumDiff / md;
    const double varDiff = std::max(0.0, (sumDiffSq - md * meanDiff * meanDiff) / (md - 1.0));
    const double se = std::sqrt(varDiff / md);
    const bool resolved = std::abs(meanDiff) >= 3.0 * se;
    if (resolved || m >= opts.maxSamples) {
      const bool takePlus = resolved ? meanDiff >= 0.0 : true; // unresolved prefers the upward shift
      return {takePlus, sumCur / md, sumPlus / md, sumMinus / md};
    }
    m = std::min(opts.maxSamples, m * 4);
  }
}

} // namespace detail

/**
 * @brief Eliminate fractional entries sharing an exchange class.
 *
 * While two fractional entries have equal quantized cost tuples, the pair
 * moves to the better endpoint of its pipage segment; convexity of F along
 * the segment guarantees no loss. The quantized cost of the point is
 * preserved exactly because the pair's quantized tuples are bit-equal. Ends
 * with at most one fractional entry per class.
 */
inline std::pair<FractionalPoint, ReductionTrace> pipageReduce(const Instance& inst, const FractionalPoint& y,
                                                               double eps, const PipageOptions& opts = {}) {
  ReductionTrace trace;
  if (y.isIntegral()) {
    trace.finalFractionalCount = 0;
    return {y, trace};
  }
  const QuantizedCosts q = quantize(inst, y, eps);

  std::map<std::vector<int>, IndexSet> classes;
  for (int i : y.fractionalSupport()) classes[q.classKey(i)].push_back(i);

  const bool haveClosed = detail::closedFormExtension(inst.oracle(), y.entries()).has_value();
  const auto exactEval = [&](const FractionalPoint& p) {
    if (auto closed = detail::closedFormExtension(inst.oracle(), p.entries())) return *closed;
    return fExact(inst, p);
  };

  FractionalPoint current = y;
  double fCurrentExact = std::numeric_limits<double>::quiet_NaN(); // filled on first exact step
  std::uint64_t stepIdx = 0;
  while (true) {
    // largest class with at least two fractional entries; map order breaks ties
    const IndexSet* pick = nullptr;
    for (const auto& [key, members] : classes)
      if (members.size() >= 2 && (!pick || members.size() > pick->size())) pick = &members;
    if (!pick) break;

    const int i = (*pick)[0], j = (*pick)[1]; // two lowest-indexed entries
    const auto [dMinus, dPlus] = deltaBounds(current, i, j);
    const FractionalPoint plus = pipagePoint(current, i, j, dPlus);
    const FractionalPoint minus = pipagePoint(current, i, j, dMinus);

    const bool sampled =
        opts.forceEstimator ||
        (!haveClosed && static_cast<int>(current.fractionalSupport().size()) > kMaxExactSupport);

    ReductionTrace::Step step;
    step.i = i;
    step.j = j;
    bool takePlus;
    double fPlus, fMinus;
    if (sampled) {
      const auto choice = detail::compareEndpointsSampled(inst, current, plus, minus, opts, stepIdx);
      takePlus = choice.takePlus;
      fPlus = choice.fPlus;
      fMinus = choice.fMinus;
      step.fBefore = choice.fCurrent;
      fCurrentExact = std::numeric_limits<double>::quiet_NaN();
    } else {
      fPlus = exactEval(plus);
      fMinus = exactEval(minus);
      takePlus = fPlus >= fMinus;
      if (std::isnan(fCurrentExact)) fCurrentExact = exactEval(current);
      step.fBefore = fCurrentExact;
      fCurrentExact = takePlus ? fPlus : fMinus; // the chosen endpoint is the next current
    }
    step.delta = takePlus ? dPlus : dMinus;
    step.fAfter = takePlus ? fPlus : fMinus;
    current = takePlus ? plus : minus;
    trace.steps.push_back(step);
    ++stepIdx;

    // entries that became integral leave their class
    for (auto it = classes.begin(); it != classes.end();) {
      IndexSet& members = it->second;
      members.erase(std::remove_if(members.begin(), members.end(),
                                   [&](int e) { return isIntegralValue(current[e]); }),
                    members.end());
      it = members.empty() ? classes.erase(it) : std::next(it);
    }
  }
  trace.finalFractionalCount = static_cast<int>(current.fractionalSupport().size());
  return {std::move(current), trace};
}

/// Result of the two-pass reduction.
struct DoubleReduceResult {
  FractionalPoint point;
  int fracBefore = 0, fracMiddle = 0, fracAfter = 0;
  ReductionTrace firstTrace, secondTrace;
};

/**
 * @brief Two reduction passes: the first built for the input support size,
 * the second re-quantized for the smaller survivor count. Extension value
 * never decreases; the real cost inflates by at most (1+eps)^2.
 */
inline DoubleReduceResult doubleReduce(const Instance& inst, const FractionalPoint& y, double eps,
                                       const PipageOptions& opts = {}) {
  DoubleReduceResult out;
  out.point = y;
  out.fracBefore = static_cast<int>(y.fractionalSupport().size());
  auto [mid, t1] = pipageReduce(inst, y, eps, opts);
  out.fracMiddle = t1.finalFractionalCount;
  out.firstTrace = std::move(t1);
  auto [fin, t2] = pipageReduce(inst, mid, eps, opts);
  out.fracAfter = t2.finalFractionalCount;
  out.secondTrace = std::move(t2);
  out.point = std::move(fin);
  return out;
}

/// Iterates the realizations of D ~ y: the integral-one entries joined with
/// every subset of the fractional support, in binary-counter order.
class RealizationIter {
public:
  static constexpr int kMaxSupportBits = 25;

  explicit RealizationIter(const FractionalPoint& y)
      : ones_(y.onesSet()), frac_(y.fractionalSupport()) {
    if (frac_.size() > static_cast<std::size_t>(kMaxSupportBits))
      throw CapacityError("realizations: fractional support " + std::to_string(frac_.size()) +
                          " exceeds 2^" + std::to_string(kMaxSupportBits) +
                          " realizations; increase eps or use the randomized path");
    count_ = std::uint64_t{1} << frac_.size();
  }

  std::uint64_t count() const { return count_; }

  bool next(IndexSet& out) {
    if (counter_ >= count_) return false;
    out.clear();
    std::size_t oi = 0;
    for (std::size_t fi = 0; fi < frac_.size(); ++fi) {
      if (!(counter_ & (std::uint64_t{1} << fi))) continue;
      while (oi < ones_.size() && ones_[oi] < frac_[fi]) out.push_back(ones_[oi++]);
      out.push_back(frac_[fi]);
    }
    while (oi < ones_.size()) out.push_back(ones_[oi++]);
    ++counter_;
    return true;
  }

private:
  IndexSet ones_, frac_;
  std::uint64_t count_ = 0, counter_ = 0;
};

inline RealizationIter enumerateRealizations(const FractionalPoint& y) { return RealizationIter(y); }

/**
 * @brief Deterministic rounding for instances with no big elements in the
 * support of y.
 *
 * Scales y by (1+eps)^-2 so the reduction's cost inflation lands back inside
 * the polytope, reduces the fractional support, then enumerates every
 * realization, repairing the nearly feasible ones. Returns the best feasible
 * set found (the empty set when nothing survives). Identical inputs give
 * identical outputs.
 */
inline SolutionSet roundDeterministic(const Instance& inst, const FractionalPoint& y, double eps,
                                      const PipageOptions& opts = {}, DoubleReduceResult* reductionOut = nullptr) {
  if (!contains(inst, y)) throw InputError("roundDeterministic: point lies outside the polytope");
  for (int i = 0; i < inst.n(); ++i)
    if (y[i] > 0.0 && !isSmall(inst, i, eps))
      throw InputError("roundDeterministic: big element " + std::to_string(i) + " in the support");

  if (y.isIntegral()) {
    // an integral point is its own only realization; shrinking it first
    // would merely lose mass
    if (reductionOut) *reductionOut = DoubleReduceResult{y, 0, 0, 0, {}, {}};
    return SolutionSet::of(inst, y.onesSet());
  }

  const double shrink = std::pow(1.0 + eps, -2.0);
  Vec scaled = y.entries();
  for (double& v : scaled) v *= shrink;
  DoubleReduceResult reduced = doubleReduce(inst, FractionalPoint(std::move(scaled)), eps, opts);

  SolutionSet best = SolutionSet::empty(inst);
  bool have = false;
  RealizationIter realizations(reduced.point);
  IndexSet d;
  while (realizations.next(d)) {
    const Vec cost = costOfSet(inst, d);
    if (classifyCost(inst, cost, eps) == Feasibility::Infeasible) continue;
    SolutionSet candidate = fixNearlyFeasible(inst, SolutionSet{d, cost, inst.oracle().value(d)}, eps);
    if (!have || candidate.value > best.value) {
      best = std::move(candidate);
      have = true;
    }
  }
  if (reductionOut) *reductionOut = std::move(reduced);
  return best;
}

/**
 * @brief The full deterministic algorithm: the guess-enumeration loop with
 * deterministic rounding in place of sampling. End-to-end deterministic
 * whenever the continuous solver is (any seeded solver runs at a fixed
 * derived seed).
 */
inline SolveResult solveDeterministic(const Instance& inst, const SolverRegistry& registry,
                                      const std::string& solverName, double eps, long long h,
                                      const PipageOptions& opts = {}) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw InputError("solve: eps must lie in (0, 1)");
  const ContinuousSolver& solver = registry.get(solverName);
  const auto start = std::chrono::steady_clock::now();

  detail::BestTracker tracker;
  tracker.consider(SolutionSet::empty(inst), -1);
  int fracBefore = -1, fracAfter = -1;

  GuessSets guesses(inst, h);
  IndexSet t;
  long long ordinal = 0;
  while (guesses.next(t)) {
    const ResidualInstance res = residual(inst, t, eps);
    SolutionSet lifted;
    DoubleReduceResult reduction;
    try {
      const FractionalPoint y = solver(res.problem, deriveSeed(0, detail::guessHash(t)));
      const SolutionSet rounded = roundDeterministic(res.problem, y, eps, opts, &reduction);
      lifted = SolutionSet::of(inst, res.lift(rounded.members));
    } catch (...) {
      detail::rethrowWithGuess(t, [&] { return "deterministic pipeline (solver '" + solverName + "')"; });
    }
    if (classifyCost(inst, lifted.cost, eps) == Feasibility::Feasible) tracker.consider(std::move(lifted), ordinal);
    tracker.consider(SolutionSet::of(inst, t), ordinal);
    if (tracker.guessOrdinal == ordinal || fracBefore < 0) {
      fracBefore = reduction.fracBefore;
      fracAfter = reduction.fracAfter;
    }
    ++ordinal;
  }

  RunReport report;
  report.instance = inst.meta().name;
  report.algorithm = "deterministic";
  report.solver = solverName;
  report.epsilon = eps;
  report.hEff = h;
  report.hPaper = prescribedH(inst.d(), eps);
  report.seed = 0;
  report.attempts = 1;
  report.value = tracker.best.value;
  report.feasibility = feasibilityName(classifyCost(inst, tracker.best.cost, eps));
  report.fracBefore = fracBefore;
  report.fracAfter = fracAfter;
  report.wallMs =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return {std::move(tracker.best), std::move(report)};
}

} // namespace subknap
