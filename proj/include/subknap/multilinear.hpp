/**
 * @file multilinear.hpp
 * @brief The extension by expectation F(y) = E[f(R)], R containing each
 * element i independently with probability y_i.
 *
 * Three evaluators are provided: exact summation over the fractional
 * support, a closed form for coverage oracles, and a seeded Monte Carlo
 * estimator. Sampling draws one uniform per element per sample, in index
 * order, from a single generator stream, so that every randomized result is
 * reproducible from its seed.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

#include "subknap/instance.hpp"
#include "subknap/random.hpp"

namespace subknap {

/// Entries closer than this to 0 or 1 count as integral. Pipage endpoints
/// produced by floating arithmetic must register as integral.
inline constexpr double kIntegralTol = 1e-12;

inline bool isIntegralValue(double v) { return v <= kIntegralTol || v >= 1.0 - kIntegralTol; }

/// A point of [0,1]^n with its fractional support cached.
class FractionalPoint {
public:
  FractionalPoint() = default; // empty point over the empty universe

  explicit FractionalPoint(Vec entries) : entries_(std::move(entries)) {
    for (double v : entries_)
      if (!(v >= 0.0) || !(v <= 1.0)) throw InputError("fractional point: entries must lie in [0, 1]");
    for (int i = 0; i < size(); ++i)
      if (!isIntegralValue(entries_[i])) fractional_.push_back(i);
  }

  int size() const { return static_cast<int>(entries_.size()); }
  double operator[](int i) const { return entries_[i]; }
  const Vec& entries() const { return entries_; }

  /// Indices with an entry strictly between 0 and 1 (under the tolerance).
  const IndexSet& fractionalSupport() const { return fractional_; }

  /// Indices with an entry equal to 1 (under the tolerance).
  IndexSet onesSet() const {
    IndexSet ones;
    for (int i = 0; i < size(); ++i)
      if (entries_[i] >= 1.0 - kIntegralTol) ones.push_back(i);
    return ones;
  }

  /// Indices with a nonzero entry: fractional support plus the ones.
  IndexSet support() const {
    IndexSet s;
    for (int i = 0; i < size(); ++i)
      if (entries_[i] > kIntegralTol) s.push_back(i);
    return s;
  }

  bool isIntegral() const { return fractional_.empty(); }

  static FractionalPoint zeros(int n) { return FractionalPoint(Vec(n, 0.0)); }

  static FractionalPoint indicator(int n, const IndexSet& members) {
    Vec y(n, 0.0);
    for (int i : members) {
      if (i < 0 || i >= n) throw InputError("indicator: index out of range");
      y[i] = 1.0;
    }
    return FractionalPoint(std::move(y));
  }

private:
  Vec entries_;
  IndexSet fractional_;
};

/// Monte Carlo estimate with its standard error.
struct Estimate {
  double mean = 0.0;
  double stdError = 0.0;
  long samples = 0;
};

inline constexpr int kMaxExactSupport = 20;

namespace detail {

/// Exact F by summing f over all subsets of the fractional support with the
/// integral-one entries fixed in. Requires at most kMaxExactSupport
/// fractional entries.
inline double exactExtension(const SubmodularOracle& f, const FractionalPoint& y) {
  const IndexSet& frac = y.fractionalSupport();
  const int s = static_cast<int>(frac.size());
  if (s > kMaxExactSupport)
    throw CapacityError("exact extension: fractional support " + std::to_string(s) + " exceeds " +
                        std::to_string(kMaxExactSupport));
  const IndexSet ones = y.onesSet();

  double total = 0.0;
  const std::uint32_t count = 1u << s;
  IndexSet members;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    double prob = 1.0;
    for (int fi = 0; fi < s; ++fi)
      prob *= (mask & (1u << fi)) ? y[frac[fi]] : 1.0 - y[frac[fi]];
    if (prob == 0.0) continue;
    // merge ones with the selected fractional indices, both sorted
    members.clear();
    std::size_t oi = 0;
    for (int fi = 0; fi < s; ++fi) {
      if (!(mask & (1u << fi))) continue;
      while (oi < ones.size() && ones[oi] < frac[fi]) members.push_back(ones[oi++]);
      members.push_back(frac[fi]);
    }
    while (oi < ones.size()) members.push_back(ones[oi++]);
    total += prob * f.value(members);
  }
  return total;
}

/// Closed-form extension value where one exists for the oracle type:
/// coverage and cut factor over items/edges, modular is linear, and a
/// remapped oracle lifts the point into its base universe. Tables and
/// unrecognized oracle implementations fall back to exact summation.
inline std::optional<double> closedFormExtension(const SubmodularOracle& f, const Vec& y) {
  if (const auto* cov = dynamic_cast<const CoverageOracle*>(&f)) {
    Vec missProb(cov->profits().size(), 1.0);
    for (std::size_t s = 0; s < cov->sets().size(); ++s)
      for (int v : cov->sets()[s]) missProb[v] *= 1.0 - y[s];
    double total = 0.0;
    for (std::size_t v = 0; v < cov->profits().size(); ++v)
      total += cov->profits()[v] * (1.0 - missProb[v]);
    return total;
  }
  if (const auto* cut = dynamic_cast<const CutOracle*>(&f)) {
    double total = 0.0;
    for (const auto& e : cut->edges()) {
      double cross = y[e.u] * (1.0 - y[e.v]);
      if (!cut->directed()) cross += y[e.v] * (1.0 - y[e.u]);
      total += e.w * cross;
    }
    return total;
  }
  if (const auto* mod = dynamic_cast<const ModularOracle*>(&f)) {
    double total = 0.0;
    for (std::size_t i = 0; i < mod->weights().size(); ++i) total += mod->weights()[i] * y[i];
    return total;
  }
  if (const auto* rm = dynamic_cast<const RemappedOracle*>(&f)) {
    Vec lifted(rm->base()->universeSize(), 0.0);
    for (std::size_t i = 0; i < rm->toBase().size(); ++i) lifted[rm->toBase()[i]] = y[i];
    return closedFormExtension(*rm->base(), lifted);
  }
  return std::nullopt;
}

} // namespace detail

/**
 * @brief Exact F(y) by full summation over the fractional support, with
 * integral entries fixed. Requires at most 20 fractional entries.
 */
inline double fExact(const Instance& inst, const FractionalPoint& y) {
  if (y.size() != inst.n()) throw InputError("fExact: point has wrong length");
  return detail::exactExtension(inst.oracle(), y);
}

/**
 * @brief Closed-form F for coverage oracles:
 * F(y) = sum_v p_v * (1 - prod over sets s covering v of (1 - y_s)).
 * Works at any universe size.
 */
inline double fCoverageClosed(const Instance& inst, const FractionalPoint& y) {
  if (!dynamic_cast<const CoverageOracle*>(&inst.oracle()))
    throw InputError("fCoverageClosed: oracle kind is not coverage");
  if (y.size() != inst.n()) throw InputError("fCoverageClosed: point has wrong length");
  return *detail::closedFormExtension(inst.oracle(), y.entries());
}

/**
 * @brief F(y) through the best exact evaluator available: a closed form when
 * the oracle kind has one, full summation otherwise (throws CapacityError on
 * oversized fractional support).
 */
inline double extensionValue(const Instance& inst, const FractionalPoint& y) {
  if (y.size() != inst.n()) throw InputError("extensionValue: point has wrong length");
  if (auto closed = detail::closedFormExtension(inst.oracle(), y.entries())) return *closed;
  return detail::exactExtension(inst.oracle(), y);
}

/// One draw R ~ y: element i joins iff the i-th uniform is below y_i.
inline IndexSet sampleFromPoint(const Vec& y, Rng& rng) {
  IndexSet r;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (rng.uniform01() < y[i]) r.push_back(static_cast<int>(i));
  return r;
}

/**
 * @brief Monte Carlo estimate of F(y) from independent draws R_k ~ y.
 *
 * Deterministic given (seed, samples): same inputs reproduce the estimate
 * bit for bit. stdError is the sample standard deviation over sqrt(samples).
 */
inline Estimate fEstimate(const Instance& inst, const FractionalPoint& y, long samples, std::uint64_t seed) {
  if (y.size() != inst.n()) throw InputError("fEstimate: point has wrong length");
  if (samples < 2) throw InputError("fEstimate: need at least 2 samples");
  const SubmodularOracle& f = inst.oracle();
  Rng rng(seed);
  Vec vals(static_cast<std::size_t>(samples));
  double sum = 0.0;
  for (long k = 0; k < samples; ++k) {
    const double v = f.value(sampleFromPoint(y.entries(), rng));
    vals[static_cast<std::size_t>(k)] = v;
    sum += v;
  }
  Estimate est;
  est.samples = samples;
  est.mean = sum / static_cast<double>(samples);
  double ss = 0.0;
  for (double v : vals) ss += (v - est.mean) * (v - est.mean);
  const double variance = ss / static_cast<double>(samples - 1);
  est.stdError = std::sqrt(variance / static_cast<double>(samples));
  return est;
}

/**
 * @brief Feasible shift range for moving mass from entry j to entry i.
 * @return (deltaMinus, deltaPlus): at each endpoint at least one of the two
 * entries becomes integral.
 */
inline std::pair<double, double> deltaBounds(const FractionalPoint& y, int i, int j) {
  if (i == j) throw InputError("deltaBounds: indices must differ");
  if (i < 0 || j < 0 || i >= y.size() || j >= y.size()) throw InputError("deltaBounds: index out of range");
  const double plus = std::min(1.0 - y[i], y[j]);
  const double minus = -std::min(y[i], 1.0 - y[j]);
  return {minus, plus};
}

/**
 * @brief The point y + delta*e_i - delta*e_j.
 *
 * When delta hits an endpoint of the feasible range the binding entries are
 * snapped to exact 0/1 and the pair sum y_i + y_j is preserved exactly.
 */
inline FractionalPoint pipagePoint(const FractionalPoint& y, int i, int j, double delta) {
  const auto [minus, plus] = deltaBounds(y, i, j);
  if (!(delta >= minus) || !(delta <= plus))
    throw InputError("pipagePoint: delta outside feasible interval");
  Vec e = y.entries();
  const double s = y[i] + y[j];
  if (delta == plus) {
    if (s <= 1.0) {
      e[i] = s;
      e[j] = 0.0;
    } else {
      e[i] = 1.0;
      e[j] = s - 1.0;
    }
  } else if (delta == minus) {
    if (s <= 1.0) {
      e[i] = 0.0;
      e[j] = s;
    } else {
      e[i] = s - 1.0;
      e[j] = 1.0;
    }
  } else {
    e[i] = y[i] + delta;
    e[j] = y[j] - delta;
  }
  return FractionalPoint(std::move(e));
}

} // namespace subknap
