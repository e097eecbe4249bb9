/**
 * @file oracle.hpp
 * @brief Submodular set-function oracles over a universe {0..n-1}.
 *
 * Four concrete kinds are provided: coverage of a bipartite graph with item
 * profits, weighted graph cuts (directed or undirected), modular (additive)
 * functions, and explicit value tables for small universes. A remapping
 * adapter restricts an oracle to a sub-universe.
 *
 * All oracles are immutable after construction and value() is pure, so a
 * single oracle may be shared freely across threads.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "subknap/errors.hpp"
#include "subknap/random.hpp"

namespace subknap {

using IndexSet = std::vector<int>; // sorted ascending, no duplicates
using Vec = std::vector<double>;

enum class OracleKind { Coverage, Cut, Modular, Table, Remapped };

inline std::string kindName(OracleKind k) {
  switch (k) {
  case OracleKind::Coverage: return "coverage";
  case OracleKind::Cut: return "cut";
  case OracleKind::Modular: return "modular";
  case OracleKind::Table: return "table";
  case OracleKind::Remapped: return "remapped";
  }
  return "?";
}

/// Value oracle for a non-negative submodular set function.
class SubmodularOracle {
public:
  virtual ~SubmodularOracle() = default;

  /// f(S) for a sorted member list. Members must lie in [0, universeSize()).
  virtual double value(const IndexSet& members) const = 0;

  virtual int universeSize() const = 0;

  /// Declared monotonicity: f(S) <= f(T) whenever S is a subset of T.
  virtual bool monotone() const = 0;

  virtual OracleKind kind() const = 0;
};

using OraclePtr = std::shared_ptr<const SubmodularOracle>;

namespace detail {

inline void checkMembers(const IndexSet& members, int n) {
  int prev = -1;
  for (int i : members) {
    if (i < 0 || i >= n) throw InputError("oracle: element index " + std::to_string(i) + " out of range");
    if (i <= prev) throw InputError("oracle: member list must be sorted and duplicate-free");
    prev = i;
  }
}

} // namespace detail

/**
 * @brief Coverage function on a bipartite graph.
 *
 * Universe elements are sets; f(S) is the total profit of items adjacent to
 * any set in S. Monotone and non-negative, f(empty) = 0.
 */
class CoverageOracle final : public SubmodularOracle {
public:
  CoverageOracle(std::vector<std::vector<int>> sets, Vec profits)
      : sets_(std::move(sets)), profits_(std::move(profits)) {
    for (double p : profits_)
      if (!(p >= 0.0)) throw InputError("coverage: profits must be non-negative");
    for (const auto& adj : sets_)
      for (int v : adj)
        if (v < 0 || v >= static_cast<int>(profits_.size()))
          throw InputError("coverage: item index out of range");
  }

  double value(const IndexSet& members) const override {
    detail::checkMembers(members, universeSize());
    std::vector<char> covered(profits_.size(), 0);
    double total = 0.0;
    for (int s : members) {
      for (int v : sets_[s]) {
        if (!covered[v]) {
          covered[v] = 1;
          total += profits_[v];
        }
      }
    }
    return total;
  }

  int universeSize() const override { return static_cast<int>(sets_.size()); }
  bool monotone() const override { return true; }
  OracleKind kind() const override { return OracleKind::Coverage; }

  const std::vector<std::vector<int>>& sets() const { return sets_; }
  const Vec& profits() const { return profits_; }

private:
  std::vector<std::vector<int>> sets_;
  Vec profits_;
};

/**
 * @brief Cut function of a weighted graph.
 *
 * f(S) is the total weight of edges leaving S: for undirected graphs edges
 * with exactly one endpoint in S, for directed graphs edges from S to its
 * complement. Non-negative, generally non-monotone, f(empty) = 0.
 */
class CutOracle final : public SubmodularOracle {
public:
  struct Edge {
    int u, v;
    double w;
  };

  CutOracle(int numVertices, std::vector<Edge> edges, bool directed)
      : n_(numVertices), edges_(std::move(edges)), directed_(directed) {
    if (n_ < 0) throw InputError("cut: negative vertex count");
    for (const Edge& e : edges_) {
      if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
        throw InputError("cut: edge endpoint out of range");
      if (e.u == e.v) throw InputError("cut: self-loops are not allowed");
      if (!(e.w >= 0.0)) throw InputError("cut: edge weights must be non-negative");
    }
  }

  double value(const IndexSet& members) const override {
    detail::checkMembers(members, n_);
    std::vector<char> in(n_, 0);
    for (int i : members) in[i] = 1;
    double total = 0.0;
    for (const Edge& e : edges_) {
      bool crosses = directed_ ? (in[e.u] && !in[e.v]) : (in[e.u] != in[e.v]);
      if (crosses) total += e.w;
    }
    return total;
  }

  int universeSize() const override { return n_; }
  bool monotone() const override { return false; }
  OracleKind kind() const override { return OracleKind::Cut; }

  const std::vector<Edge>& edges() const { return edges_; }
  bool directed() const { return directed_; }

private:
  int n_;
  std::vector<Edge> edges_;
  bool directed_;
};

/// Additive function f(S) = sum of per-element weights. Weights must be >= 0.
class ModularOracle final : public SubmodularOracle {
public:
  explicit ModularOracle(Vec weights) : weights_(std::move(weights)) {
    for (double w : weights_)
      if (!(w >= 0.0)) throw InputError("modular: weights must be non-negative");
  }

  double value(const IndexSet& members) const override {
    detail::checkMembers(members, universeSize());
    double total = 0.0;
    for (int i : members) total += weights_[i];
    return total;
  }

  int universeSize() const override { return static_cast<int>(weights_.size()); }
  bool monotone() const override { return true; }
  OracleKind kind() const override { return OracleKind::Modular; }

  const Vec& weights() const { return weights_; }

private:
  Vec weights_;
};

/**
 * @brief Explicit value table over all subsets of a universe with n <= 20.
 *
 * values[mask] is f of the set whose members are the set bits of mask.
 * Values must be non-negative. When declared monotone the table is verified:
 * exhaustively for n <= 12, by sampling otherwise.
 */
class TableOracle final : public SubmodularOracle {
public:
  static constexpr int kMaxUniverse = 20;

  TableOracle(int n, Vec values, bool monotone) : n_(n), values_(std::move(values)), monotone_(monotone) {
    if (n_ < 0 || n_ > kMaxUniverse)
      throw InputError("table: universe size must be in [0, " + std::to_string(kMaxUniverse) + "]");
    if (values_.size() != (std::size_t{1} << n_))
      throw InputError("table: values size must be 2^n");
    for (double v : values_)
      if (!(v >= 0.0)) throw InputError("table: values must be non-negative");
    if (monotone_) verifyMonotone();
  }

  double value(const IndexSet& members) const override {
    detail::checkMembers(members, n_);
    std::uint32_t mask = 0;
    for (int i : members) mask |= (1u << i);
    return values_[mask];
  }

  double valueMask(std::uint32_t mask) const { return values_[mask]; }

  int universeSize() const override { return n_; }
  bool monotone() const override { return monotone_; }
  OracleKind kind() const override { return OracleKind::Table; }

  const Vec& values() const { return values_; }

private:
  void verifyMonotone() const {
    const std::uint32_t full = 1u << n_;
    if (n_ <= 12) {
      for (std::uint32_t mask = 0; mask < full; ++mask)
        for (int i = 0; i < n_; ++i)
          if (!(mask & (1u << i)) && values_[mask | (1u << i)] < values_[mask])
            throw InputError("table: declared monotone but f decreases when adding element " + std::to_string(i));
    } else {
      Rng rng(0x7ab1e5eedULL);
      for (int trial = 0; trial < 20000; ++trial) {
        std::uint32_t mask = static_cast<std::uint32_t>(rng.raw()) & (full - 1);
        int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_)));
        if (!(mask & (1u << i)) && values_[mask | (1u << i)] < values_[mask])
          throw InputError("table: declared monotone but a sampled pair decreases");
      }
    }
  }

  int n_;
  Vec values_;
  bool monotone_;
};

/// View of a base oracle restricted to a sub-universe. Element i of the view
/// is element toBase[i] of the base oracle; f is evaluated on mapped members.
class RemappedOracle final : public SubmodularOracle {
public:
  RemappedOracle(OraclePtr base, std::vector<int> toBase) : base_(std::move(base)), toBase_(std::move(toBase)) {
    for (int b : toBase_)
      if (b < 0 || b >= base_->universeSize()) throw InputError("remapped: base index out of range");
  }

  double value(const IndexSet& members) const override {
    detail::checkMembers(members, universeSize());
    IndexSet mapped;
    mapped.reserve(members.size());
    for (int i : members) mapped.push_back(toBase_[i]);
    std::sort(mapped.begin(), mapped.end());
    return base_->value(mapped);
  }

  int universeSize() const override { return static_cast<int>(toBase_.size()); }
  bool monotone() const override { return base_->monotone(); }
  OracleKind kind() const override { return OracleKind::Remapped; }

  const OraclePtr& base() const { return base_; }
  const std::vector<int>& toBase() const { return toBase_; }

private:
  OraclePtr base_;
  std::vector<int> toBase_;
};

/// f(S); validates the member list.
inline double evalSet(const SubmodularOracle& f, const IndexSet& members) { return f.value(members); }

/// Marginal value of S on top of T: f(S u T) - f(T). May be negative for
/// non-monotone oracles.
inline double marginal(const SubmodularOracle& f, const IndexSet& t, const IndexSet& s) {
  detail::checkMembers(s, f.universeSize());
  detail::checkMembers(t, f.universeSize());
  IndexSet unioned;
  unioned.reserve(s.size() + t.size());
  std::set_union(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(unioned));
  return f.value(unioned) - f.value(t);
}

} // namespace subknap
