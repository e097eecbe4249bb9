/**
 * @file instance.hpp
 * @brief Problem instances: universe, d-dimensional costs, budgets, oracle.
 *
 * Construction normalizes every budget to 1 by dividing the matching cost
 * row, so all thresholds used by the algorithms are scale-free. The original
 * costs and budgets are retained for serialization. Feasibility comparisons
 * are plain inclusive <= on doubles throughout; every cost of a set is
 * computed by one canonical routine (ascending index order) so the same set
 * always yields the same cost vector.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subknap/errors.hpp"
#include "subknap/oracle.hpp"

namespace subknap {

/// Optional provenance carried through from instance files and generators.
struct InstanceMeta {
  std::string name;
  std::optional<std::uint64_t> seed;
  std::string generator;
};

class Instance {
public:
  /**
   * @brief Build an instance from raw costs and budgets.
   * @param cost d rows of n non-negative reals; cost[r][i] is the r-th cost of element i
   * @param budget d positive budget entries
   * @param oracle value oracle whose universe size must equal n
   */
  Instance(std::vector<Vec> cost, Vec budget, OraclePtr oracle, InstanceMeta meta = {})
      : rawCost_(std::move(cost)), rawBudget_(std::move(budget)), oracle_(std::move(oracle)),
        meta_(std::move(meta)) {
    validate(/*requirePositiveBudget=*/true);
    n_ = oracle_->universeSize();
    d_ = static_cast<int>(rawBudget_.size());
    cost_ = rawCost_;
    budget_.assign(d_, 1.0);
    for (int r = 0; r < d_; ++r)
      for (double& c : cost_[r]) c /= rawBudget_[r];
  }

  /**
   * @brief Build an instance in an already-normalized frame, keeping the
   * given budgets as-is. Used for residual sub-problems, which must share
   * the arithmetic frame of their base instance; zero budgets are allowed
   * there because all surviving costs in such a dimension are zero.
   */
  static Instance inFrame(std::vector<Vec> cost, Vec budget, OraclePtr oracle, InstanceMeta meta = {}) {
    Instance inst(Raw{}, std::move(cost), std::move(budget), std::move(oracle), std::move(meta));
    return inst;
  }

  int n() const { return n_; }
  int d() const { return d_; }

  /// Normalized cost of element i in dimension r.
  double cost(int r, int i) const { return cost_[r][i]; }
  const Vec& costRow(int r) const { return cost_[r]; }

  /// Normalized budget of dimension r (1 for instances built from raw data).
  double budget(int r) const { return budget_[r]; }
  const Vec& budgets() const { return budget_; }

  const SubmodularOracle& oracle() const { return *oracle_; }
  const OraclePtr& oraclePtr() const { return oracle_; }

  const std::vector<Vec>& rawCost() const { return rawCost_; }
  const Vec& rawBudget() const { return rawBudget_; }
  const InstanceMeta& meta() const { return meta_; }
  void setMeta(InstanceMeta meta) { meta_ = std::move(meta); }

private:
  struct Raw {};

  Instance(Raw, std::vector<Vec> cost, Vec budget, OraclePtr oracle, InstanceMeta meta)
      : rawCost_(std::move(cost)), rawBudget_(std::move(budget)), oracle_(std::move(oracle)),
        meta_(std::move(meta)) {
    validate(/*requirePositiveBudget=*/false);
    n_ = oracle_->universeSize();
    d_ = static_cast<int>(rawBudget_.size());
    cost_ = rawCost_;
    budget_ = rawBudget_;
  }

  void validate(bool requirePositiveBudget) const {
    if (!oracle_) throw InputError("instance: missing oracle");
    const int n = oracle_->universeSize();
    if (rawCost_.size() != rawBudget_.size()) throw InputError("instance: cost rows must match budget length");
    if (rawBudget_.empty()) throw InputError("instance: need at least one dimension");
    for (std::size_t r = 0; r < rawCost_.size(); ++r) {
      if (static_cast<int>(rawCost_[r].size()) != n)
        throw InputError("instance: cost row " + std::to_string(r) + " has wrong length");
      for (double c : rawCost_[r])
        if (!(c >= 0.0)) throw InputError("instance: costs must be non-negative");
      const double b = rawBudget_[r];
      if (requirePositiveBudget ? !(b > 0.0) : !(b >= 0.0))
        throw InputError("instance: budget " + std::to_string(r) + " must be positive");
    }
  }

  int n_ = 0, d_ = 0;
  std::vector<Vec> cost_;
  Vec budget_;
  std::vector<Vec> rawCost_;
  Vec rawBudget_;
  OraclePtr oracle_;
  InstanceMeta meta_;
};

/// Canonical cost vector of a set: componentwise sum in ascending index order.
inline Vec costOfSet(const Instance& inst, const IndexSet& members) {
  detail::checkMembers(members, inst.n());
  Vec total(inst.d(), 0.0);
  for (int r = 0; r < inst.d(); ++r)
    for (int i : members) total[r] += inst.cost(r, i);
  return total;
}

/// Cost vector of a fractional point: weighted sum over the whole universe.
inline Vec costOfPoint(const Instance& inst, const Vec& y) {
  if (static_cast<int>(y.size()) != inst.n()) throw InputError("costOfPoint: point has wrong length");
  Vec total(inst.d(), 0.0);
  for (int r = 0; r < inst.d(); ++r)
    for (int i = 0; i < inst.n(); ++i) total[r] += inst.cost(r, i) * y[i];
  return total;
}

enum class Feasibility { Feasible, NearlyFeasible, Infeasible };

inline std::string feasibilityName(Feasibility f) {
  switch (f) {
  case Feasibility::Feasible: return "Feasible";
  case Feasibility::NearlyFeasible: return "NearlyFeasible";
  case Feasibility::Infeasible: return "Infeasible";
  }
  return "?";
}

/// Classify a precomputed cost vector against the budgets.
inline Feasibility classifyCost(const Instance& inst, const Vec& cost, double eps) {
  if (!(eps > 0.0)) throw InputError("classify: eps must be positive");
  bool feasible = true, nearly = true;
  for (int r = 0; r < inst.d(); ++r) {
    const double b = inst.budget(r);
    if (!(cost[r] <= b)) feasible = false;
    if (!(cost[r] <= (1.0 + eps) * b)) nearly = false;
  }
  if (feasible) return Feasibility::Feasible;
  return nearly ? Feasibility::NearlyFeasible : Feasibility::Infeasible;
}

inline Feasibility classify(const Instance& inst, const IndexSet& members, double eps) {
  return classifyCost(inst, costOfSet(inst, members), eps);
}

/// True iff every cost component of element i is at most eps^3 times the budget.
inline bool isSmall(const Instance& inst, int i, double eps) {
  if (i < 0 || i >= inst.n()) throw InputError("isSmall: element index out of range");
  if (!(eps > 0.0) || !(eps < 1.0)) throw InputError("isSmall: eps must lie in (0, 1)");
  const double e3 = eps * eps * eps;
  for (int r = 0; r < inst.d(); ++r)
    if (!(inst.cost(r, i) <= e3 * inst.budget(r))) return false;
  return true;
}

/// A chosen subset with its cached cost vector and objective value.
struct SolutionSet {
  IndexSet members;
  Vec cost;
  double value = 0.0;

  static SolutionSet of(const Instance& inst, IndexSet members) {
    SolutionSet s;
    s.cost = costOfSet(inst, members);
    s.value = inst.oracle().value(members);
    s.members = std::move(members);
    return s;
  }

  static SolutionSet empty(const Instance& inst) { return of(inst, {}); }

  bool isEmpty() const { return members.empty(); }
};

} // namespace subknap
