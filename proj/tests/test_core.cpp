#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace subknap;
using namespace testsupport;

TEST_CASE("coverage oracle evaluates neighborhood profit") {
  const Instance inst = pairCoverage();
  const SubmodularOracle& f = inst.oracle();
  CHECK(f.value({0}) == 2.0);
  CHECK(f.value({}) == 0.0);
  CHECK(f.value({0, 1}) == 3.0);
  CHECK(f.monotone());
}

TEST_CASE("cut oracle counts crossing edges only") {
  const Instance inst = singleEdgeCut();
  const SubmodularOracle& f = inst.oracle();
  CHECK(f.value({}) == 0.0);
  CHECK(f.value({0}) == 1.0);
  CHECK(f.value({0, 1}) == 0.0);
  CHECK_FALSE(f.monotone());
}

TEST_CASE("directed cut counts outgoing edges") {
  CutOracle f(3, {{0, 1, 2.0}, {1, 2, 1.0}}, true);
  CHECK(f.value({0}) == 2.0);
  CHECK(f.value({1}) == 1.0);
  CHECK(f.value({2}) == 0.0);
  CHECK(f.value({0, 1}) == 1.0);
}

TEST_CASE("oracle rejects bad construction") {
  CHECK_THROWS_AS(CoverageOracle({{0}}, {-1.0}), InputError);
  CHECK_THROWS_AS(CutOracle(2, {{0, 0, 1.0}}, false), InputError);
  CHECK_THROWS_AS(CutOracle(2, {{0, 5, 1.0}}, false), InputError);
  CHECK_THROWS_AS(ModularOracle({1.0, -0.5}), InputError);
  CHECK_THROWS_AS(TableOracle(2, {0, 1, 1}, false), InputError);      // wrong size
  CHECK_THROWS_AS(TableOracle(1, {0, -1}, false), InputError);        // negative value
  CHECK_THROWS_AS(TableOracle(2, {1, 0, 0, 0}, true), InputError);    // not monotone
  CHECK_NOTHROW(TableOracle(2, {0, 1, 1, 2}, true));
}

TEST_CASE("eval validates member lists") {
  const Instance inst = pairCoverage();
  CHECK_THROWS_AS(inst.oracle().value({5}), InputError);
  CHECK_THROWS_AS(inst.oracle().value({1, 0}), InputError);
  CHECK_THROWS_AS(inst.oracle().value({0, 0}), InputError);
}

TEST_CASE("marginal value") {
  const Instance cov = pairCoverage();
  CHECK(marginal(cov.oracle(), {1}, {0}) == 1.0); // adds v0 only on top of {s1}
  CHECK(marginal(cov.oracle(), {}, {}) == 0.0);
  CHECK(marginal(cov.oracle(), {0, 1}, {}) == 0.0);

  const Instance cut = singleEdgeCut();
  CHECK(marginal(cut.oracle(), {1}, {0}) == -1.0); // f({0,1}) - f({1}) = 0 - 1
}

TEST_CASE("cost of sets and points") {
  const Instance inst = pairCoverage();
  CHECK(costOfSet(inst, {})[0] == 0.0);
  CHECK(costOfSet(inst, {0, 1})[0] == 0.8);
  CHECK(costOfPoint(inst, {0.5, 1.0})[0] == 0.55);
  CHECK(costOfPoint(inst, {0.0, 0.0})[0] == 0.0);

  Instance twoDim = modularInstance({1, 1}, {{0.1, 0.4}, {0.9, 0.0}}, {1.0, 1.0});
  const Vec c = costOfSet(twoDim, {0, 1});
  CHECK(c[0] == 0.5);
  CHECK(c[1] == 0.9);

  // indicator consistency
  const Vec viaPoint = costOfPoint(twoDim, {1.0, 1.0});
  CHECK(viaPoint[0] == c[0]);
  CHECK(viaPoint[1] == c[1]);
}

TEST_CASE("instance normalizes budgets to one") {
  Instance inst = modularInstance({1, 1}, {{1.0, 3.0}}, {4.0});
  CHECK(inst.budget(0) == 1.0);
  CHECK(inst.cost(0, 0) == 0.25);
  CHECK(inst.cost(0, 1) == 0.75);
  CHECK(inst.rawBudget()[0] == 4.0);
  CHECK(inst.rawCost()[0][0] == 1.0);
}

TEST_CASE("instance validation") {
  auto oracle = std::make_shared<ModularOracle>(Vec{1.0, 1.0});
  CHECK_THROWS_AS(Instance({{0.1}}, {1.0}, oracle), InputError);        // row length
  CHECK_THROWS_AS(Instance({{0.1, -0.2}}, {1.0}, oracle), InputError);  // negative cost
  CHECK_THROWS_AS(Instance({{0.1, 0.2}}, {0.0}, oracle), InputError);   // zero budget
  CHECK_THROWS_AS(Instance({{0.1, 0.2}}, {1.0, 1.0}, oracle), InputError);
}

TEST_CASE("classify against the budget") {
  const Instance inst = modularInstance({1}, {{1.0}}, {1.0});
  CHECK(classify(inst, {0}, 0.1) == Feasibility::Feasible); // boundary included

  // cost 1.05 and 1.2 against budget 1
  const Instance inst2 = modularInstance({1, 1}, {{1.05, 1.2}}, {1.0});
  CHECK(classify(inst2, {0}, 0.1) == Feasibility::NearlyFeasible);
  CHECK(classify(inst2, {1}, 0.1) == Feasibility::Infeasible);
  CHECK_THROWS_AS(classify(inst2, {0}, 0.0), InputError);
}

TEST_CASE("classify is monotone in eps") {
  Rng rng(7);
  const Instance inst = modularInstance({1, 1, 1, 1}, {{0.4, 0.5, 0.6, 0.2}}, {1.0});
  for (int t = 0; t < 500; ++t) {
    const IndexSet s = randomSubset(4, rng);
    const double e1 = rng.uniform(0.05, 0.5);
    const double e2 = e1 + rng.uniform(0.01, 0.5);
    if (classify(inst, s, e1) == Feasibility::NearlyFeasible)
      CHECK(classify(inst, s, e2) == Feasibility::NearlyFeasible);
  }
}

TEST_CASE("small elements") {
  const Instance inst = modularInstance({1, 1, 1}, {{0.0, 0.001, 0.01}}, {1.0});
  CHECK(isSmall(inst, 0, 0.5));
  CHECK(isSmall(inst, 1, 0.1)); // 0.001 == eps^3 exactly, boundary inclusive
  CHECK_FALSE(isSmall(inst, 2, 0.1));

  const Instance twoDim = modularInstance({1}, {{0.001}, {0.002}}, {1.0, 1.0});
  CHECK_FALSE(isSmall(twoDim, 0, 0.1)); // second dimension exceeds
  CHECK_THROWS_AS(isSmall(inst, 0, 1.0), InputError);
  CHECK_THROWS_AS(isSmall(inst, 9, 0.1), InputError);
}

TEST_CASE("solution sets cache canonical cost and value") {
  const Instance inst = pairCoverage();
  const SolutionSet s = SolutionSet::of(inst, {0, 1});
  CHECK(s.value == 3.0);
  CHECK(s.cost[0] == costOfSet(inst, {0, 1})[0]);
  CHECK(SolutionSet::empty(inst).value == 0.0);
}

namespace {

std::vector<Instance> propertyInstances() {
  std::vector<Instance> out;
  CostModel cm;
  cm.d = 2;
  out.push_back(generateCoverage({8, 12, 0.4, 0.5, 1.5}, cm, 11));
  out.push_back(generateCut({8, 0.5, 0.5, 1.5, false}, cm, 12));
  out.push_back(generateCut({7, 0.6, 0.5, 1.5, true}, cm, 13));
  out.push_back(generateModular({8, 0.5, 1.5}, cm, 14));
  {
    Rng rng(15);
    Vec values(1u << 7);
    // submodular table: weighted coverage of random structure
    std::vector<std::uint32_t> itemMask(9);
    for (auto& m : itemMask) m = static_cast<std::uint32_t>(rng.raw() & ((1u << 7) - 1));
    for (std::uint32_t mask = 0; mask < values.size(); ++mask) {
      double v = 0.0;
      for (std::size_t it = 0; it < itemMask.size(); ++it)
        if (itemMask[it] & mask) v += 0.5 + 0.1 * static_cast<double>(it);
      values[mask] = v;
    }
    out.push_back(Instance({Vec(7, 0.2), Vec(7, 0.3)}, {1.0, 1.0},
                           std::make_shared<TableOracle>(7, std::move(values), true),
                           {"table-coverage", {}, ""}));
  }
  return out;
}

} // namespace

TEST_CASE("submodularity inequality holds on random pairs") {
  for (const Instance& inst : propertyInstances()) {
    Rng rng(101);
    const SubmodularOracle& f = inst.oracle();
    for (int t = 0; t < 2000; ++t) {
      const IndexSet s = randomSubset(inst.n(), rng), u = randomSubset(inst.n(), rng);
      REQUIRE(f.value(s) + f.value(u) >=
              f.value(setUnion(s, u)) + f.value(setIntersection(s, u)) - 1e-9);
    }
  }
}

TEST_CASE("disjoint unions are subadditive") {
  for (const Instance& inst : propertyInstances()) {
    Rng rng(102);
    const SubmodularOracle& f = inst.oracle();
    for (int t = 0; t < 2000; ++t) {
      const IndexSet s = randomSubset(inst.n(), rng);
      const auto parts = randomPartition(s, 2 + static_cast<int>(rng.below(3)), rng);
      double sum = 0.0;
      for (const auto& p : parts) sum += f.value(p);
      REQUIRE(f.value(s) <= sum + 1e-9);
    }
  }
}

TEST_CASE("marginals shrink as the context grows") {
  for (const Instance& inst : propertyInstances()) {
    Rng rng(103);
    const SubmodularOracle& f = inst.oracle();
    for (int t = 0; t < 2000; ++t) {
      const IndexSet t2 = randomSubset(inst.n(), rng);
      const IndexSet t1 = randomSubsetOf(t2, rng);
      IndexSet rest;
      for (int i = 0; i < inst.n(); ++i)
        if (!std::binary_search(t2.begin(), t2.end(), i)) rest.push_back(i);
      const IndexSet s = randomSubsetOf(rest, rng);
      REQUIRE(marginal(f, t2, s) <= marginal(f, t1, s) + 1e-9);
    }
  }
}

TEST_CASE("partition marginals are dominated by the total") {
  for (const Instance& inst : propertyInstances()) {
    Rng rng(104);
    const SubmodularOracle& f = inst.oracle();
    for (int t = 0; t < 2000; ++t) {
      const IndexSet s = randomSubset(inst.n(), rng);
      const auto parts = randomPartition(s, 2 + static_cast<int>(rng.below(3)), rng);
      double sum = 0.0;
      for (const auto& p : parts) sum += marginal(f, setDifference(s, p), p);
      REQUIRE(f.value(s) >= sum - 1e-9);
    }
  }
}

TEST_CASE("monotone oracles never lose value on supersets") {
  for (const Instance& inst : propertyInstances()) {
    if (!inst.oracle().monotone()) continue;
    Rng rng(105);
    const SubmodularOracle& f = inst.oracle();
    for (int t = 0; t < 2000; ++t) {
      const IndexSet big = randomSubset(inst.n(), rng);
      const IndexSet small = randomSubsetOf(big, rng);
      REQUIRE(f.value(small) <= f.value(big) + 1e-9);
    }
  }
}
