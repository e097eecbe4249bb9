#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace subknap;
using namespace testsupport;

TEST_CASE("sampling rounds integral points exactly") {
  const Instance inst = pairCoverage();
  CHECK(sampleRound(inst, FractionalPoint::indicator(2, {0, 1}), 1).members == IndexSet{0, 1});
  CHECK(sampleRound(inst, FractionalPoint::zeros(2), 1).members.empty());
}

TEST_CASE("sampling hits the per-element probabilities") {
  const int n = 6;
  const Instance inst = modularInstance(Vec(n, 1.0), {Vec(n, 0.01)}, {1.0});
  const FractionalPoint y(Vec(n, 0.5));
  const int draws = 10000;
  std::vector<int> hits(n, 0);
  for (int s = 0; s < draws; ++s)
    for (int i : sampleRound(inst, y, static_cast<std::uint64_t>(s)).members) ++hits[i];
  const double slack = 4.0 * std::sqrt(0.25 / draws);
  for (int i = 0; i < n; ++i) {
    const double freq = static_cast<double>(hits[i]) / draws;
    REQUIRE(std::abs(freq - 0.5) <= slack);
  }
}

TEST_CASE("sample mean is an unbiased estimate of the extension") {
  const Instance inst = pairCoverage();
  const FractionalPoint y(Vec{0.7, 0.4});
  const double exact = fExact(inst, y);
  const long draws = 100000;
  double sum = 0.0, sumSq = 0.0;
  Rng rng(4242);
  for (long s = 0; s < draws; ++s) {
    const double v = inst.oracle().value(sampleFromPoint(y.entries(), rng));
    sum += v;
    sumSq += v * v;
  }
  const double mean = sum / draws;
  const double se = std::sqrt(std::max(0.0, (sumSq - draws * mean * mean) / (draws - 1.0)) / draws);
  CHECK(std::abs(mean - exact) <= 4.0 * se);
}

TEST_CASE("filter keeps nearly feasible draws and drops the rest") {
  const Instance inst = modularInstance({1, 1}, {{1.05, 1.2}}, {1.0});
  const SolutionSet nearly = SolutionSet::of(inst, {0});
  const SolutionSet far = SolutionSet::of(inst, {1});
  CHECK(filterNearlyFeasible(inst, nearly, 0.1).members == IndexSet{0});
  CHECK(filterNearlyFeasible(inst, far, 0.1).members.empty());

  const SolutionSet feasible = SolutionSet::of(pairCoverage(), {0, 1});
  CHECK(filterNearlyFeasible(pairCoverage(), feasible, 0.1).members == IndexSet{0, 1});
}

TEST_CASE("filter output is always nearly feasible") {
  CostModel cm;
  cm.d = 2;
  cm.smallMode = true;
  cm.epsilon = 0.3;
  const Instance inst = generateModular({40, 0.5, 1.5}, cm, 5);
  Rng rng(6);
  for (int t = 0; t < 2000; ++t) {
    Vec y(inst.n());
    for (double& v : y) v = rng.uniform01();
    detail::clampToPolytope(inst, y);
    const SolutionSet d = sampleRound(inst, FractionalPoint(y), rng.raw());
    const SolutionSet filtered = filterNearlyFeasible(inst, d, 0.3);
    REQUIRE(classifyCost(inst, filtered.cost, 0.3) != Feasibility::Infeasible);
    REQUIRE((filtered.members.empty() || filtered.members == d.members));
  }
}

TEST_CASE("fix leaves feasible inputs alone") {
  const Instance inst = modularInstance(Vec(4, 1.0), {Vec(4, 0.001)}, {1.0});
  const SolutionSet s = SolutionSet::of(inst, {0, 2});
  const SolutionSet fixed = fixNearlyFeasible(inst, s, 0.1);
  CHECK(fixed.members == s.members);
}

TEST_CASE("fix repairs an overfull modular instance with bounded loss") {
  // 1050 elements of cost 0.001 each: total 1.05, nearly feasible at eps 0.1
  const int n = 1050;
  const Instance inst = modularInstance(Vec(n, 0.001), {Vec(n, 0.001)}, {1.0});
  IndexSet members(n);
  for (int i = 0; i < n; ++i) members[i] = i;
  const SolutionSet input = SolutionSet::of(inst, members);
  REQUIRE(classifyCost(inst, input.cost, 0.1) == Feasibility::NearlyFeasible);

  const SolutionSet fixed = fixNearlyFeasible(inst, input, 0.1);
  CHECK(classifyCost(inst, fixed.cost, 0.1) == Feasibility::Feasible);
  CHECK(fixed.cost[0] <= 1.0);
  CHECK(fixed.value >= 0.94);
  CHECK(std::includes(input.members.begin(), input.members.end(), fixed.members.begin(), fixed.members.end()));
}

TEST_CASE("fix repairs only the violated dimension") {
  // dimension 0 comfortable, dimension 1 overfull
  const int n = 300;
  std::vector<Vec> cost(2, Vec(n));
  for (int i = 0; i < n; ++i) {
    cost[0][i] = 0.001;
    cost[1][i] = 0.0035;
  }
  const Instance inst = modularInstance(Vec(n, 1.0), cost, {1.0, 1.0});
  IndexSet members(n);
  for (int i = 0; i < n; ++i) members[i] = i;
  const SolutionSet input = SolutionSet::of(inst, members); // cost (0.3, 1.05)
  REQUIRE(classifyCost(inst, input.cost, 0.2) == Feasibility::NearlyFeasible);

  const SolutionSet fixed = fixNearlyFeasible(inst, input, 0.2);
  CHECK(classifyCost(inst, fixed.cost, 0.2) == Feasibility::Feasible);
  CHECK(fixed.cost[1] <= 1.0);
  CHECK(fixed.cost[0] <= input.cost[0]);
  CHECK_FALSE(fixed.members.empty());
}

TEST_CASE("fix rejects bad inputs") {
  const Instance big = modularInstance({1, 1}, {{0.9, 0.9}}, {1.0});
  const SolutionSet far = SolutionSet::of(big, {0, 1});
  CHECK_THROWS_AS(fixNearlyFeasible(big, far, 0.1), InputError); // infeasible beyond eps

  const Instance nearly = modularInstance({1, 1}, {{0.6, 0.45}}, {1.0});
  CHECK_THROWS_AS(fixNearlyFeasible(nearly, SolutionSet::of(nearly, {0, 1}), 0.1),
                  InputError); // non-small member
}

TEST_CASE("fix output is always a feasible subset, across kinds and dimensions") {
  Rng rng(77);
  for (int caseIdx = 0; caseIdx < 200; ++caseIdx) {
    const int d = 1 + static_cast<int>(rng.below(3));
    const double eps = 0.2 + 0.1 * static_cast<double>(rng.below(2));
    CostModel cm;
    cm.d = d;
    cm.smallMode = true;
    cm.epsilon = eps;
    Instance inst = (caseIdx % 3 == 0)
                        ? generateCoverage({60, 30, 0.2, 0.5, 1.5}, cm, 900 + caseIdx)
                        : (caseIdx % 3 == 1 ? generateCut({60, 0.1, 0.5, 1.5, false}, cm, 900 + caseIdx)
                                            : generateModular({60, 0.5, 1.5}, cm, 900 + caseIdx));
    // grow a random nearly feasible set
    IndexSet members;
    for (int i = 0; i < inst.n(); ++i) {
      members.push_back(i);
      if (classify(inst, members, eps) == Feasibility::Infeasible) {
        members.pop_back();
        continue;
      }
      if (rng.uniform01() < 0.2) break;
    }
    const SolutionSet input = SolutionSet::of(inst, members);
    const SolutionSet fixed = fixNearlyFeasible(inst, input, eps);
    REQUIRE(classifyCost(inst, fixed.cost, eps) == Feasibility::Feasible);
    REQUIRE(std::includes(input.members.begin(), input.members.end(), fixed.members.begin(),
                          fixed.members.end()));
  }
}

TEST_CASE("round once chains draw, filter and fix") {
  CostModel cm;
  cm.smallMode = true;
  cm.epsilon = 0.25;
  const Instance inst = generateCoverage({70, 40, 0.15, 0.5, 1.5}, cm, 12);
  Rng rng(13);
  const FractionalPoint y = randomFeasiblePoint(inst, rng);
  const RoundingOutcome out = roundOnce(inst, y, 0.25, 99);
  CHECK(classifyCost(inst, out.fixed.cost, 0.25) == Feasibility::Feasible);
  CHECK((out.filtered.members.empty() || out.filtered.members == out.drawn.members));
  CHECK(std::includes(out.filtered.members.begin(), out.filtered.members.end(),
                      out.fixed.members.begin(), out.fixed.members.end()));
  CHECK(out.drawClass == classifyCost(inst, out.drawn.cost, 0.25));
}

TEST_CASE("round-no-big keeps integral feasible points") {
  CostModel cm;
  cm.smallMode = true;
  cm.epsilon = 0.3;
  const Instance inst = generateModular({20, 0.5, 1.5}, cm, 21);
  const IndexSet members{1, 4, 7};
  const SolutionSet s = roundNoBig(inst, FractionalPoint::indicator(inst.n(), members), 0.3, 5, 1);
  CHECK(s.members == members);
}

TEST_CASE("round-no-big validates preconditions") {
  const Instance big = modularInstance({1, 1}, {{0.5, 0.5}}, {1.0});
  CHECK_THROWS_AS(roundNoBig(big, FractionalPoint(Vec{0.5, 0.5}), 0.2, 1, 1), InputError);

  const Instance ok = modularInstance({1, 1}, {{0.001, 0.001}}, {1.0});
  CHECK_THROWS_AS(roundNoBig(ok, FractionalPoint(Vec{0.5, 0.5}), 0.2, 1, 0), InputError);
}

TEST_CASE("more attempts never hurt the rounded value") {
  CostModel cm;
  cm.smallMode = true;
  cm.epsilon = 0.3;
  const Instance inst = generateCoverage({50, 30, 0.2, 0.5, 1.5}, cm, 31);
  Rng rng(32);
  const FractionalPoint y = randomFeasiblePoint(inst, rng);
  double previous = -1.0;
  for (int attempts : {1, 4, 16}) {
    const SolutionSet s = roundNoBig(inst, y, 0.3, 7, attempts);
    REQUIRE(classifyCost(inst, s.cost, 0.3) == Feasibility::Feasible);
    REQUIRE(s.value >= previous);
    previous = s.value;
  }
}

TEST_CASE("rounded mean value tracks the extension on small-element instances") {
  CostModel cm;
  cm.smallMode = true;
  cm.epsilon = 0.2;
  const Instance inst = generateCoverage({12, 20, 0.4, 0.5, 1.5}, cm, 41);
  Rng rng(42);
  const FractionalPoint y = randomFeasiblePoint(inst, rng);
  const double reference = fExact(inst, y);
  double sum = 0.0;
  const int runs = 200;
  for (int s = 0; s < runs; ++s) sum += roundNoBig(inst, y, 0.2, static_cast<std::uint64_t>(s), 1).value;
  const double mean = sum / runs;
  CHECK(mean >= (1.0 - 5.0 * 0.2) * reference - 1e-9);
  CHECK(mean >= 0.9 * reference); // measured headroom on small-element inputs
}

namespace {

/// No-big-elements instances where the draw can still overshoot the budget:
/// a ones-heavy block packed against the budget plus a boundary-small
/// fractional tail.
struct OverflowCase {
  Instance inst;
  FractionalPoint y;
};

OverflowCase overflowCase(std::uint64_t seed, double eps, int d) {
  Rng rng(seed);
  const int fixed = 40, tail = 16;
  const int n = fixed + tail;
  const double e3 = eps * eps * eps;
  std::vector<Vec> cost(d, Vec(n));
  for (int r = 0; r < d; ++r) {
    for (int i = 0; i < fixed; ++i) cost[r][i] = rng.uniform(0.6 * e3, e3);
    for (int i = fixed; i < n; ++i) cost[r][i] = rng.uniform(0.8 * e3, e3);
  }
  Vec weights(n);
  for (double& w : weights) w = rng.uniform(0.5, 1.5);
  Instance inst(std::move(cost), Vec(d, 1.0), std::make_shared<ModularOracle>(std::move(weights)),
                {"overflow", {}, ""});
  for (int i = 0; i < n; ++i) REQUIRE(isSmall(inst, i, eps));
  Vec y(n, 0.0);
  for (int i = fixed; i < n; ++i) y[i] = rng.uniform(0.3, 0.9);
  // greedily raise the fixed entries to 1 while the point stays feasible
  for (int i = 0; i < fixed; ++i) {
    y[i] = 1.0;
    if (!contains(inst, FractionalPoint(y))) y[i] = 0.0;
  }
  detail::clampToPolytope(inst, y);
  return {std::move(inst), FractionalPoint(std::move(y))};
}

} // namespace

TEST_CASE("infeasibility frequency stays under the dimension-eps budget") {
  const double eps = 0.3;
  for (int d : {1, 2}) {
    const OverflowCase oc = overflowCase(1000 + d, eps, d);
    const int draws = 10000;
    int infeasible = 0;
    for (int s = 0; s < draws; ++s) {
      const SolutionSet drawn = sampleRound(oc.inst, oc.y, static_cast<std::uint64_t>(s));
      if (classifyCost(oc.inst, drawn.cost, eps) == Feasibility::Infeasible) ++infeasible;
    }
    const double bound = d * eps;
    const double freq = static_cast<double>(infeasible) / draws;
    REQUIRE(freq <= bound + 4.0 * std::sqrt(bound / draws));
  }
}

TEST_CASE("large deviations of the cost ratio are rare") {
  const double eps = 0.3;
  const double e3 = eps * eps * eps;
  for (int d : {1, 2}) {
    const OverflowCase oc = overflowCase(2000 + d, eps, d);
    const int draws = 10000;
    int above = 0;
    for (int s = 0; s < draws; ++s) {
      const SolutionSet drawn = sampleRound(oc.inst, oc.y, static_cast<std::uint64_t>(s));
      double worst = 0.0;
      for (int r = 0; r < d; ++r) worst = std::max(worst, drawn.cost[r] / oc.inst.budget(r));
      if (worst > 2.0) ++above;
    }
    const double bound = d * e3;
    const double freq = static_cast<double>(above) / draws;
    REQUIRE(freq <= bound + 4.0 * std::sqrt(bound / draws));
  }
}

TEST_CASE("bounded-overflow draws split into few feasible parts") {
  const double eps = 0.3;
  const int ell = 2;
  for (int d : {1, 2}) {
    const OverflowCase oc = overflowCase(3000 + d, eps, d);
    const SubmodularOracle& f = oc.inst.oracle();
    for (int s = 0; s < 300; ++s) {
      const SolutionSet drawn = sampleRound(oc.inst, oc.y, static_cast<std::uint64_t>(s));
      double worst = 0.0;
      for (int r = 0; r < d; ++r) worst = std::max(worst, drawn.cost[r] / oc.inst.budget(r));
      if (worst > ell) continue;
      const auto parts = firstFitFeasibleParts(oc.inst, drawn.members);
      REQUIRE(static_cast<int>(parts.size()) <= 2 * d * ell);
      double sum = 0.0;
      for (const auto& p : parts) {
        sum += f.value(p);
        REQUIRE(classify(oc.inst, p, eps) == Feasibility::Feasible);
      }
      REQUIRE(f.value(drawn.members) <= sum + 1e-9);
    }
  }
}
