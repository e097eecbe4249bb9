/**
 * @file generate.hpp
 * @brief Seeded instance generators for the three oracle families.
 *
 * Generation order is fixed (oracle structure first, then profits/weights,
 * then costs row by row), so the same parameters and seed always produce the
 * same instance, byte for byte after serialization. Budgets are 1 in every
 * dimension. In small-element mode each cost is drawn uniformly from
 * [0, eps^3] instead of the configured range.
 */

#pragma once

#include <string>

#include "subknap/instance.hpp"
#include "subknap/random.hpp"
#include "subknap/report.hpp"

namespace subknap {

/// Cost-matrix parameters shared by all generators.
struct CostModel {
  int d = 1;
  double costMin = 0.05;
  double costMax = 0.4;
  bool smallMode = false; // cap costs at eps^3 so every element is small
  double epsilon = 0.2;   // only used in small mode

  void validate() const {
    if (d < 1) throw InputError("generate: d must be >= 1");
    if (!(costMin >= 0.0) || !(costMax >= costMin)) throw InputError("generate: bad cost range");
    if (smallMode && (!(epsilon > 0.0) || !(epsilon < 1.0)))
      throw InputError("generate: small mode needs eps in (0, 1)");
  }
};

struct CoverageParams {
  int numSets = 6;
  int numItems = 10;
  double density = 0.4;
  double profitMin = 0.5;
  double profitMax = 1.5;
};

struct CutParams {
  int numVertices = 8;
  double edgeProb = 0.5;
  double weightMin = 0.5;
  double weightMax = 1.5;
  bool directed = false;
};

struct ModularParams {
  int n = 8;
  double weightMin = 0.5;
  double weightMax = 1.5;
};

namespace detail {

inline std::vector<Vec> drawCosts(int n, const CostModel& cm, Rng& rng) {
  const double e3 = cm.epsilon * cm.epsilon * cm.epsilon;
  std::vector<Vec> cost(cm.d, Vec(n));
  for (int r = 0; r < cm.d; ++r)
    for (int i = 0; i < n; ++i)
      cost[r][i] = cm.smallMode ? rng.uniform(0.0, e3) : rng.uniform(cm.costMin, cm.costMax);
  return cost;
}

inline InstanceMeta makeMeta(const std::string& kind, int n, const CostModel& cm, std::uint64_t seed,
                             const std::string& params) {
  InstanceMeta meta;
  meta.name = kind + "-n" + std::to_string(n) + "-d" + std::to_string(cm.d) + "-s" + std::to_string(seed);
  meta.seed = seed;
  meta.generator = kind + "(" + params + ")" + (cm.smallMode ? " small-mode eps=" + formatG17(cm.epsilon) : "");
  return meta;
}

} // namespace detail

inline Instance generateCoverage(const CoverageParams& p, const CostModel& cm, std::uint64_t seed) {
  cm.validate();
  if (p.numSets < 0 || p.numItems < 0 || !(p.density >= 0.0) || !(p.density <= 1.0) ||
      !(p.profitMax >= p.profitMin) || !(p.profitMin >= 0.0))
    throw InputError("generate: bad coverage parameters");
  Rng rng(seed);
  std::vector<std::vector<int>> sets(p.numSets);
  for (int s = 0; s < p.numSets; ++s)
    for (int v = 0; v < p.numItems; ++v)
      if (rng.uniform01() < p.density) sets[s].push_back(v);
  Vec profits(p.numItems);
  for (double& pv : profits) pv = rng.uniform(p.profitMin, p.profitMax);
  auto oracle = std::make_shared<CoverageOracle>(std::move(sets), std::move(profits));
  std::vector<Vec> cost = detail::drawCosts(p.numSets, cm, rng);
  const std::string params = std::to_string(p.numSets) + "," + std::to_string(p.numItems) + "," +
                             formatG17(p.density);
  return Instance(std::move(cost), Vec(cm.d, 1.0), std::move(oracle),
                  detail::makeMeta("coverage", p.numSets, cm, seed, params));
}

inline Instance generateCut(const CutParams& p, const CostModel& cm, std::uint64_t seed) {
  cm.validate();
  if (p.numVertices < 0 || !(p.edgeProb >= 0.0) || !(p.edgeProb <= 1.0) ||
      !(p.weightMax >= p.weightMin) || !(p.weightMin >= 0.0))
    throw InputError("generate: bad cut parameters");
  Rng rng(seed);
  std::vector<CutOracle::Edge> edges;
  for (int u = 0; u < p.numVertices; ++u)
    for (int v = p.directed ? 0 : u + 1; v < p.numVertices; ++v) {
      if (u == v) continue;
      if (rng.uniform01() < p.edgeProb) edges.push_back({u, v, rng.uniform(p.weightMin, p.weightMax)});
    }
  auto oracle = std::make_shared<CutOracle>(p.numVertices, std::move(edges), p.directed);
  std::vector<Vec> cost = detail::drawCosts(p.numVertices, cm, rng);
  const std::string params = std::to_string(p.numVertices) + "," + formatG17(p.edgeProb) + "," +
                             (p.directed ? "directed" : "undirected");
  return Instance(std::move(cost), Vec(cm.d, 1.0), std::move(oracle),
                  detail::makeMeta("cut", p.numVertices, cm, seed, params));
}

inline Instance generateModular(const ModularParams& p, const CostModel& cm, std::uint64_t seed) {
  cm.validate();
  if (p.n < 0 || !(p.weightMax >= p.weightMin) || !(p.weightMin >= 0.0))
    throw InputError("generate: bad modular parameters");
  Rng rng(seed);
  Vec weights(p.n);
  for (double& w : weights) w = rng.uniform(p.weightMin, p.weightMax);
  auto oracle = std::make_shared<ModularOracle>(std::move(weights));
  std::vector<Vec> cost = detail::drawCosts(p.n, cm, rng);
  return Instance(std::move(cost), Vec(cm.d, 1.0), std::move(oracle),
                  detail::makeMeta("modular", p.n, cm, seed, std::to_string(p.n)));
}

} // namespace subknap
