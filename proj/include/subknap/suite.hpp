/**
 * @file suite.hpp
 * @brief Experiment runner: a JSON config expands into one CSV row per
 * (instance, algorithm, seed), with the exact optimum and ratio filled in on
 * brute-forceable instances and a mean/min ratio summary per algorithm.
 *
 * Rows execute in a small worker pool but are buffered and written in config
 * order, so the report is deterministic apart from the timing column (which
 * `timing=false` pins to zero).
 */

#pragma once

#include <atomic>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "subknap/bruteforce.hpp"
#include "subknap/derandomize.hpp"
#include "subknap/generate.hpp"
#include "subknap/io.hpp"

namespace subknap {

/// One algorithm column of the experiment matrix.
struct AlgorithmSpec {
  std::string algorithm = "randomized"; // randomized | deterministic | bruteforce
  std::string solver = "greedy";
  double epsilon = 0.3;
  long long h = -1; // -1: default min(prescribed value, 3)
  int attempts = 16;
  ContinuousConfig continuous;
};

struct SuiteConfig {
  std::vector<Instance> instances;
  std::vector<AlgorithmSpec> algorithms;
  std::vector<std::uint64_t> seeds{1};
  bool computeOpt = true; // on instances with n <= 22
};

namespace detail {

inline Instance instanceFromGeneratorJson(const json& g) {
  const std::string kind = field(g, "kind", "generator.kind").get<std::string>();
  const std::uint64_t seed = g.contains("seed") ? static_cast<std::uint64_t>(intAt(g.at("seed"), "generator.seed")) : 1;
  CostModel cm;
  if (g.contains("d")) cm.d = static_cast<int>(intAt(g.at("d"), "generator.d"));
  if (g.contains("cost_min")) cm.costMin = numberAt(g.at("cost_min"), "generator.cost_min");
  if (g.contains("cost_max")) cm.costMax = numberAt(g.at("cost_max"), "generator.cost_max");
  if (g.contains("small_mode")) cm.smallMode = g.at("small_mode").get<bool>();
  if (g.contains("epsilon")) cm.epsilon = numberAt(g.at("epsilon"), "generator.epsilon");

  Instance inst = [&] {
    if (kind == "coverage") {
      CoverageParams p;
      if (g.contains("sets")) p.numSets = static_cast<int>(intAt(g.at("sets"), "generator.sets"));
      if (g.contains("items")) p.numItems = static_cast<int>(intAt(g.at("items"), "generator.items"));
      if (g.contains("density")) p.density = numberAt(g.at("density"), "generator.density");
      if (g.contains("profit_min")) p.profitMin = numberAt(g.at("profit_min"), "generator.profit_min");
      if (g.contains("profit_max")) p.profitMax = numberAt(g.at("profit_max"), "generator.profit_max");
      return generateCoverage(p, cm, seed);
    }
    if (kind == "cut") {
      CutParams p;
      if (g.contains("vertices")) p.numVertices = static_cast<int>(intAt(g.at("vertices"), "generator.vertices"));
      if (g.contains("edge_prob")) p.edgeProb = numberAt(g.at("edge_prob"), "generator.edge_prob");
      if (g.contains("weight_min")) p.weightMin = numberAt(g.at("weight_min"), "generator.weight_min");
      if (g.contains("weight_max")) p.weightMax = numberAt(g.at("weight_max"), "generator.weight_max");
      if (g.contains("directed")) p.directed = g.at("directed").get<bool>();
      return generateCut(p, cm, seed);
    }
    if (kind == "modular") {
      ModularParams p;
      if (g.contains("n")) p.n = static_cast<int>(intAt(g.at("n"), "generator.n"));
      if (g.contains("weight_min")) p.weightMin = numberAt(g.at("weight_min"), "generator.weight_min");
      if (g.contains("weight_max")) p.weightMax = numberAt(g.at("weight_max"), "generator.weight_max");
      return generateModular(p, cm, seed);
    }
    throw InputError("suite config: unknown generator kind '" + kind + "'");
  }();
  if (g.contains("name")) {
    InstanceMeta meta = inst.meta();
    meta.name = g.at("name").get<std::string>();
    inst.setMeta(std::move(meta));
  }
  return inst;
}

} // namespace detail

namespace detail {

inline SuiteConfig parseSuiteConfigChecked(const json& j);

} // namespace detail

inline SuiteConfig parseSuiteConfig(const std::string& text) {
  detail::json j;
  try {
    j = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    throw InputError(std::string("suite config: malformed JSON: ") + e.what());
  }
  try {
    return detail::parseSuiteConfigChecked(j);
  } catch (const detail::json::exception& e) {
    throw InputError(std::string("suite config: ") + e.what());
  }
}

namespace detail {

inline SuiteConfig parseSuiteConfigChecked(const json& j) {
  SuiteConfig cfg;
  const detail::json& jinst = detail::field(j, "instances", "instances");
  if (!jinst.is_array()) throw InputError("suite config: instances must be an array");
  for (std::size_t i = 0; i < jinst.size(); ++i) {
    const detail::json& ji = jinst[i];
    if (ji.contains("path")) {
      const std::string path = ji.at("path").get<std::string>();
      std::ifstream in(path);
      if (!in) throw InputError("suite config: cannot open instance file " + path);
      std::stringstream body;
      body << in.rdbuf();
      Instance inst = parseInstance(body.str());
      if (inst.meta().name.empty()) {
        InstanceMeta meta = inst.meta();
        meta.name = path;
        inst.setMeta(std::move(meta));
      }
      cfg.instances.push_back(std::move(inst));
    } else if (ji.contains("generator")) {
      cfg.instances.push_back(detail::instanceFromGeneratorJson(ji.at("generator")));
    } else {
      throw InputError("suite config: instances[" + std::to_string(i) + "] needs path or generator");
    }
  }
  const detail::json& jalg = detail::field(j, "algorithms", "algorithms");
  if (!jalg.is_array()) throw InputError("suite config: algorithms must be an array");
  for (std::size_t a = 0; a < jalg.size(); ++a) {
    const detail::json& ja = jalg[a];
    AlgorithmSpec spec;
    spec.algorithm = detail::field(ja, "algorithm", "algorithms.algorithm").get<std::string>();
    if (spec.algorithm != "randomized" && spec.algorithm != "deterministic" && spec.algorithm != "bruteforce")
      throw InputError("suite config: unknown algorithm '" + spec.algorithm + "'");
    if (ja.contains("solver")) spec.solver = ja.at("solver").get<std::string>();
    if (ja.contains("epsilon")) spec.epsilon = detail::numberAt(ja.at("epsilon"), "algorithms.epsilon");
    if (ja.contains("h")) spec.h = detail::intAt(ja.at("h"), "algorithms.h");
    if (ja.contains("attempts")) spec.attempts = static_cast<int>(detail::intAt(ja.at("attempts"), "algorithms.attempts"));
    if (ja.contains("steps")) spec.continuous.steps = static_cast<int>(detail::intAt(ja.at("steps"), "algorithms.steps"));
    if (ja.contains("samples"))
      spec.continuous.samplesPerGradient = detail::intAt(ja.at("samples"), "algorithms.samples");
    if (ja.contains("grid")) spec.continuous.gridDenominator = static_cast<int>(detail::intAt(ja.at("grid"), "algorithms.grid"));
    if (ja.contains("restarts")) spec.continuous.restarts = static_cast<int>(detail::intAt(ja.at("restarts"), "algorithms.restarts"));
    cfg.algorithms.push_back(std::move(spec));
  }
  if (j.contains("seeds")) {
    cfg.seeds.clear();
    for (const auto& s : j.at("seeds")) cfg.seeds.push_back(static_cast<std::uint64_t>(detail::intAt(s, "seeds")));
    if (cfg.seeds.empty()) throw InputError("suite config: seeds must not be empty");
  }
  if (j.contains("opt")) cfg.computeOpt = j.at("opt").get<bool>();
  return cfg;
}

} // namespace detail

/// Run one cell of the experiment matrix.
inline RunReport runOne(const Instance& inst, const AlgorithmSpec& spec, std::uint64_t seed,
                        std::optional<double> opt) {
  RunReport report;
  try {
    if (spec.algorithm == "bruteforce") {
      const auto t0 = std::chrono::steady_clock::now();
      const ExactResult exact = exactOpt(inst);
      report.instance = inst.meta().name;
      report.algorithm = "bruteforce";
      report.solver = "";
      report.epsilon = spec.epsilon;
      report.hEff = 0;
      report.hPaper = prescribedH(inst.d(), spec.epsilon);
      report.seed = seed;
      report.attempts = 1;
      report.value = exact.optimumValue;
      report.feasibility = "Feasible";
      report.wallMs = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
      opt = exact.optimumValue;
    } else {
      const long long h = spec.h >= 0 ? spec.h : defaultH(inst.d(), spec.epsilon);
      const SolverRegistry registry = SolverRegistry::builtin(spec.continuous);
      SolveResult result = spec.algorithm == "randomized"
                               ? solveRandomized(inst, registry, spec.solver, spec.epsilon, h, seed, spec.attempts)
                               : solveDeterministic(inst, registry, spec.solver, spec.epsilon, h);
      report = std::move(result.report);
      if (spec.algorithm == "deterministic") report.seed = seed; // echoed for row identity
    }
    if (opt) {
      report.opt = *opt;
      report.ratio = *opt > 0.0 ? report.value / *opt : 1.0;
    }
  } catch (const std::exception& e) {
    report.instance = inst.meta().name;
    report.algorithm = spec.algorithm;
    report.solver = spec.algorithm == "bruteforce" ? "" : spec.solver;
    report.epsilon = spec.epsilon;
    report.seed = seed;
    report.error = e.what();
  }
  return report;
}

/// Execute the full matrix and render the CSV report.
inline std::string runSuite(const SuiteConfig& cfg, int jobs = 1, bool timing = true) {
  if (jobs < 1) throw InputError("suite: jobs must be >= 1");

  std::vector<std::optional<double>> opts(cfg.instances.size());
  for (std::size_t i = 0; i < cfg.instances.size(); ++i)
    if (cfg.computeOpt && cfg.instances[i].n() <= kMaxBruteforceUniverse)
      opts[i] = exactOpt(cfg.instances[i]).optimumValue;

  struct Cell {
    std::size_t inst, alg;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < cfg.instances.size(); ++i)
    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
      for (std::uint64_t s : cfg.seeds) cells.push_back({i, a, s});

  std::vector<RunReport> rows(cells.size());
  std::atomic<std::size_t> nextCell{0};
  const auto worker = [&] {
    while (true) {
      const std::size_t c = nextCell.fetch_add(1);
      if (c >= cells.size()) return;
      const Cell& cell = cells[c];
      rows[c] = runOne(cfg.instances[cell.inst], cfg.algorithms[cell.alg], cell.seed, opts[cell.inst]);
    }
  };
  if (jobs == 1 || cells.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const std::size_t count = std::min(static_cast<std::size_t>(jobs), cells.size());
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::string out = csvHeader() + "\n";
  for (const RunReport& r : rows) out += csvRow(r, timing) + "\n";

  // per-algorithm ratio summary over rows where the optimum was available
  std::map<std::string, std::pair<std::vector<double>, int>> byAlgorithm;
  for (const RunReport& r : rows) {
    auto& entry = byAlgorithm[r.algorithm];
    ++entry.second;
    if (r.ratio && r.error.empty()) entry.first.push_back(*r.ratio);
  }
  for (const auto& [name, entry] : byAlgorithm) {
    const auto& ratios = entry.first;
    out += "#summary,algorithm=" + name + ",rows=" + std::to_string(entry.second);
    if (!ratios.empty()) {
      double sum = 0.0, mn = ratios[0];
      for (double v : ratios) {
        sum += v;
        mn = std::min(mn, v);
      }
      out += ",mean_ratio=" + formatG17(sum / static_cast<double>(ratios.size()));
      out += ",min_ratio=" + formatG17(mn);
    }
    out += "\n";
  }
  return out;
}

} // namespace subknap
