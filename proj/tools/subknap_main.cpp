// Command-line front end: generate instances, solve them with the
// randomized or deterministic pipeline, compute exact optima, run experiment
// suites, and verify structural properties of an instance.
//
// Exit codes: 0 success, 2 invalid input, 3 capacity limit exceeded.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "subknap/subknap.hpp"

namespace {

using namespace subknap;

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file " + path);
  std::stringstream body;
  body << in.rdbuf();
  return body.str();
}

void writeOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file " + path);
  out << text;
}

struct GenOptions {
  std::string kind = "coverage";
  std::uint64_t seed = 1;
  CostModel cost;
  CoverageParams coverage;
  CutParams cut;
  ModularParams modular;
  double weightMin = 0.5, weightMax = 1.5; // shared by cut edges and modular weights
  std::string out;
};

int runGen(GenOptions o) {
  o.cut.weightMin = o.modular.weightMin = o.weightMin;
  o.cut.weightMax = o.modular.weightMax = o.weightMax;
  Instance inst = [&] {
    if (o.kind == "coverage") return generateCoverage(o.coverage, o.cost, o.seed);
    if (o.kind == "cut") return generateCut(o.cut, o.cost, o.seed);
    if (o.kind == "modular") return generateModular(o.modular, o.cost, o.seed);
    throw InputError("unknown generator kind '" + o.kind + "'");
  }();
  writeOutput(o.out, serializeInstance(inst));
  return 0;
}

struct SolveOptions {
  std::string in;
  std::string algorithm = "randomized";
  std::string solver = "greedy";
  double epsilon = 0.3;
  long long h = -1;
  std::uint64_t seed = 1;
  int attempts = 16;
  ContinuousConfig continuous;
  bool withOpt = false;
  bool noTiming = false;
  std::string out;
};

int runSolve(const SolveOptions& o) {
  Instance inst = parseInstance(readFile(o.in));
  if (inst.meta().name.empty()) {
    InstanceMeta meta = inst.meta();
    meta.name = o.in;
    inst.setMeta(std::move(meta));
  }
  AlgorithmSpec spec;
  spec.algorithm = o.algorithm;
  spec.solver = o.solver;
  spec.epsilon = o.epsilon;
  spec.h = o.h;
  spec.attempts = o.attempts;
  spec.continuous = o.continuous;
  if (o.algorithm != "randomized" && o.algorithm != "deterministic" && o.algorithm != "bruteforce")
    throw InputError("unknown algorithm '" + o.algorithm + "'");

  std::optional<double> opt;
  if (o.withOpt) {
    if (inst.n() > kMaxBruteforceUniverse)
      throw CapacityError("--opt: universe too large for the exact optimum");
    opt = exactOpt(inst).optimumValue;
  }
  RunReport report = runOne(inst, spec, o.seed, opt);
  if (!report.error.empty()) throw InputError(report.error);
  writeOutput(o.out, csvHeader() + "\n" + csvRow(report, !o.noTiming) + "\n");
  return 0;
}

int runOpt(const std::string& in, const std::string& outPath) {
  Instance inst = parseInstance(readFile(in));
  const ExactResult exact = exactOpt(inst);
  std::string text = "value," + formatG17(exact.optimumValue) + "\n";
  text += "members,";
  for (std::size_t i = 0; i < exact.optimumSet.size(); ++i)
    text += (i ? " " : "") + std::to_string(exact.optimumSet[i]);
  text += "\nenumerated," + std::to_string(exact.enumeratedCount) + "\n";
  writeOutput(outPath, text);
  return 0;
}

int runSuiteCommand(const std::string& configPath, const std::string& outPath, int jobs, bool noTiming) {
  const SuiteConfig cfg = parseSuiteConfig(readFile(configPath));
  writeOutput(outPath, runSuite(cfg, jobs, !noTiming));
  return 0;
}

int runVerify(const std::string& in, std::uint64_t seed, int trials) {
  Instance inst = parseInstance(readFile(in));
  const auto results = verifyInstance(inst, seed, trials);
  bool allPass = true;
  for (const CheckResult& r : results) {
    const char* tag = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
    std::cout << tag << " " << r.name << " - " << r.detail << "\n";
    if (!r.pass) allPass = false;
  }
  if (!allPass) throw InputError("verification failed");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"submodular maximization under knapsack constraints"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help"); // frees -h; the guess budget is spelled --h

  GenOptions gen;
  auto* cgen = app.add_subcommand("gen", "generate an instance file");
  cgen->add_option("--kind", gen.kind, "coverage | cut | modular");
  cgen->add_option("--seed", gen.seed, "generator seed");
  cgen->add_option("--d", gen.cost.d, "knapsack dimensions");
  cgen->add_option("--cost-min", gen.cost.costMin, "cost range lower end");
  cgen->add_option("--cost-max", gen.cost.costMax, "cost range upper end");
  cgen->add_flag("--small-mode", gen.cost.smallMode, "cap costs at epsilon^3");
  cgen->add_option("--epsilon", gen.cost.epsilon, "epsilon for small mode");
  cgen->add_option("--sets", gen.coverage.numSets, "coverage: number of sets");
  cgen->add_option("--items", gen.coverage.numItems, "coverage: number of items");
  cgen->add_option("--density", gen.coverage.density, "coverage: edge density");
  cgen->add_option("--profit-min", gen.coverage.profitMin, "coverage: item profit lower end");
  cgen->add_option("--profit-max", gen.coverage.profitMax, "coverage: item profit upper end");
  cgen->add_option("--vertices", gen.cut.numVertices, "cut: number of vertices");
  cgen->add_option("--edge-prob", gen.cut.edgeProb, "cut: edge probability");
  cgen->add_option("--weight-min", gen.weightMin, "cut/modular: weight lower end");
  cgen->add_option("--weight-max", gen.weightMax, "cut/modular: weight upper end");
  cgen->add_flag("--directed", gen.cut.directed, "cut: directed edges");
  cgen->add_option("--n", gen.modular.n, "modular: universe size");
  cgen->add_option("--out", gen.out, "output path (default stdout)");

  SolveOptions solve;
  auto* csolve = app.add_subcommand("solve", "solve an instance");
  csolve->set_help_flag("--help", "print help");
  csolve->add_option("--in", solve.in, "instance file")->required();
  csolve->add_option("--algorithm", solve.algorithm, "randomized | deterministic | bruteforce");
  csolve->add_option("--solver", solve.solver, "continuous solver: greedy | local | grid");
  csolve->add_option("--epsilon", solve.epsilon, "accuracy parameter in (0, 1)");
  csolve->add_option("--h", solve.h, "guess budget (default: min(prescribed, 3))");
  csolve->add_option("--seed", solve.seed, "random seed");
  csolve->add_option("--attempts", solve.attempts, "rounding attempts per guess");
  csolve->add_option("--steps", solve.continuous.steps, "greedy ascent steps");
  csolve->add_option("--samples", solve.continuous.samplesPerGradient, "samples per estimate");
  csolve->add_option("--grid", solve.continuous.gridDenominator, "grid denominator (2..16)");
  csolve->add_option("--restarts", solve.continuous.restarts, "local search restarts");
  csolve->add_flag("--opt", solve.withOpt, "also compute the exact optimum and ratio");
  csolve->add_flag("--no-timing", solve.noTiming, "write 0 in the wall_ms column");
  csolve->add_option("--out", solve.out, "output path (default stdout)");

  std::string optIn, optOut;
  auto* copt = app.add_subcommand("opt", "exact optimum by exhaustive search");
  copt->add_option("--in", optIn, "instance file")->required();
  copt->add_option("--out", optOut, "output path (default stdout)");

  std::string suiteConfig, suiteOut;
  int suiteJobs = 1;
  bool suiteNoTiming = false;
  auto* csuite = app.add_subcommand("suite", "run an experiment suite from a JSON config");
  csuite->add_option("--config", suiteConfig, "suite config file")->required();
  csuite->add_option("--out", suiteOut, "output CSV path (default stdout)");
  csuite->add_option("--jobs", suiteJobs, "worker threads");
  csuite->add_flag("--no-timing", suiteNoTiming, "write 0 in the wall_ms column");

  std::string verifyIn;
  std::uint64_t verifySeed = 1;
  int verifyTrials = 2000;
  auto* cverify = app.add_subcommand("verify", "run structural checks against an instance");
  cverify->add_option("--in", verifyIn, "instance file")->required();
  cverify->add_option("--seed", verifySeed, "seed for the randomized checks");
  cverify->add_option("--trials", verifyTrials, "probes per check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cgen->parsed()) return runGen(gen);
    if (csolve->parsed()) return runSolve(solve);
    if (copt->parsed()) return runOpt(optIn, optOut);
    if (csuite->parsed()) return runSuiteCommand(suiteConfig, suiteOut, suiteJobs, suiteNoTiming);
    if (cverify->parsed()) return runVerify(verifyIn, verifySeed, verifyTrials);
  } catch (const subknap::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const subknap::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
