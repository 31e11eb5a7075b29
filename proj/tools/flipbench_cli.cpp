#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "flipbench/errors.hpp"
#include "flipbench/harness.hpp"
#include "flipbench/machine.hpp"
#include "flipbench/por.hpp"
#include "flipbench/pzt.hpp"
#include "flipbench/rl.hpp"
#include "flipbench/sifp.hpp"
#include "flipbench/translate.hpp"

using namespace flipbench;

namespace {

enum Exit { kOk = 0, kWrongVerdict = 1, kParse = 2, kBudget = 3 };

struct Globals {
  std::uint64_t seed = 0;
  std::string format = "text";
  unsigned jobs = 1;
  std::size_t maxBits = 24;
  std::size_t fuel = machine::kDefaultFuel;

  bool tsv() const { return format == "tsv"; }
};

std::size_t envOr(const char* name, std::size_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    return std::stoul(v);
  } catch (const std::exception&) {
    throw ValidationError(std::string("environment variable ") + name + " is not a number");
  }
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw ValidationError("cannot write '" + path + "'");
}

std::vector<BitString> bitStrings(const std::vector<std::string>& words) {
  std::vector<BitString> out;
  for (const auto& w : words) out.push_back(BitString::parse(w));
  return out;
}

/// One input tuple per line, components separated by whitespace; '#' starts a comment.
std::vector<std::vector<BitString>> readInputs(const std::string& path) {
  std::vector<std::vector<BitString>> out;
  std::istringstream in(readFile(path));
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream words(line);
    std::vector<std::string> ws;
    for (std::string w; words >> w;) ws.push_back(w);
    if (!ws.empty()) out.push_back(bitStrings(ws));
  }
  return out;
}

std::string tupleStr(const std::vector<BitString>& t) {
  if (t.empty()) return "()";
  std::string out;
  for (const auto& s : t) out += (out.empty() ? "" : ",") + s.str();
  return out;
}

void parallelFor(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failureLock;
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> g(failureLock);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void printDistribution(const Globals& g, const Distribution& d) {
  for (const auto& [value, mass] : d.masses()) {
    std::cout << value.str() << (g.tsv() ? "\t" : " ") << mass.str() << "\n";
  }
}

rl::Env parseEnv(const std::vector<std::string>& bindings) {
  rl::Env env;
  for (const auto& b : bindings) {
    const auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--env expects name=bits, got '" + b + "'");
    env[b.substr(0, eq)] = BitString::parse(b.substr(eq + 1));
  }
  return env;
}

bool isBudget(const std::string& what) {
  return what.find("budget") != std::string::npos || what.find("fuel") != std::string::npos ||
         what.find("exceed") != std::string::npos || what.find("infeasible") != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  CLI::App app{"flipbench: randomized function algebras, languages, machines and polynomial zero testing"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "Seed for every random choice");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "tsv"}));
  app.add_option("--jobs", g.jobs, "Worker threads for independent inputs or trials")->check(CLI::PositiveNumber);

  int code = kOk;

  // measure / count / noterratic
  std::string formulaFile, inputsFile;
  std::vector<std::string> envBindings;
  std::size_t formulaBits = 20;
  bool classify = false;
  auto* measure = app.add_subcommand("measure", "Exact measure of the set of oracles satisfying a formula");
  measure->add_option("formula", formulaFile)->required();
  measure->add_option("--env", envBindings, "Free variable binding name=bits");
  measure->add_option("--max-bits", formulaBits, "Distinct oracle coordinates allowed per path");
  measure->add_flag("--classify", classify, "Also print the quantifier shape");
  measure->callback([&] {
    const auto f = rl::parseFormula(readFile(formulaFile));
    if (classify) std::cout << (g.tsv() ? "shape\t" : "shape ") << rl::toString(rl::classifySigmaB1(f)) << "\n";
    try {
      const auto mu = rl::measure(f, parseEnv(envBindings), {formulaBits, 64});
      std::cout << (g.tsv() ? "measure\t" : "") << mu.str() << "\n";
    } catch (const BudgetExceeded& e) {
      std::cout << "infeasible\n";
      std::cerr << e.what() << "\n";
      code = kBudget;
    }
  });

  auto* count = app.add_subcommand("count", "Counting fraction over packed oracle witnesses");
  count->add_option("formula", formulaFile)->required();
  count->add_option("--env", envBindings, "Free variable binding name=bits");
  count->add_option("--max-bits", formulaBits, "Cap on the number of relevant coordinates");
  count->callback([&] {
    const auto f = rl::parseFormula(readFile(formulaFile));
    const auto cf = rl::countingFraction(f, parseEnv(envBindings), {formulaBits, 64});
    if (g.tsv()) {
      std::cout << "count\t" << cf.count << "\t" << cf.total << "\n";
    } else {
      std::cout << cf.count << " / " << cf.total << "\n";
    }
  });

  std::string xVar = "x", yVar = "y";
  auto* noterratic = app.add_subcommand("noterratic", "Check that some y with |y| <= 1 has measure >= 2/3");
  noterratic->add_option("formula", formulaFile)->required();
  noterratic->add_option("--inputs", inputsFile, "One input per line")->required();
  noterratic->add_option("--max-bits", formulaBits, "Distinct oracle coordinates allowed per path");
  noterratic->add_option("--x-var", xVar, "Input variable");
  noterratic->add_option("--y-var", yVar, "Witness variable");
  noterratic->callback([&] {
    const auto f = rl::parseFormula(readFile(formulaFile));
    std::vector<BitString> inputs;
    for (const auto& t : readInputs(inputsFile)) {
      if (t.size() != 1) throw ValidationError("noterratic inputs take one string per line");
      inputs.push_back(t.front());
    }
    const auto report = rl::twoThirdsCheck(f, inputs, {formulaBits, 64}, xVar, yVar);
    bool budget = false;
    for (const auto& e : report.entries) {
      const std::string sep = g.tsv() ? "\t" : "  ";
      std::cout << e.input.str() << sep;
      if (!e.error.empty()) {
        std::cout << "error" << sep << e.error << "\n";
        budget = budget || isBudget(e.error);
        continue;
      }
      std::cout << (e.pass ? "pass" : "fail") << sep << "y=" << e.witness->str() << sep << "mu=" << e.best.str()
                << "\n";
    }
    if (!report.allPass()) code = budget ? kBudget : kWrongVerdict;
  });

  // por run | dist
  std::string programFile;
  std::vector<std::string> inputWords;
  auto* por = app.add_subcommand("por", "Evaluate POR programs");
  por->require_subcommand(1);
  auto* porRun = por->add_subcommand("run", "Evaluate once against a seeded oracle");
  auto* porDist = por->add_subcommand("dist", "Exact output distribution");
  for (auto* sc : {porRun, porDist}) {
    sc->add_option("program", programFile)->required();
    sc->add_option("--input", inputWords, "Argument (repeat for several; eps for the empty string)");
    sc->add_option("--max-bits", g.maxBits, "Random-bit budget per path");
  }
  porRun->callback([&] {
    const auto f = por::parse(readFile(programFile));
    Oracle oracle(g.seed);
    std::cout << por::evalPor(f, bitStrings(inputWords), oracle).str() << "\n";
  });
  porDist->callback([&] {
    const auto f = por::parse(readFile(programFile));
    printDistribution(g, harness::exactDist(f, bitStrings(inputWords), {g.maxBits, g.fuel}));
  });

  // compile
  std::string stage, inFile, outFile;
  std::size_t arity = 0;
  auto* compile = app.add_subcommand("compile", "Run one translator stage");
  compile->add_option("stage", stage)->required()->check(CLI::IsMember({"por-ra", "ra-la", "la-od", "od-stm", "stm-ptm"}));
  compile->add_option("in", inFile)->required();
  compile->add_option("out", outFile)->required();
  compile->add_option("--arity", arity, "Input count when the program does not fix one");
  compile->callback([&] {
    const std::string src = readFile(inFile);
    std::string result;
    if (stage == "por-ra") result = sifp::toString(translate::compilePorToRA(por::parse(src), arity));
    if (stage == "ra-la") result = sifp::toString(translate::compileRAtoLA(sifp::parse(src)));
    if (stage == "la-od") result = machine::toString(translate::compileLAtoMachine(sifp::parse(src), arity));
    if (stage == "od-stm") result = machine::toString(machine::odToCanonical(machine::parse(src)));
    if (stage == "stm-ptm") result = machine::toString(machine::splitStmToPtm(machine::parse(src)));
    writeFile(outFile, result);
    std::cout << "wrote " << outFile << "\n";
  });

  // sifp run
  bool trace = false;
  auto* sifpCmd = app.add_subcommand("sifp", "Run SIFP programs");
  sifpCmd->require_subcommand(1);
  auto* sifpRun = sifpCmd->add_subcommand("run", "Run once; flip reads a seeded oracle, randbit a seeded stream");
  sifpRun->add_option("program", programFile)->required();
  sifpRun->add_option("--input", inputWords, "Value of X1, X2, ... (repeat)");
  sifpRun->add_option("--fuel", g.fuel, "Rule applications allowed");
  sifpRun->add_flag("--trace", trace, "Print every assignment and random draw");
  sifpRun->callback([&] {
    const auto p = sifp::parse(readFile(programFile));
    const sifp::TraceSink sink = trace ? sifp::TraceSink([](const std::string& l) { std::cout << l << "\n"; })
                                       : sifp::TraceSink();
    const auto store = sifp::loadInputs(bitStrings(inputWords));
    if (sifp::flavor(p) == sifp::Flavor::LA) {
      Stream stream(g.seed);
      const auto r = sifp::runLA(p, store, stream, g.fuel, sink);
      if (trace) std::cout << "consumed " << r.consumed << "\n";
      std::cout << sifp::lookup(r.store, "R").str() << "\n";
    } else {
      Oracle oracle(g.seed);
      std::cout << sifp::lookup(sifp::runRA(p, store, oracle, g.fuel, sink), "R").str() << "\n";
    }
  });

  // machine run | dist
  std::string finite;
  auto* machineCmd = app.add_subcommand("machine", "Run stream machines and PTMs");
  machineCmd->require_subcommand(1);
  auto* machineRun = machineCmd->add_subcommand("run", "Run once on a seeded stream");
  machineRun->add_option("machine", programFile)->required();
  machineRun->add_option("--input", inputWords, "Input tape contents (repeat)");
  machineRun->add_option("--fuel", g.fuel, "Step limit");
  machineRun->add_option("--finite", finite, "Use this finite random string instead of a stream");
  machineRun->add_flag("--trace", trace, "Print every configuration");
  machineRun->callback([&] {
    const auto m = machine::parse(readFile(programFile));
    machine::RunResult r;
    if (machineRun->count("--finite")) {
      r = machine::runFstm(m, bitStrings(inputWords), BitString::parse(finite), g.fuel);
    } else {
      Stream stream(g.seed);
      r = machine::run(m, bitStrings(inputWords), stream, g.fuel, trace);
    }
    for (const auto& line : r.trace) std::cout << line << "\n";
    if (trace) std::cout << "steps " << r.steps << " consumed " << r.consumed << "\n";
    std::cout << r.output.str() << "\n";
  });
  auto* machineDist = machineCmd->add_subcommand("dist", "Exact output distribution");
  machineDist->add_option("machine", programFile)->required();
  machineDist->add_option("--input", inputWords, "Input tape contents (repeat)");
  machineDist->add_option("--fuel", g.fuel, "Step limit per path");
  machineDist->add_option("--max-bits", g.maxBits, "Random-bit budget per path");
  machineDist->callback([&] {
    const auto m = machine::parse(readFile(programFile));
    printDistribution(g, harness::exactDist(m, bitStrings(inputWords), {g.maxBits, g.fuel}));
  });

  // equiv
  std::size_t maxLen = 3;
  auto* equiv = app.add_subcommand("equiv", "Compare exact distributions across the whole translation chain");
  equiv->add_option("program", programFile)->required();
  equiv->add_option("--inputs", inputsFile, "One input tuple per line (default: all tuples up to --max-len)");
  equiv->add_option("--max-len", maxLen, "Longest generated input");
  equiv->add_option("--arity", arity, "Input count when the program does not fix one");
  equiv->add_option("--max-bits", g.maxBits, "Random-bit budget per path");
  equiv->add_option("--fuel", g.fuel, "Step limit per path");
  equiv->callback([&] {
    const auto f = por::parse(readFile(programFile));
    const auto inputs = inputsFile.empty() ? harness::allInputs(por::arity(*f).value_or(arity), maxLen)
                                           : readInputs(inputsFile);
    std::vector<harness::ChainReport> parts(inputs.size());
    parallelFor(inputs.size(), g.jobs, [&](std::size_t i) {
      parts[i] = harness::checkChain(f, {inputs[i]}, {g.maxBits, g.fuel});
    });
    const std::string sep = g.tsv() ? "\t" : "  ";
    bool all = true, budget = false;
    for (const auto& part : parts) {
      if (part.compileFailure) {
        std::cout << harness::toString(*part.compileFailure) << sep << "-" << sep << "-" << sep
                  << "compile error: " << part.compileError << "\n";
        code = kWrongVerdict;
        return;
      }
      for (const auto& row : part.rows) {
        for (const auto& s : row.stages) {
          std::cout << harness::toString(s.stage) << sep << tupleStr(row.input) << sep
                    << (s.dist ? s.dist->str() : "-") << sep
                    << (s.dist ? (s.equal ? "equal" : "different") : "error: " + s.error) << "\n";
          budget = budget || (!s.dist && isBudget(s.error));
        }
        all = all && row.allEqual();
      }
    }
    std::cout << (all ? "all stages equal" : "stages differ") << "\n";
    if (!all) code = budget ? kBudget : kWrongVerdict;
  });

  // pzt and pit
  pzt::PztOptions pztOpts;
  std::size_t iters = 0, trials = 1000;
  std::string circuitFile, otherCircuit, mRange = "4..10";
  pzt::SzFamily family;
  bool exact = false;
  auto addPztOptions = [&](CLI::App* sc) {
    sc->add_option("--iters", iters, "Rounds (default 37 m)");
    sc->add_option("--rho", pztOpts.rho, "Circuits with fewer nodes are decided exactly");
  };
  auto applyIters = [&] {
    if (iters > 0) pztOpts.iterations = iters;
  };
  auto* pztCmd = app.add_subcommand("pzt", "Polynomial zero testing");
  pztCmd->require_subcommand(1);
  auto* pztTest = pztCmd->add_subcommand("test", "One run of the randomized zero test");
  pztTest->add_option("circuit", circuitFile)->required();
  addPztOptions(pztTest);
  pztTest->callback([&] {
    applyIters();
    const auto c = pzt::Circuit::parse(readFile(circuitFile));
    const auto r = pzt::pztRun(c, g.seed, pztOpts);
    std::cout << (r.accept ? "accept" : "reject") << "\n";
  });
  auto* pztRate = pztCmd->add_subcommand("error-rate", "Disagreement with the exact test over seeded trials");
  pztRate->add_option("circuit", circuitFile)->required();
  pztRate->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
  addPztOptions(pztRate);
  pztRate->callback([&] {
    applyIters();
    const auto c = pzt::Circuit::parse(readFile(circuitFile));
    const bool truth = pzt::hOracle(c);
    std::vector<char> wrong(trials, 0);
    parallelFor(trials, g.jobs, [&](std::size_t t) {
      wrong[t] = pzt::pztRun(c, trialSeed(g.seed, t), pztOpts).accept != truth;
    });
    std::size_t w = 0;
    for (char x : wrong) w += x;
    const auto ci = pzt::wilson(w, trials, pzt::kZ99);
    if (g.tsv()) {
      std::cout << "wrong\ttotal\tlo99\thi99\n" << w << "\t" << trials << "\t" << ci.lo << "\t" << ci.hi << "\n";
    } else {
      std::cout << "exact verdict: " << (truth ? "zero" : "nonzero") << "\nwrong " << w << " of " << trials
                << "\nwilson 99%: [" << ci.lo << ", " << ci.hi << "]\n";
    }
  });
  auto* pztSz = pztCmd->add_subcommand("sz-check", "Exhaustive Schwartz-Zippel check");
  pztSz->add_option("--max-vars", family.maxVars);
  pztSz->add_option("--max-degree", family.maxDegree);
  pztSz->add_option("--coef-lo", family.coefLo);
  pztSz->add_option("--coef-hi", family.coefHi);
  pztSz->add_option("--point-lo", family.pointLo);
  pztSz->add_option("--point-hi", family.pointHi);
  pztSz->callback([&] {
    const auto r = pzt::szCheck(family);
    const std::string sep = g.tsv() ? "\t" : " ";
    std::cout << "checked" << sep << r.checked << "\nviolations" << sep << r.violations << "\nworst-ratio" << sep
              << r.worstRatio << "\n";
    if (r.violations) {
      std::cout << "first" << sep << r.firstViolation << "\n";
      code = kWrongVerdict;
    }
  });
  auto* pztPrimes = pztCmd->add_subcommand("primes", "pi(2^(2m)) >= 2^(2m)/(8m) by sieve");
  pztPrimes->add_option("--m-range", mRange, "a..b");
  pztPrimes->callback([&] {
    const auto dots = mRange.find("..");
    if (dots == std::string::npos) throw ValidationError("--m-range expects a..b");
    std::size_t lo = 0, hi = 0;
    try {
      lo = std::stoul(mRange.substr(0, dots));
      hi = std::stoul(mRange.substr(dots + 2));
    } catch (const std::exception&) {
      throw ValidationError("--m-range expects a..b");
    }
    const std::string sep = g.tsv() ? "\t" : "  ";
    for (const auto& row : pzt::primeDensityCheck(lo, hi)) {
      std::cout << "m=" << row.m << sep << "pi(" << row.limit << ")=" << row.primes << sep
                << "bound=" << row.limit << "/" << 8 * row.m << sep << (row.pass ? "pass" : "fail") << "\n";
      if (!row.pass) code = kWrongVerdict;
    }
  });
  auto* pit = app.add_subcommand("pit", "Polynomial identity test of two circuits via their difference");
  pit->add_option("p", circuitFile)->required();
  pit->add_option("q", otherCircuit)->required();
  pit->add_flag("--exact", exact, "Use full expansion instead of the randomized test");
  addPztOptions(pit);
  pit->callback([&] {
    applyIters();
    const auto diff =
        pzt::pitToPzt(pzt::Circuit::parse(readFile(circuitFile)), pzt::Circuit::parse(readFile(otherCircuit)));
    const bool same = exact ? pzt::hOracle(diff) : pzt::pztRun(diff, g.seed, pztOpts).accept;
    std::cout << (same ? "accept" : "reject") << "\n";
  });

  try {
    g.maxBits = envOr("FLIPBENCH_MAX_BITS", g.maxBits);
    g.fuel = envOr("FLIPBENCH_FUEL", g.fuel);
    formulaBits = envOr("FLIPBENCH_FORMULA_BITS", formulaBits);
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kParse;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const FuelExhausted& e) {
    std::cerr << "fuel exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const RandomnessExhausted& e) {
    std::cerr << "randomness exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kWrongVerdict;
  }
  return code;
}
