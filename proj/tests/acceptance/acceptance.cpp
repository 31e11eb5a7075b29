#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "flipbench/circuit.hpp"
#include "flipbench/errors.hpp"
#include "flipbench/harness.hpp"
#include "flipbench/por.hpp"
#include "flipbench/pzt.hpp"
#include "flipbench/rl.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace flipbench;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

struct Criterion {
  int id;
  std::string name;
  double limitSeconds;
  std::function<void(Verdict&)> body;
};

void cylinders(Verdict& v) {
  const auto all = stringsUpTo(4);
  const std::vector<BitString> sigmas(all.begin(), all.begin() + 20);
  const auto half = DyadicRational::pow2(1), quarter = DyadicRational::pow2(2);
  std::size_t pairs = 0;
  for (const auto& s : sigmas) {
    v.require(rl::measure(rl::flip(rl::literal(s)), {}) == half, "Flip(" + s.str() + ")");
    for (const auto& t : sigmas) {
      const auto both = rl::conj(rl::flip(rl::literal(s)), rl::flip(rl::literal(t)));
      v.require(rl::measure(both, {}) == (s == t ? half : quarter), "Flip(" + s.str() + ") & Flip(" + t.str() + ")");
      ++pairs;
    }
  }
  v.detail << sigmas.size() << " cylinders, " << pairs << " ordered pairs";
}

void derandomization(Verdict& v) {
  gen::Gen g(20240601);
  std::size_t accepted = 0, nontrivial = 0;
  std::size_t byBound[4] = {0, 0, 0, 0};
  while (accepted < 60) {
    const auto f = gen::formula(g, 1 + g.below(3));
    const auto L = rl::relevantBound(f, {});
    if (L > 3 || byBound[L] >= 15) continue;
    ++accepted;
    ++byBound[L];
    const auto mu = rl::measure(f, {});
    const auto cf = rl::countingFraction(f, {});
    const auto [hits, total] = oracle::formulaCount(f, {}, L);
    const auto text = rl::toString(f);
    v.require(oracle::equalsFraction(mu, cf.count, cf.total), "count/total != measure for " + text);
    v.require(cf.count == hits && cf.total == total, "reference count differs for " + text);
    nontrivial += !mu.isZero() && mu != DyadicRational::one();
  }
  v.require(nontrivial >= 10, "too few formulas with a non-trivial measure");
  v.detail << accepted << " formulas (" << byBound[0] << "/" << byBound[1] << "/" << byBound[2] << "/" << byBound[3]
           << " with bound 0/1/2/3), " << nontrivial << " with measure strictly between 0 and 1";
}

void chain(Verdict& v) {
  std::size_t programs = 0, rows = 0;
  for (const auto& e : corpus::porPrograms()) {
    const auto inputs = harness::allInputs(e.arity, 3);
    const auto report = harness::checkChain(e.f, inputs);
    v.require(!report.compileFailure, e.name + " failed to compile: " + report.compileError);
    for (const auto& row : report.rows) {
      for (const auto& s : row.stages) {
        v.require(s.dist.has_value() && s.equal, e.name + " stage " + harness::toString(s.stage) + " on " +
                                                      (row.input.empty() ? "()" : row.input.front().str()) +
                                                      (s.error.empty() ? "" : ": " + s.error));
      }
      const auto ref = oracle::lazyTableMasses([&](OracleAccess& o) { return por::evalPor(e.f, row.input, o); });
      v.require(row.stages.front().dist && *row.stages.front().dist == oracle::toDistribution(ref),
                e.name + " differs from the reference enumeration");
      ++rows;
    }
    v.require(report.rows.size() == inputs.size(), e.name + " is missing rows");
    ++programs;
  }
  v.require(programs >= 10, "corpus too small");
  v.detail << programs << " programs, " << rows << " inputs, 6 stages each";
}

void composition(Verdict& v) {
  std::size_t pairs = 0;
  for (const auto& [a, b] : corpus::machinePairs()) {
    const auto m1 = corpus::machineNamed(a), m2 = corpus::machineNamed(b);
    const std::vector<std::pair<machine::Machine, machine::Machine>> kinds{
        {m1, m2},
        {machine::odToCanonical(m1), machine::odToCanonical(m2)},
        {machine::splitStmToPtm(machine::odToCanonical(m1)), machine::splitStmToPtm(machine::odToCanonical(m2))}};
    for (const auto& [x, y] : kinds) {
      const auto report = harness::checkMonadicCompose(x, y, stringsUpTo(2));
      std::string err;
      for (const auto& r : report.rows) {
        if (!r.error.empty()) err = r.error;
      }
      v.require(report.allEqual(), b + " after " + a + " (" + machine::toString(x.kind) + ") " + err);
      ++pairs;
    }
  }
  v.require(pairs >= 5, "too few pairs");
  v.detail << pairs << " machine pairs over inputs of length <= 2";
}

void oneSided(Verdict& v) {
  const std::size_t trials = 10000;
  std::size_t circuits = 0;
  for (const auto& e : corpus::zeroCircuits()) {
    v.require(pzt::hOracle(e.c), e.name + " is not identically zero");
    std::size_t rejections = 0;
    for (std::size_t t = 0; t < trials; ++t) rejections += !pzt::pztRun(e.c, trialSeed(7001, t)).accept;
    v.require(rejections == 0, e.name + " rejected " + std::to_string(rejections) + " times");
    ++circuits;
  }
  v.require(circuits >= 10, "too few zero circuits");
  v.detail << circuits << " zero circuits x " << trials << " runs, no rejection";
}

void twoSided(Verdict& v) {
  const std::size_t trials = 10000;
  std::size_t circuits = 0;
  double worst = 0;
  for (const auto& e : corpus::nonzeroCircuits()) {
    v.require(pzt::circuitStats(e.c).m >= 10, e.name + " has fewer than 10 nodes");
    const auto er = pzt::errorRate(e.c, trials, 7002);
    v.require(!er.truth, e.name + " is identically zero");
    v.require(er.wrong * 3 <= er.total, e.name + " error rate above 1/3");
    v.require(er.wilson99.hi < 1.0 / 3.0, e.name + " Wilson upper bound not below 1/3");
    worst = std::max(worst, er.wilson99.hi);
    ++circuits;
  }
  v.require(circuits >= 10, "too few non-zero circuits");
  v.detail << circuits << " non-zero circuits x " << trials << " trials, worst 99% upper bound " << worst;
}

void schwartzZippel(Verdict& v) {
  pzt::SzFamily fam;
  fam.maxVars = 2;
  fam.maxDegree = 3;
  fam.coefLo = -2;
  fam.coefHi = 2;
  fam.pointLo = 0;
  fam.pointHi = 4;
  const auto r = pzt::szCheck(fam);
  v.require(r.violations == 0, "violation: " + r.firstViolation);
  v.require(r.checked > 0, "no polynomial checked");
  v.detail << r.checked << " polynomials, worst roots/bound " << r.worstRatio;
}

void primeDensity(Verdict& v) {
  const auto rows = pzt::primeDensityCheck(4, 10);
  v.require(rows.size() == 7, "expected m = 4..10");
  for (const auto& r : rows) {
    v.require(r.pass, "m = " + std::to_string(r.m));
    v.require(r.primes * 8 * r.m >= r.limit, "bound recomputation for m = " + std::to_string(r.m));
  }
  v.require(rows.front().primes == 54, "pi(256) should be 54");
  v.detail << "m = 4..10, pi(2^20) = " << rows.back().primes;
}

void extractor(Verdict& v) {
  for (std::size_t L = 0; L <= 4; ++L) {
    const auto x = BitString::repeat(true, L);
    const auto native = enumeratePaths(
        [&](const std::vector<bool>& d) {
          DecisionOracle o(d);
          return por::extractorE(x, o);
        },
        16);
    v.require(native.distribution() == Distribution::uniform(L), "native extractor at L = " + std::to_string(L));
    v.require(harness::exactDist(por::extractorFn(), {x}) == Distribution::uniform(L),
              "algebraic extractor at L = " + std::to_string(L));
    const auto ref = oracle::lazyTableMasses([&](OracleAccess& o) { return por::extractorE(x, o); });
    v.require(oracle::toDistribution(ref) == Distribution::uniform(L), "reference at L = " + std::to_string(L));
  }
  v.detail << "L = 0..4 exactly uniform";
}

void modK(Verdict& v) {
  gen::Gen g(7010);
  std::size_t identities = 0;
  for (int i = 0; i < 500; ++i) {
    const auto a = g.bigInt(4), b = g.bigInt(4);
    const BigInt k = abs(g.bigInt(2)) + 1;
    const auto ak = pzt::modCanonical(a, k), bk = pzt::modCanonical(b, k);
    v.require(ak == oracle::floorMod(a, k), "canonical residue");
    v.require(pzt::addMod(ak, bk, k) == oracle::floorMod(a + b, k), "sum of residues");
    v.require(pzt::mulMod(ak, bk, k) == oracle::floorMod(a * b, k), "product of residues");
    v.require(pzt::subMod(ak, bk, k) == oracle::floorMod(a - b, k), "difference of residues");
    if (pzt::mulMod(ak, bk, k) != 0) v.require(a * b != 0, "non-zero residue of a zero value");
    ++identities;
  }
  v.detail << identities << " random (a, b, k) triples";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "cylinder exactness", 1, cylinders},
      {2, "de-randomization equality", 60, derandomization},
      {3, "translation-chain preservation", 300, chain},
      {4, "monadic composition", 60, composition},
      {5, "PZT one-sided error", 120, oneSided},
      {6, "PZT two-sided bound", 600, twoSided},
      {7, "Schwartz-Zippel bound", 120, schwartzZippel},
      {8, "prime density", 60, primeDensity},
      {9, "extractor uniformity", 10, extractor},
      {10, "mod-k compatibility", 5, modK},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.require(secs < c.limitSeconds, "over the time limit");
    failed += !v.pass;
    std::printf("%s %2d %-32s %8.2f s  %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
