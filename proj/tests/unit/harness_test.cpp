#include <doctest.h>

#include <cmath>

#include "flipbench/errors.hpp"
#include "flipbench/harness.hpp"
#include "flipbench/translate.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace flipbench;
using namespace flipbench::harness;

namespace {

BitString bs(const char* s) { return BitString::parse(s); }

const Distribution kCoin({{BitString::parse("0"), DyadicRational::pow2(1)},
                          {BitString::parse("1"), DyadicRational::pow2(1)}});

}  // namespace

TEST_CASE("query is a fair coin") {
  for (const auto& s : stringsUpTo(2)) CHECK(exactDist(por::query(), {s}) == kCoin);
}

TEST_CASE("memoized coordinates give a two-leaf tree") {
  const auto p = sifp::parse("flip eps ; flip eps");
  const auto outcome = exactOutcome(RaProgram{p}, {});
  CHECK(outcome.leaves == 2);
  CHECK(outcome.distribution() == kCoin);
}

TEST_CASE("stage names") {
  std::vector<std::string> names;
  for (auto s : kStages) names.push_back(toString(s));
  CHECK(names == std::vector<std::string>{"por", "sifp-ra", "sifp-la", "od-stm", "stm", "ptm"});
}

TEST_CASE("input tuples") {
  CHECK(allInputs(1, 3).size() == 15);
  CHECK(allInputs(2, 1).size() == 9);
  CHECK(allInputs(0, 3) == std::vector<std::vector<BitString>>{{}});
}

TEST_CASE("exact distributions match a reference enumeration of oracle tables") {
  for (const auto& e : corpus::porPrograms()) {
    for (const auto& args : allInputs(e.arity, 2)) {
      const auto ref = oracle::lazyTableMasses([&](OracleAccess& o) { return por::evalPor(e.f, args, o); });
      const auto d = exactDist(e.f, args);
      REQUIRE_MESSAGE(d == oracle::toDistribution(ref), e.name);
      DyadicRational sum;
      for (const auto& [v, m] : d.masses()) sum += m;
      REQUIRE(sum == DyadicRational::one());
    }
  }
}

TEST_CASE("linear enumeration has one leaf per consumed bit pattern") {
  const auto la = translate::compileRAtoLA(translate::compilePorToRA(por::extractorFn()));
  for (std::size_t L = 0; L <= 3; ++L) {
    const auto outcome = exactOutcome(LaProgram{la}, {BitString::repeat(true, L)});
    CHECK(outcome.leaves == (std::size_t{1} << L));
    CHECK(outcome.maxDepth == L);
    CHECK(outcome.distribution() == Distribution::uniform(L));
  }
}

TEST_CASE("budget overruns surface as errors") {
  CHECK_THROWS_AS(exactDist(por::extractorFn(), {bs("11111")}, {3, 100000}), BudgetExceeded);
  const auto outcome = exactOutcome(por::extractorFn(), {bs("11111")}, {3, 100000});
  CHECK(outcome.budgetExceeded);
  CHECK_FALSE(outcome.complete());
}

TEST_CASE("sampling agrees with the exact distribution") {
  const auto counts = sampleDist(por::query(), {bs("01")}, 4096, 17);
  CHECK(counts.trials == 4096);
  CHECK(counts.failures == 0);
  const auto zeros = counts.counts.at(bs("0"));
  CHECK(std::abs(static_cast<double>(zeros) - 2048.0) < 4 * 32.0);

  std::size_t checked = 0, within = 0;
  const std::size_t trials = 2000;
  for (const auto& e : corpus::porPrograms()) {
    const std::vector<BitString> args(e.arity, bs("01"));
    const auto exact = exactDist(e.f, args);
    const auto sample = sampleDist(e.f, args, trials, 99);
    REQUIRE(sample.failures == 0);
    for (const auto& [v, m] : exact.masses()) {
      const double p = m.toDouble();
      const auto it = sample.counts.find(v);
      const double freq = it == sample.counts.end() ? 0.0 : static_cast<double>(it->second) / trials;
      ++checked;
      within += std::abs(freq - p) <= 4 * std::sqrt(p * (1 - p) / trials) + 1e-12;
    }
  }
  CHECK(within * 100 >= checked * 95);
}

TEST_CASE("the chain preserves distributions for the query function") {
  const auto report = checkChain(por::query(), {{bs("eps")}, {bs("0")}, {bs("1")}});
  CHECK_FALSE(report.compileFailure.has_value());
  REQUIRE(report.rows.size() == 3);
  CHECK(report.allEqual());
  for (const auto& row : report.rows) {
    REQUIRE(row.stages.size() == 6);
    for (const auto& s : row.stages) CHECK(*s.dist == kCoin);
  }
}

TEST_CASE("the chain preserves distributions for recursion over two queries") {
  for (const auto& e : corpus::porPrograms()) {
    if (e.name != "prefix-bits" && e.name != "adaptive-chain") continue;
    const auto report = checkChain(e.f, allInputs(1, 2));
    CHECK_MESSAGE(report.allEqual(), e.name);
  }
}

TEST_CASE("chain models expose every stage") {
  const auto chain = buildChain(por::query());
  CHECK(std::holds_alternative<por::PorPtr>(chain.model(Stage::Por)));
  CHECK(std::holds_alternative<machine::Machine>(chain.model(Stage::Ptm)));
  CHECK((chain.stm.kind == machine::Kind::Stream));
  CHECK((chain.ptm.kind == machine::Kind::Ptm));
}

TEST_CASE("sequential composition of two coin machines") {
  const auto coin = corpus::machineNamed("append-coin");
  const auto composed = composeMachines(coin, coin);
  CHECK(exactDist(composed, {bs("eps")}) == Distribution::uniform(2));
  const auto report = checkMonadicCompose(coin, coin, {bs("eps"), bs("1")});
  CHECK(report.allEqual());
}

TEST_CASE("composition of a constant with a coin") {
  const auto report = checkMonadicCompose(corpus::machineNamed("constant-one"),
                                          corpus::machineNamed("erase-then-coin"), {bs("eps"), bs("01")});
  CHECK(report.allEqual());
  for (const auto& row : report.rows) CHECK(*row.composed == kCoin);
}

TEST_CASE("composition requires matching kinds") {
  const auto od = corpus::machineNamed("identity");
  CHECK_THROWS_AS(composeMachines(od, machine::odToCanonical(od)), ValidationError);
}
