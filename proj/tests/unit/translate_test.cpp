#include <doctest.h>

#include "flipbench/machine.hpp"
#include "flipbench/por.hpp"
#include "flipbench/sifp.hpp"
#include "flipbench/translate.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace flipbench;
using translate::compileLAtoMachine;
using translate::compilePorToRA;
using translate::compileRAtoLA;

namespace {

BitString bs(const char* s) { return BitString::parse(s); }

std::vector<BitString> randomArgs(gen::Gen& g, std::size_t arity) {
  std::vector<BitString> args;
  for (std::size_t i = 0; i < arity; ++i) args.push_back(g.upTo(3));
  return args;
}

/// First-query order of flip coordinates in a traced RA run, with their bits.
std::vector<std::pair<std::string, bool>> firstQueries(const sifp::StmtPtr& p, const std::vector<BitString>& args,
                                                       OracleAccess& o) {
  std::vector<std::pair<std::string, bool>> out;
  std::set<std::string> seen;
  sifp::runRA(p, sifp::loadInputs(args), o, sifp::kDefaultFuel, [&](const std::string& l) {
    if (l.rfind("flip ", 0) != 0) return;
    const auto coord = l.substr(5, l.find(" -> ") - 5);
    if (seen.insert(coord).second) out.emplace_back(coord, l.back() == '1');
  });
  return out;
}

}  // namespace

TEST_CASE("base cases compile to single statements") {
  CHECK(sifp::toString(compilePorToRA(por::E(), 1)) == "R := eps\n");
  CHECK(sifp::toString(compilePorToRA(por::query())) == "flip X1\n");
  CHECK(sifp::toString(compilePorToRA(por::proj(3, 2))) == "R := X2\n");
  CHECK(sifp::toString(compilePorToRA(por::succ(true))) == "R := X1.1\n");
}

TEST_CASE("composition of successor and query") {
  auto f = por::comp(por::succ(false), {por::query()});
  auto p = compilePorToRA(f);
  Oracle o(1);
  o.assign(bs("01"), true);
  CHECK(sifp::evalProgramRA(p, {bs("01")}, o) == bs("10"));
  CHECK(por::evalPor(f, {bs("01")}, o) == bs("10"));
}

TEST_CASE("compiled RA programs agree with the algebra on every oracle") {
  gen::Gen g(71);
  for (const auto& e : corpus::porPrograms()) {
    const auto p = compilePorToRA(e.f, e.arity);
    for (int t = 0; t < 25; ++t) {
      const auto args = randomArgs(g, e.arity);
      Oracle o(g.word());
      REQUIRE_MESSAGE(sifp::evalProgramRA(p, args, o) == por::evalPor(e.f, args, o), e.name);
    }
  }
}

TEST_CASE("compiled programs never write their inputs") {
  for (const auto& e : corpus::porPrograms()) {
    std::vector<std::string> assigned;
    const auto p = compilePorToRA(e.f, e.arity);
    Oracle o(3);
    std::vector<BitString> args(e.arity, bs("01"));
    sifp::runRA(p, sifp::loadInputs(args), o, sifp::kDefaultFuel, [&](const std::string& l) {
      if (l.rfind("X", 0) == 0) assigned.push_back(l);
    });
    REQUIRE_MESSAGE(assigned.empty(), e.name);
  }
}

TEST_CASE("memo translation of single and repeated flips") {
  const auto once = compileRAtoLA(sifp::flip(sifp::eps()));
  const auto twice = compileRAtoLA(sifp::seq(sifp::flip(sifp::eps()), sifp::flip(sifp::eps())));
  for (const auto& p : {once, twice}) {
    CHECK(sifp::flavor(p) == sifp::Flavor::LA);
    for (bool bit : {false, true}) {
      Stream s(BitString::repeat(bit, 1), 5);
      const auto r = sifp::runLA(p, {}, s);
      CHECK(r.consumed == 1);
      CHECK(sifp::lookup(r.store, "R") == BitString::repeat(bit, 1));
    }
  }
}

TEST_CASE("memo translation consumes one bit per distinct coordinate") {
  gen::Gen g(72);
  for (const auto& e : corpus::porPrograms()) {
    const auto ra = compilePorToRA(e.f, e.arity);
    const auto la = compileRAtoLA(ra);
    for (int t = 0; t < 15; ++t) {
      const auto args = randomArgs(g, e.arity);
      Oracle o(g.word());
      const auto queries = firstQueries(ra, args, o);
      BitString stream;
      for (const auto& [coord, bit] : queries) stream.push_back(bit);
      Stream s(stream, g.word());
      const auto r = sifp::runLA(la, sifp::loadInputs(args), s);
      REQUIRE_MESSAGE(r.consumed == queries.size(), e.name);
      Oracle replay(o.seed());
      REQUIRE(sifp::lookup(r.store, "R") == sifp::evalProgramRA(ra, args, replay));
    }
  }
}

TEST_CASE("machine translation of small programs") {
  Stream s(bs("1"), 0);
  auto r = machine::run(compileLAtoMachine(sifp::assign("R", sifp::app1(sifp::eps()))), {}, s);
  CHECK(r.output == bs("1"));
  CHECK(r.consumed == 0);

  for (bool bit : {false, true}) {
    Stream one(BitString::repeat(bit, 1), 0);
    r = machine::run(compileLAtoMachine(sifp::randBit()), {}, one);
    CHECK(r.consumed == 1);
    CHECK(r.output == BitString::repeat(bit, 1));
  }

  Stream none(0);
  const auto loop = sifp::whileDo(sifp::id("R"), sifp::assign("R", sifp::eps()));
  r = machine::run(compileLAtoMachine(loop), {}, none);
  CHECK(r.output.empty());
  CHECK(r.consumed == 0);
}

TEST_CASE("compiled machines agree with the LA programs on every stream") {
  gen::Gen g(73);
  for (const auto& e : corpus::porPrograms()) {
    const auto la = compileRAtoLA(compilePorToRA(e.f, e.arity));
    const auto m = compileLAtoMachine(la, e.arity);
    CHECK((m.kind == machine::Kind::OnDemand));
    for (int t = 0; t < 8; ++t) {
      const auto args = randomArgs(g, e.arity);
      const auto seed = g.word();
      Stream a(seed), b(seed);
      const auto lr = sifp::runLA(la, sifp::loadInputs(args), a);
      const auto mr = machine::run(m, args, b);
      REQUIRE_MESSAGE(mr.output == sifp::lookup(lr.store, "R"), e.name);
      REQUIRE(mr.consumed == lr.consumed);
    }
  }
}

TEST_CASE("deterministic register programs compile faithfully") {
  const auto p = sifp::parse(
      "Y1 := eps.1 ; while Y1 { Y1 := eps ; Z := X1.1 } ; R := X2 and Y2 ; T := eps.1 ; "
      "R := (eps.0 sub X1) ; Q := not R ; R := Q.0.1 ; Y2 := R.0 sub Z ; R := R.1 and Y2");
  const auto m = compileLAtoMachine(p, 2);
  for (const auto& x : stringsUpTo(2)) {
    for (const auto& y : stringsUpTo(2)) {
      Stream s(0), t(0);
      const auto expected = sifp::runLA(p, sifp::loadInputs({x, y}), s);
      REQUIRE(machine::run(m, {x, y}, t).output == sifp::lookup(expected.store, "R"));
    }
  }
}
