#include <doctest.h>

#include "flipbench/distribution.hpp"
#include "flipbench/dyadic.hpp"
#include "flipbench/errors.hpp"
#include "flipbench/randomness.hpp"
#include "support/generators.hpp"

using namespace flipbench;

namespace {

BitString bs(const char* s) { return BitString::parse(s); }
DyadicRational q(const char* s) { return DyadicRational::parse(s); }

DyadicRational total(const Distribution& d) {
  DyadicRational sum;
  for (const auto& [v, m] : d.masses()) sum += m;
  return sum;
}

}  // namespace

TEST_CASE("dyadic rationals stay canonical") {
  CHECK(DyadicRational(BigInt(2), 2) == q("1/2"));
  CHECK(q("2/4").exponent() == 1);
  CHECK(q("6/2^3").str() == "3/4");
  CHECK(q("0/2^9") == DyadicRational::zero());
  CHECK((q("1/2") + q("1/4")).str() == "3/4");
  CHECK((q("1/2") * q("1/2")).str() == "1/4");
  CHECK((DyadicRational::one() - q("1/8")).str() == "7/8");
  CHECK_THROWS_AS(q("1/4") - q("1/2"), Error);
  CHECK_THROWS(q("1/3"));
  CHECK(q("3/4") > q("1/2"));
  CHECK(q("3/4").atLeast(2, 3));
  CHECK_FALSE(q("1/2").atLeast(2, 3));
  CHECK(q("1/2").atLeast(1, 2));
  CHECK_FALSE(q("1/2").greaterThan(1, 2));
  CHECK(q("5/2^3").serialize() == "5/2^3");
}

TEST_CASE("dyadic arithmetic matches integer arithmetic on scaled numerators") {
  gen::Gen g(21);
  for (int i = 0; i < 500; ++i) {
    const unsigned ea = static_cast<unsigned>(g.below(10)), eb = static_cast<unsigned>(g.below(10));
    const BigInt na = g.below(1000), nb = g.below(1000);
    const DyadicRational a(na, ea), b(nb, eb);
    const unsigned e = ea + eb;
    const BigInt sa = na << eb, sb = nb << ea;
    REQUIRE(a + b == DyadicRational(sa + sb, e));
    REQUIRE(a * b == DyadicRational(na * nb, e));
    REQUIRE((a < b) == (sa < sb));
    if (sa >= sb) REQUIRE(a - b == DyadicRational(sa - sb, e));
  }
}

TEST_CASE("distribution validation") {
  CHECK_NOTHROW(Distribution({{bs("0"), q("1/2")}, {bs("1"), q("1/2")}}));
  CHECK_THROWS_AS(Distribution({{bs("0"), q("1/2")}}), ValidationError);
  CHECK_THROWS_AS(Distribution({{bs("0"), q("1")}, {bs("1"), q("0")}}), ValidationError);
  CHECK(Distribution::dirac(bs("01")).mass(bs("01")) == DyadicRational::one());
  CHECK(Distribution::uniform(3).support() == 8);
  CHECK(Distribution::uniform(3).mass(bs("101")) == q("1/8"));
}

TEST_CASE("distribution serialization round trips") {
  const Distribution d({{bs("eps"), q("1/4")}, {bs("10"), q("3/4")}});
  CHECK(d.serialize() == "eps 1/2^2\n10 3/2^2\n");
  CHECK(Distribution::parse(d.serialize()) == d);
  gen::Gen g(22);
  for (int i = 0; i < 100; ++i) {
    auto r = gen::distribution(g);
    REQUIRE(Distribution::parse(r.serialize()) == r);
  }
}

TEST_CASE("monadic composition by hand") {
  const Kernel k = [](const BitString& rho) {
    if (rho == bs("0")) return Distribution({{bs("eps"), q("1/2")}, {bs("0"), q("1/2")}});
    return Distribution::dirac(bs("eps"));
  };
  const Distribution f({{bs("0"), q("1/2")}, {bs("1"), q("1/2")}});
  const auto out = monadicCompose(k, f);
  CHECK(out == Distribution({{bs("eps"), q("3/4")}, {bs("0"), q("1/4")}}));

  // Brute force: each (rho, tau) pair contributes f(rho) * k(rho)(tau).
  std::map<BitString, DyadicRational> brute;
  for (const auto& [rho, p] : f.masses()) {
    const auto next = k(rho);
    for (const auto& [tau, r] : next.masses()) brute[tau] += p * r;
  }
  CHECK(out.masses() == brute);
}

TEST_CASE("total variation") {
  const Distribution a({{bs("0"), q("1/2")}, {bs("1"), q("1/2")}});
  const Distribution b({{bs("0"), q("1/4")}, {bs("1"), q("3/4")}});
  CHECK(totalVariation(a, b) == q("1/4"));
  CHECK(totalVariation(a, a).isZero());
  CHECK(totalVariation(Distribution::dirac(bs("0")), Distribution::dirac(bs("1"))) == DyadicRational::one());
}

TEST_CASE("monadic composition is normalized and has the identity kernel as unit") {
  gen::Gen g(23);
  const Kernel identity = [](const BitString& v) { return Distribution::dirac(v); };
  for (int i = 0; i < 50; ++i) {
    const auto d = gen::distribution(g);
    REQUIRE(total(d) == DyadicRational::one());
    REQUIRE(monadicCompose(identity, d) == d);
    std::map<BitString, Distribution> table;
    const Kernel k = [&](const BitString& v) {
      auto it = table.find(v);
      if (it == table.end()) it = table.emplace(v, gen::distribution(g)).first;
      return it->second;
    };
    REQUIRE(total(monadicCompose(k, d)) == DyadicRational::one());
    REQUIRE(monadicCompose(k, Distribution::dirac(bs("0"))) == k(bs("0")));
  }
}

TEST_CASE("oracle queries are memoized") {
  gen::Gen g(24);
  for (int i = 0; i < 1000; ++i) {
    Oracle o(g.word());
    const auto c = g.upTo(10);
    REQUIRE(o.query(c) == o.query(c));
    Oracle again(o.seed());
    REQUIRE(again.query(c) == o.query(c));
  }
  Oracle o(5);
  o.assign(bs("01"), true);
  CHECK(o.query(bs("01")));
  o.assign(bs("01"), false);
  CHECK_FALSE(o.query(bs("01")));
}

TEST_CASE("seeded fillers are roughly fair") {
  Oracle o(7);
  Stream s(7);
  int ones = 0, streamOnes = 0;
  for (std::size_t i = 0; i < 4000; ++i) {
    ones += o.query(dyad(i));
    streamOnes += s.at(i);
  }
  CHECK(ones > 1800);
  CHECK(ones < 2200);
  CHECK(streamOnes > 1800);
  CHECK(streamOnes < 2200);
}

TEST_CASE("streams honour their prefix") {
  Stream s(bs("101"), 9);
  CHECK(s.at(0));
  CHECK_FALSE(s.at(1));
  CHECK(s.at(2));
  const bool later = s.at(50);
  CHECK(s.at(50) == later);
}

TEST_CASE("trial seeds differ across trials") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t t = 0; t < 1000; ++t) seeds.insert(trialSeed(42, t));
  CHECK(seeds.size() == 1000);
  CHECK(trialSeed(42, 3) == trialSeed(42, 3));
}

TEST_CASE("path enumeration of independent coin flips") {
  const auto outcome = enumeratePaths(
      [](const std::vector<bool>& d) {
        DecisionStream s(d);
        BitString out;
        for (std::size_t i = 0; i < 3; ++i) out.push_back(s.at(i));
        return out;
      },
      10);
  CHECK(outcome.complete());
  CHECK(outcome.leaves == 8);
  CHECK(outcome.distribution() == Distribution::uniform(3));
}

TEST_CASE("decision oracle memoizes coordinates") {
  const auto outcome = enumeratePaths(
      [](const std::vector<bool>& d) {
        DecisionOracle o(d);
        BitString out;
        out.push_back(o.query(bs("0")));
        out.push_back(o.query(bs("0")));
        return out;
      },
      10);
  CHECK(outcome.leaves == 2);
  CHECK(outcome.distribution() == Distribution({{bs("00"), q("1/2")}, {bs("11"), q("1/2")}}));
}

TEST_CASE("path enumeration reports budget overruns") {
  const auto outcome = enumeratePaths(
      [](const std::vector<bool>& d) {
        DecisionStream s(d);
        std::size_t i = 0;
        while (s.at(i)) ++i;
        return BitString::repeat(true, i);
      },
      4);
  CHECK_FALSE(outcome.complete());
  CHECK(outcome.budgetExceeded);
  CHECK(outcome.errorMass == q("1/16"));
  CHECK_THROWS_AS(outcome.distribution(), BudgetExceeded);
}
