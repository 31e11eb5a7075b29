#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flipbench/circuit.hpp"
#include "flipbench/distribution.hpp"
#include "flipbench/rl.hpp"

namespace gen {

using namespace flipbench;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }
  long between(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return below(2) == 1; }
  std::uint64_t word() { return rng_(); }

  BitString bits(std::size_t len) {
    BitString s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(coin());
    return s;
  }
  BitString upTo(std::size_t maxLen) { return bits(below(maxLen + 1)); }

  /// Signed integer with up to `limbs` 64-bit words.
  BigInt bigInt(std::size_t limbs) {
    BigInt v = 0;
    const std::size_t n = 1 + below(limbs);
    for (std::size_t i = 0; i < n; ++i) v = (v << 64) + BigInt(word());
    return coin() ? BigInt(-v) : v;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Random distribution with masses a/2^e over a few distinct strings.
inline Distribution distribution(Gen& g, std::size_t maxSupport = 5, unsigned exponent = 4) {
  const std::uint64_t units = std::uint64_t{1} << exponent;
  std::vector<BitString> points;
  const std::size_t support = 1 + g.below(maxSupport);
  for (std::size_t tries = 0; points.size() < support && tries < 100; ++tries) {
    auto s = g.upTo(3);
    if (std::find(points.begin(), points.end(), s) == points.end()) points.push_back(s);
  }
  std::vector<std::uint64_t> cuts{0, units};
  while (cuts.size() < points.size() + 1) {
    auto c = 1 + g.below(units - 1);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    if (cuts.size() > units) break;
  }
  std::sort(cuts.begin(), cuts.end());
  Distribution::Masses m;
  for (std::size_t i = 0; i + 1 < cuts.size() && i < points.size(); ++i) {
    m[points[i]] = DyadicRational(BigInt(cuts[i + 1] - cuts[i]), exponent);
  }
  return Distribution(m);
}

/// Small closed or scoped term whose value has length at most three.
inline rl::TermPtr term(Gen& g, const std::vector<std::string>& scope) {
  const auto pick = g.below(scope.empty() ? 4 : 6);
  switch (pick) {
    case 0: return rl::eps();
    case 1: return rl::zero();
    case 2: return rl::one();
    case 3: return rl::literal(g.bits(1 + g.below(3)));
    default: {
      auto v = rl::var(scope[g.below(scope.size())]);
      return g.coin() ? v : rl::cat(v, g.coin() ? rl::one() : rl::zero());
    }
  }
}

/// Quantifier-bounded formula over the given variables. Terms stay short so
/// many generated formulas have a relevant bound of at most three.
inline rl::FormulaPtr formula(Gen& g, std::size_t depth, std::vector<std::string> scope = {}) {
  const auto leafKinds = 3;
  const auto kind = depth == 0 ? g.below(leafKinds) : g.below(leafKinds + 7);
  switch (kind) {
    case 0:
    case 1: return rl::flip(term(g, scope));
    case 2: return g.coin() ? rl::eq(term(g, scope), term(g, scope)) : rl::subEq(term(g, scope), term(g, scope));
    case 3: return rl::negate(formula(g, depth - 1, scope));
    case 4:
    case 5: return rl::conj(formula(g, depth - 1, scope), formula(g, depth - 1, scope));
    case 6: return rl::disj(formula(g, depth - 1, scope), formula(g, depth - 1, scope));
    default: {
      const std::string x = "v" + std::to_string(scope.size());
      const auto bound = rl::literal(g.bits(1 + g.below(2)));
      auto inner = scope;
      inner.push_back(x);
      auto body = formula(g, depth - 1, inner);
      switch (g.below(4)) {
        case 0: return rl::existsBounded(x, bound, body);
        case 1: return rl::forallBounded(x, bound, body);
        case 2: return rl::existsSubword(x, bound, body);
        default: return rl::forallSubword(x, bound, body);
      }
    }
  }
}

/// Random circuit over variables 1..vars with `gates` operations.
inline pzt::Circuit circuit(Gen& g, std::size_t vars, std::size_t gates) {
  pzt::Circuit c;
  std::vector<std::size_t> nodes;
  for (std::size_t j = 1; j <= vars; ++j) nodes.push_back(c.input(j));
  nodes.push_back(c.constant(true));
  for (std::size_t i = 0; i < gates; ++i) {
    const auto a = nodes[g.below(nodes.size())], b = nodes[g.below(nodes.size())];
    switch (g.below(3)) {
      case 0: nodes.push_back(c.add(a, b)); break;
      case 1: nodes.push_back(c.mul(a, b)); break;
      default: nodes.push_back(c.sub(a, b)); break;
    }
  }
  return c;
}

}  // namespace gen
