#pragma once

#include <string>
#include <vector>

#include "flipbench/circuit.hpp"
#include "flipbench/machine.hpp"
#include "flipbench/por.hpp"

namespace corpus {

using namespace flipbench;

struct PorEntry {
  std::string name;
  por::PorPtr f;
  std::size_t arity;
};

inline por::PorPtr condOn(por::PorPtr test, std::size_t n, std::size_t keep) {
  using namespace por;
  auto kept = proj(n, keep);
  return comp(cond(), {test, kept, comp(succ(false), {kept}), comp(succ(true), {kept})});
}

inline std::vector<PorEntry> porPrograms() {
  using namespace por;
  auto x = proj(1, 1);
  auto prefixBit = condOn(comp(query(), {proj(2, 1)}), 2, 2);
  auto paramBit = condOn(comp(query(), {proj(3, 1)}), 3, 3);
  return {
      {"query", query(), 1},
      {"query-then-append", comp(succ(true), {query()}), 1},
      {"query-extended-coordinate", comp(query(), {comp(succ(false), {x})}), 1},
      {"cond-on-query", condOn(query(), 1, 1), 1},
      {"repeated-query", comp(cond(), {query(), E(), query(), comp(succ(true), {query()})}), 1},
      {"query-of-query", comp(query(), {query()}), 1},
      {"prefix-bits", rec(E(), prefixBit, prefixBit, bCat(bVar("y"), bOne())), 1},
      {"adaptive-chain", rec(E(), comp(query(), {proj(2, 2)}), comp(succ(true), {comp(query(), {proj(2, 2)})}),
                             bVar("y")),
       1},
      {"extractor", extractorFn(), 1},
      {"dyad-of-length", dyadOfLengthFn(), 1},
      {"two-argument-select", comp(query(), {condOn(proj(2, 1), 2, 2)}), 2},
      {"parameter-recursion", rec(x, comp(succ(false), {proj(3, 3)}), paramBit, bCat(bVar("x1"), bVar("y"))), 2},
  };
}

/// One-tape on-demand machines; output is the run left of the head.
inline std::vector<std::pair<std::string, std::string>> machineTexts() {
  const std::string header = "kind od\ntapes 1\ninputs 1\noutput 0\nstart s\nhalt h\n";
  const std::string scan = "(s, 0, #) -> (s, 0, R)\n(s, 1, #) -> (s, 1, R)\n";
  return {
      {"identity", header + scan + "(s, _, #) -> (h, _, S)\n"},
      {"append-coin", header + scan + "(s, _, 0) -> (h, 0, R)\n(s, _, 1) -> (h, 1, R)\n"},
      {"erase-then-coin",
       header + "(s, 0, #) -> (s, _, R)\n(s, 1, #) -> (s, _, R)\n(s, _, 0) -> (h, 0, R)\n(s, _, 1) -> (h, 1, R)\n"},
      {"constant-one",
       header + "(s, 0, #) -> (s, _, R)\n(s, 1, #) -> (s, _, R)\n(s, _, #) -> (h, 1, R)\n"},
      {"randomize-last",
       header + scan +
           "(s, _, #) -> (b, _, L)\n(b, 0, 0) -> (h, 0, R)\n(b, 0, 1) -> (h, 1, R)\n(b, 1, 0) -> (h, 0, R)\n"
           "(b, 1, 1) -> (h, 1, R)\n(b, _, #) -> (h, _, R)\n"},
      {"coin-gated-append",
       header + scan + "(s, _, 0) -> (h, _, S)\n(s, _, 1) -> (t, 1, R)\n(t, _, 0) -> (h, 0, R)\n(t, _, 1) -> (h, 1, R)\n"},
  };
}

inline machine::Machine machineNamed(const std::string& name) {
  for (const auto& [n, text] : machineTexts()) {
    if (n == name) return machine::parse(text);
  }
  throw std::out_of_range(name);
}

inline std::vector<std::pair<std::string, std::string>> machinePairs() {
  return {
      {"append-coin", "append-coin"},         {"constant-one", "append-coin"},
      {"erase-then-coin", "identity"},        {"randomize-last", "append-coin"},
      {"append-coin", "randomize-last"},      {"erase-then-coin", "coin-gated-append"},
      {"coin-gated-append", "erase-then-coin"},
  };
}

struct NamedCircuit {
  std::string name;
  pzt::Circuit c;
};

inline pzt::Circuit square(pzt::Circuit c) {
  c.mul(c.output(), c.output());
  return c;
}

/// Circuits whose polynomial is zero, mostly by cancellation.
inline std::vector<NamedCircuit> zeroCircuits() {
  using pzt::Circuit;
  std::vector<NamedCircuit> out;
  {
    Circuit c;
    auto x = c.input(1);
    c.sub(x, x);
    out.push_back({"x-x", c});
  }
  {
    Circuit c;
    auto a = c.input(1), b = c.input(2);
    auto s = c.add(a, b);
    auto lhs = c.mul(s, s);
    auto ab = c.mul(a, b);
    auto rhs = c.add(c.add(c.mul(a, a), c.add(ab, ab)), c.mul(b, b));
    c.sub(lhs, rhs);
    out.push_back({"binomial-square", c});
  }
  {
    Circuit c;
    auto x = c.input(1), one = c.constant(true);
    auto p = c.mul(c.add(x, one), c.sub(x, one));
    c.add(c.sub(p, c.mul(x, x)), one);
    out.push_back({"difference-of-squares-shifted", c});
  }
  {
    Circuit c;
    auto a = c.input(1), b = c.input(2);
    c.sub(c.mul(a, b), c.mul(b, a));
    out.push_back({"commutativity", c});
  }
  {
    Circuit c;
    auto a = c.input(1), b = c.input(2);
    auto lhs = c.mul(c.add(a, b), c.sub(a, b));
    c.sub(lhs, c.sub(c.mul(a, a), c.mul(b, b)));
    out.push_back({"difference-of-squares", c});
  }
  {
    Circuit c;
    c.constant(false);
    out.push_back({"const-zero", c});
  }
  {
    Circuit c;
    auto x = c.input(1), one = c.constant(true);
    auto s = c.add(x, one);
    auto cube = c.mul(c.mul(s, s), s);
    auto x2 = c.mul(x, x), x3 = c.mul(x2, x);
    auto three = c.add(c.add(one, one), one);
    auto rhs = c.add(c.add(c.add(x3, c.mul(three, x2)), c.mul(three, x)), one);
    c.sub(cube, rhs);
    out.push_back({"binomial-cube", c});
  }
  {
    Circuit c;
    auto a = c.input(1), b = c.input(2), z = c.input(3);
    auto big = c.add(c.mul(a, b), c.constant(true));
    c.mul(big, c.sub(z, z));
    out.push_back({"times-vanishing-factor", c});
  }
  {
    Circuit c;
    auto x = c.input(1);
    auto x2 = c.mul(x, x);
    auto x4 = c.mul(x2, x2);
    auto slow = c.mul(c.mul(c.mul(x, x), x), x);
    c.sub(x4, slow);
    out.push_back({"repeated-squaring", c});
  }
  {
    Circuit p, q;
    auto x = p.input(1);
    p.add(x, x);
    auto one = q.constant(true);
    q.mul(q.add(one, one), q.input(1));
    out.push_back({"pit-double", pzt::pitToPzt(p, q)});
  }
  {
    Circuit c;
    std::vector<std::size_t> xs;
    for (std::size_t j = 1; j <= 4; ++j) xs.push_back(c.input(j));
    auto lhs = c.mul(c.add(xs[0], xs[1]), c.add(xs[2], xs[3]));
    auto rhs = c.add(c.add(c.mul(xs[0], xs[2]), c.mul(xs[0], xs[3])), c.add(c.mul(xs[1], xs[2]), c.mul(xs[1], xs[3])));
    c.sub(lhs, rhs);
    out.push_back({"distributivity", c});
  }
  return out;
}

/// Non-zero circuits with at least ten nodes.
inline std::vector<NamedCircuit> nonzeroCircuits() {
  using pzt::Circuit;
  std::vector<NamedCircuit> out;
  {
    Circuit c;
    auto x = c.input(1), one = c.constant(true);
    auto s = c.add(x, one);
    auto lhs = c.mul(s, s);
    auto x2 = c.mul(x, x);
    auto twoX = c.add(x, x);
    auto almost = c.add(x2, twoX);
    auto d = c.sub(lhs, almost);
    auto e = c.sub(d, one);
    c.add(e, one);
    out.push_back({"const-one-by-cancellation", c});
  }
  {
    Circuit c;
    auto one = c.constant(true);
    auto v = c.add(one, one);
    for (int i = 0; i < 9; ++i) v = c.mul(v, v);
    out.push_back({"two-to-the-512", c});
  }
  {
    Circuit c;
    auto v = c.input(1);
    for (std::size_t j = 2; j <= 10; ++j) v = c.mul(v, c.input(j));
    out.push_back({"product-of-ten", c});
  }
  {
    Circuit c;
    auto v = c.input(1);
    for (std::size_t j = 2; j <= 10; ++j) v = c.add(v, c.input(j));
    out.push_back({"sum-of-ten", c});
  }
  {
    Circuit c;
    auto x = c.input(1);
    auto v = x;
    for (int i = 0; i < 9; ++i) v = c.mul(v, v);
    c.sub(v, x);
    out.push_back({"x-to-the-512-minus-x", c});
  }
  {
    Circuit c;
    auto a = c.input(1), b = c.input(2);
    auto lhs = c.mul(c.add(a, b), c.add(a, b));
    auto rhs = c.add(c.mul(a, a), c.mul(b, b));
    auto d = c.sub(lhs, rhs);
    auto e = c.mul(d, d);
    auto f = c.mul(e, e);
    c.add(f, c.constant(false));
    out.push_back({"cross-term-power", c});
  }
  {
    Circuit c;
    auto one = c.constant(true);
    auto acc = c.input(1);
    for (std::size_t j = 2; j <= 6; ++j) acc = c.mul(acc, c.sub(c.input(j), one));
    out.push_back({"shifted-product", c});
  }
  {
    Circuit c;
    auto x = c.input(1), y = c.input(2);
    auto x2 = c.mul(x, x), y2 = c.mul(y, y);
    auto s = c.add(x2, y2);
    auto t = c.mul(s, s);
    auto u = c.sub(t, c.mul(x2, y2));
    auto w = c.mul(u, c.add(x, y));
    c.add(w, c.constant(true));
    out.push_back({"quartic-form", c});
  }
  {
    Circuit c;
    auto one = c.constant(true);
    auto v = one;
    for (int i = 0; i < 10; ++i) v = c.add(v, v);
    c.sub(v, one);
    out.push_back({"two-to-the-ten-minus-one", c});
  }
  {
    Circuit c;
    std::vector<std::size_t> xs;
    for (std::size_t j = 1; j <= 3; ++j) xs.push_back(c.input(j));
    auto a = c.sub(xs[0], xs[1]), b = c.sub(xs[1], xs[2]), d = c.sub(xs[2], xs[0]);
    auto vdm = c.mul(c.mul(a, b), d);
    c.add(c.mul(vdm, vdm), c.constant(false));
    out.push_back({"vandermonde-squared", c});
  }
  {
    Circuit c;
    auto x = c.input(7), one = c.constant(true);
    auto v = c.add(x, one);
    for (int i = 0; i < 5; ++i) v = c.mul(v, c.add(v, one));
    out.push_back({"iterated-pronic", c});
  }
  return out;
}

}  // namespace corpus
