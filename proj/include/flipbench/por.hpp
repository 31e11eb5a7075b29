#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flipbench/bitstring.hpp"
#include "flipbench/randomness.hpp"

namespace flipbench::por {

struct BoundTerm;
using BoundPtr = std::shared_ptr<const BoundTerm>;

/// Bound term of a recursion. Variables are `x1`..`xn` (the parameters) and
/// `y` (the recursion argument). Foreign nodes keep whatever else was written
/// so validate() can report them.
struct BoundTerm {
  enum class Kind { Eps, Zero, One, Var, Concat, Times, Foreign };
  Kind kind;
  std::string name;  // Var, Foreign
  std::vector<BoundPtr> children;
};

BoundPtr bEps();
BoundPtr bZero();
BoundPtr bOne();
BoundPtr bVar(std::string name);
BoundPtr bCat(BoundPtr a, BoundPtr b);
BoundPtr bTimes(BoundPtr a, BoundPtr b);
BoundPtr bForeign(std::string name, std::vector<BoundPtr> children = {});

struct PorFn;
using PorPtr = std::shared_ptr<const PorFn>;

struct PorFn {
  enum class Kind { E, Proj, Succ, Cond, Query, Compose, Rec };
  Kind kind;
  std::size_t n = 0, i = 0;  // Proj: P^n_i, 1-based
  bool bit = false;          // Succ
  PorPtr g;                  // Compose: outer function; Rec: base case
  std::vector<PorPtr> hs;    // Compose: inner functions
  PorPtr h0, h1;             // Rec: step functions, called as h_b(x..., y, previous)
  BoundPtr bound;            // Rec
};

PorPtr E();
PorPtr proj(std::size_t n, std::size_t i);
PorPtr succ(bool bit);
PorPtr cond();
PorPtr query();
PorPtr comp(PorPtr g, std::vector<PorPtr> hs);
PorPtr rec(PorPtr g, PorPtr h0, PorPtr h1, BoundPtr bound);

/// Fixed arity, or nullopt for functions usable at any arity (E and
/// compositions built only from it).
std::optional<std::size_t> arity(const PorFn& f);

/// Every violation of the arity and explicit-bound invariants; empty when valid.
std::vector<std::string> validate(const PorPtr& f);
/// Throws ValidationError listing all violations.
void requireValid(const PorPtr& f);

/// Value of a bound term; x1..xn bind to `xs`, y to `y`.
BitString evalBound(const BoundPtr& t, const std::vector<BitString>& xs, const BitString& y);

/// Structural evaluation. BoundedRec on (x..., y b) computes
/// h_b(x..., y, f(x..., y)) truncated at bound(x..., y).
BitString evalPor(const PorPtr& f, const std::vector<BitString>& args, OracleAccess& oracle);

/// |n|-fold self-application of `f` starting at `x`, each step truncated at
/// bound `t` (with x1 = x, x2.. = z, y = the consumed prefix of n).
BitString saIterate(const PorPtr& f, const BoundPtr& t, const BitString& x, const BitString& n,
                    const std::vector<BitString>& z, OracleAccess& oracle);

/// Bit j of the result is the oracle at dyad(j), for j < |x|.
BitString extractorE(const BitString& x, OracleAccess& oracle);
/// The same extractor written as a POR function of one argument.
PorPtr extractorFn();
/// dyad(|y|) as a POR function.
PorPtr dyadOfLengthFn();
/// Successor in dyadic order (dyad(n) -> dyad(n+1)) as a POR function.
PorPtr dyadSuccFn();

std::set<BitString> queriedCoords(const PorPtr& f, const std::vector<BitString>& args, OracleAccess& oracle);

/// Prefix notation: (empty) (proj n i) (succ 0|1) (cond) (query)
/// (comp g h1 .. hk) (rec (g F) (h0 F) (h1 F) (bound T)); bound terms
/// eps 0 1 <bits> y x<i> (concat T T) (times T T).
PorPtr parse(std::string_view text);
BoundPtr parseBound(std::string_view text);
std::string toString(const PorPtr& f);
std::string toString(const BoundPtr& t);

}  // namespace flipbench::por
