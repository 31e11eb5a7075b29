#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flipbench/bitstring.hpp"
#include "flipbench/dyadic.hpp"
#include "flipbench/distribution.hpp"
#include "flipbench/randomness.hpp"

namespace flipbench::rl {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Eps, Zero, One, Concat, Times };
  Kind kind;
  std::string name;  // Var only
  TermPtr lhs, rhs;  // Concat / Times
};

TermPtr var(std::string name);
TermPtr eps();
TermPtr zero();
TermPtr one();
TermPtr cat(TermPtr t, TermPtr s);
TermPtr times(TermPtr t, TermPtr s);
/// The closed term spelling out `s` (eps for the empty string).
TermPtr literal(const BitString& s);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class Quantifier { Exists, Forall };
/// Unbounded: over all of S. Bounded: over strings no longer than the bound
/// (x <= t). Subword: over contiguous substrings of the bound.
enum class Range { Unbounded, Bounded, Subword };

struct Formula {
  enum class Kind { Flip, Eq, SubEq, Not, And, Or, Quant, MeasureQ };
  Kind kind;
  TermPtr t, s;          // Flip: t; Eq/SubEq: t, s; Quant: bound in t; MeasureQ: t / s
  FormulaPtr a, b;       // Not/Quant/MeasureQ: a; And/Or: a, b
  Quantifier quantifier = Quantifier::Exists;
  Range range = Range::Unbounded;
  std::string variable;  // Quant
};

FormulaPtr flip(TermPtr t);
FormulaPtr eq(TermPtr t, TermPtr s);
FormulaPtr subEq(TermPtr t, TermPtr s);
FormulaPtr negate(FormulaPtr f);
FormulaPtr conj(FormulaPtr f, FormulaPtr g);
FormulaPtr disj(FormulaPtr f, FormulaPtr g);
FormulaPtr exists(std::string x, FormulaPtr body);
FormulaPtr forall(std::string x, FormulaPtr body);
FormulaPtr existsBounded(std::string x, TermPtr bound, FormulaPtr body);
FormulaPtr forallBounded(std::string x, TermPtr bound, FormulaPtr body);
FormulaPtr existsSubword(std::string x, TermPtr bound, FormulaPtr body);
FormulaPtr forallSubword(std::string x, TermPtr bound, FormulaPtr body);
/// C^{t/s} F: the whole space when |s| > 0 and mu(F) >= |t|/|s|, else empty.
FormulaPtr measureQ(TermPtr t, TermPtr s, FormulaPtr body);

/// Spells a bounded quantifier out as the unbounded quantifier over the
/// guard 1^x sub 1^t (conjoined for E, implied for A); subword ones likewise
/// over the guard "exists w sub t. w.x sub t". Other nodes are copied.
FormulaPtr expandAbbreviations(const FormulaPtr& f);

TermPtr parseTerm(std::string_view text);
FormulaPtr parseFormula(std::string_view text);
std::string toString(const TermPtr& t);
std::string toString(const FormulaPtr& f);
bool equal(const TermPtr& a, const TermPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

using Env = std::map<std::string, BitString>;

BitString evalTerm(const TermPtr& t, const Env& env);

enum class Shape { SigmaB1, BoundedOnly, Unbounded };
Shape classifySigmaB1(const FormulaPtr& f);
std::string toString(Shape s);

struct MeasureOptions {
  /// Cap on random bits: distinct coordinates along one evaluation path for
  /// measure(), coordinates of length <= relevantBound for countingFraction().
  std::size_t maxBits = 20;
  /// Cap on the value returned by relevantBound().
  std::size_t maxBound = 64;
};

/// Pointwise truth of F under an environment and one concrete oracle.
/// Measure quantifiers are resolved with measure().
bool holds(const FormulaPtr& f, const Env& env, OracleAccess& oracle,
           const MeasureOptions& opts = {});

/// A length L such that oracles agreeing on every coordinate of length <= L
/// agree on membership in the interpretation of F.
std::size_t relevantBound(const FormulaPtr& f, const Env& env, const MeasureOptions& opts = {});

/// Exact mu of the interpretation of F, by forking on each fresh Flip coordinate.
DyadicRational measure(const FormulaPtr& f, const Env& env, const MeasureOptions& opts = {});

struct CountingFraction {
  BigInt count;
  BigInt total;
};

/// Counts the packed witnesses w (bit i of w is the oracle value at dyad(i),
/// for every coordinate of length <= relevantBound) that satisfy F.
CountingFraction countingFraction(const FormulaPtr& f, const Env& env, const MeasureOptions& opts = {});

struct TwoThirdsEntry {
  BitString input;
  std::optional<BitString> witness;  // best y found
  DyadicRational best;
  bool pass = false;
  std::string error;                 // non-empty when the input was infeasible
};

struct TwoThirdsReport {
  std::vector<TwoThirdsEntry> entries;
  bool allPass() const;
};

/// For each input sigma, searches y with |y| <= 1 for mu(G(sigma, y)) >= 2/3.
TwoThirdsReport twoThirdsCheck(const FormulaPtr& g, const std::vector<BitString>& inputs,
                               const MeasureOptions& opts = {}, const std::string& xVar = "x",
                               const std::string& yVar = "y");

/// Majority membership: f(sigma)(eps) > 1/2.
bool langMember(const Distribution& output);
bool langMember(const std::function<Distribution(const BitString&)>& f, const BitString& sigma);

}  // namespace flipbench::rl
