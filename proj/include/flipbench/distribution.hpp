#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "flipbench/bitstring.hpp"
#include "flipbench/dyadic.hpp"

namespace flipbench {

/// Finite distribution over bit strings with exact dyadic masses summing to 1.
class Distribution {
 public:
  using Masses = std::map<BitString, DyadicRational>;

  /// Validates: every mass positive, total exactly 1.
  explicit Distribution(Masses masses);

  static Distribution dirac(const BitString& v);
  /// Uniform over all strings of length `len`.
  static Distribution uniform(std::size_t len);
  /// Parses the line format produced by serialize().
  static Distribution parse(const std::string& text);

  DyadicRational mass(const BitString& v) const;
  const Masses& masses() const { return masses_; }
  std::size_t support() const { return masses_.size(); }

  /// One "<string> <numerator>/2^<exponent>" line per point, in dyadic order.
  std::string serialize() const;
  /// Compact single-line rendering, e.g. "{0:1/2, 1:1/2}".
  std::string str() const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  Masses masses_;
};

using Kernel = std::function<Distribution(const BitString&)>;

/// (g <> f)(tau) = sum_rho g(rho)(tau) * f(rho).
Distribution monadicCompose(const Kernel& g, const Distribution& f);

DyadicRational totalVariation(const Distribution& a, const Distribution& b);

/// Outcome of exhaustive path enumeration. Masses of paths that ended in an
/// error are collected separately, so `outputs` may sum to less than 1.
struct ExactOutcome {
  Distribution::Masses outputs;
  DyadicRational errorMass;
  std::vector<std::string> errors;  // first few distinct messages
  std::size_t leaves = 0;
  std::size_t maxDepth = 0;
  bool budgetExceeded = false;
  bool fuelExhausted = false;

  bool complete() const { return errorMass.isZero(); }
  /// The distribution. When incomplete, throws BudgetExceeded or
  /// FuelExhausted if such a path occurred, else Error with the first message.
  Distribution distribution() const;
};

/// Depth-first enumeration of a randomized run driven by a decision list.
///
/// `run` executes the model against the given decisions and either returns
/// an output or throws NeedFreshBit when it needs one more decision. Each
/// leaf that consumed k decisions carries mass 2^-k. A path that needs more
/// than `maxBits` decisions is recorded as a budget error.
ExactOutcome enumeratePaths(const std::function<BitString(const std::vector<bool>&)>& run,
                            std::size_t maxBits);

}  // namespace flipbench
