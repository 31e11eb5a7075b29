#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "flipbench/errors.hpp"
#include "flipbench/rl.hpp"

namespace flipbench::rl {

BitString evalTerm(const TermPtr& t, const Env& env) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end()) throw EvalError("unbound variable '" + t->name + "'");
      return it->second;
    }
    case Term::Kind::Eps: return {};
    case Term::Kind::Zero: return BitString::parse("0");
    case Term::Kind::One: return BitString::parse("1");
    case Term::Kind::Concat: return concat(evalTerm(t->lhs, env), evalTerm(t->rhs, env));
    case Term::Kind::Times: return flipbench::times(evalTerm(t->lhs, env), evalTerm(t->rhs, env));
  }
  throw std::logic_error("unreachable");
}

namespace {

using K = Formula::Kind;

constexpr std::size_t kMaxQuantifiedLength = 16;

bool hasUnbounded(const FormulaPtr& f) {
  if (!f) return false;
  if (f->kind == K::Quant && f->range == Range::Unbounded) return true;
  return hasUnbounded(f->a) || hasUnbounded(f->b);
}

bool hasQuant(const FormulaPtr& f, Range r) {
  if (!f) return false;
  if (f->kind == K::Quant && f->range == r) return true;
  return hasQuant(f->a, r) || hasQuant(f->b, r);
}

void rejectNestedMeasureQ(const FormulaPtr& f, bool underQuantifier) {
  if (!f) return;
  if (f->kind == K::MeasureQ && underQuantifier) {
    throw ValidationError("measure quantifier under a first-order quantifier is not supported");
  }
  const bool under = underQuantifier || f->kind == K::Quant;
  rejectNestedMeasureQ(f->a, under);
  rejectNestedMeasureQ(f->b, under);
}

std::vector<BitString> quantifierRange(const Formula& f, const Env& env) {
  const BitString bound = evalTerm(f.t, env);
  if (f.range == Range::Bounded) {
    if (bound.size() > kMaxQuantifiedLength) {
      throw BudgetExceeded("bounded quantifier range 2^" + std::to_string(bound.size() + 1) + " too large");
    }
    return stringsUpTo(bound.size());
  }
  std::set<BitString> subwords;
  for (std::size_t i = 0; i <= bound.size(); ++i) {
    for (std::size_t len = 0; i + len <= bound.size(); ++len) {
      subwords.insert(BitString::parse(bound.bits().substr(i, len)));
    }
  }
  return {subwords.begin(), subwords.end()};
}

// Decides C^{t/s} F for a fixed environment.
using MeasureQDecider = std::function<bool(const Formula&, const Env&)>;

bool truth(const FormulaPtr& f, Env& env, OracleAccess& oracle, const MeasureQDecider& decide) {
  switch (f->kind) {
    case K::Flip: return oracle.query(evalTerm(f->t, env));
    case K::Eq: return evalTerm(f->t, env) == evalTerm(f->s, env);
    case K::SubEq: return isPrefix(evalTerm(f->t, env), evalTerm(f->s, env));
    case K::Not: return !truth(f->a, env, oracle, decide);
    case K::And: return truth(f->a, env, oracle, decide) && truth(f->b, env, oracle, decide);
    case K::Or: return truth(f->a, env, oracle, decide) || truth(f->b, env, oracle, decide);
    case K::MeasureQ: return decide(*f, env);
    case K::Quant: {
      if (f->range == Range::Unbounded) {
        throw EvalError("unbounded quantifier over '" + f->variable + "' cannot be evaluated");
      }
      const auto range = quantifierRange(*f, env);
      std::optional<BitString> saved;
      if (auto it = env.find(f->variable); it != env.end()) saved = it->second;
      const bool ex = f->quantifier == Quantifier::Exists;
      bool result = !ex;
      for (const auto& v : range) {
        env[f->variable] = v;
        if (truth(f->a, env, oracle, decide) == ex) {
          result = ex;
          break;
        }
      }
      if (saved) {
        env[f->variable] = *saved;
      } else {
        env.erase(f->variable);
      }
      return result;
    }
  }
  throw std::logic_error("unreachable");
}

constexpr std::size_t kSaturated = std::size_t{1} << 40;

std::size_t satAdd(std::size_t a, std::size_t b) { return std::min(kSaturated, a + b); }
std::size_t satMul(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return std::min(kSaturated, a * b);
}

using Lengths = std::map<std::string, std::size_t>;

std::size_t maxLength(const TermPtr& t, const Lengths& lens) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = lens.find(t->name);
      if (it == lens.end()) throw EvalError("unbound variable '" + t->name + "'");
      return it->second;
    }
    case Term::Kind::Eps: return 0;
    case Term::Kind::Zero:
    case Term::Kind::One: return 1;
    case Term::Kind::Concat: return satAdd(maxLength(t->lhs, lens), maxLength(t->rhs, lens));
    case Term::Kind::Times: return satMul(maxLength(t->lhs, lens), maxLength(t->rhs, lens));
  }
  throw std::logic_error("unreachable");
}

std::size_t bound(const FormulaPtr& f, Lengths& lens) {
  switch (f->kind) {
    case K::Flip: return maxLength(f->t, lens);
    case K::Eq:
    case K::SubEq:
      maxLength(f->t, lens);  // surfaces unbound variables
      maxLength(f->s, lens);
      return 0;
    case K::Not: return bound(f->a, lens);
    case K::And:
    case K::Or: return std::max(bound(f->a, lens), bound(f->b, lens));
    case K::MeasureQ: return 0;  // oracle-independent: the whole space or nothing
    case K::Quant: {
      if (f->range == Range::Unbounded) {
        throw EvalError("unbounded quantifier over '" + f->variable + "' has no finite relevant bound");
      }
      Lengths inner = lens;
      inner[f->variable] = maxLength(f->t, lens);
      return bound(f->a, inner);
    }
  }
  throw std::logic_error("unreachable");
}

void checkBudget(const ExactOutcome& out) {
  if (out.complete()) return;
  const std::string msg = out.errors.empty() ? "incomplete enumeration" : out.errors.front();
  if (out.budgetExceeded) throw BudgetExceeded(msg);
  throw EvalError(msg);
}

bool lengthRatioHolds(const Formula& mq, const Env& env, const BigInt& count, const BigInt& total) {
  const auto t = evalTerm(mq.t, env).size();
  const auto s = evalTerm(mq.s, env).size();
  return s > 0 && count * s >= BigInt(t) * total;
}

// Oracle over the packed witness: coordinate dyad(i) reads bit i of w.
class PackedOracle final : public OracleAccess {
 public:
  PackedOracle(const std::unordered_map<BitString, std::size_t>& index, std::uint64_t w)
      : index_(index), w_(w) {}
  bool query(const BitString& coordinate) override {
    auto it = index_.find(coordinate);
    if (it == index_.end()) throw EvalError("coordinate " + coordinate.str() + " beyond the relevant bound");
    return ((w_ >> it->second) & 1U) != 0;
  }

 private:
  const std::unordered_map<BitString, std::size_t>& index_;
  std::uint64_t w_;
};


bool decideByMeasure(const Formula& mq, const Env& env, const MeasureOptions& opts) {
  const auto mu = measure(mq.a, env, opts);
  return lengthRatioHolds(mq, env, mu.numerator(), BigInt(1) << mu.exponent());
}

}  // namespace

bool holds(const FormulaPtr& f, const Env& env, OracleAccess& oracle, const MeasureOptions& opts) {
  Env scratch = env;
  return truth(f, scratch, oracle, [&opts](const Formula& mq, const Env& e) { return decideByMeasure(mq, e, opts); });
}

std::size_t relevantBound(const FormulaPtr& f, const Env& env, const MeasureOptions& opts) {
  Lengths lens;
  for (const auto& [name, value] : env) lens[name] = value.size();
  const std::size_t l = bound(f, lens);
  if (l > opts.maxBound) {
    throw BudgetExceeded("relevant bound " + std::to_string(l) + " exceeds cap " + std::to_string(opts.maxBound));
  }
  return l;
}

DyadicRational measure(const FormulaPtr& f, const Env& env, const MeasureOptions& opts) {
  rejectNestedMeasureQ(f, false);
  relevantBound(f, env, opts);
  auto outcome = enumeratePaths(
      [&](const std::vector<bool>& decisions) {
        DecisionOracle oracle(decisions);
        return holds(f, env, oracle, opts) ? BitString::parse("1") : BitString{};
      },
      opts.maxBits);
  checkBudget(outcome);
  auto it = outcome.outputs.find(BitString::parse("1"));
  return it == outcome.outputs.end() ? DyadicRational{} : it->second;
}

CountingFraction countingFraction(const FormulaPtr& f, const Env& env, const MeasureOptions& opts) {
  rejectNestedMeasureQ(f, false);
  const std::size_t l = relevantBound(f, env, opts);
  if (l >= 6) throw BudgetExceeded("packed witness of 2^" + std::to_string(l + 1) + "-1 bits is infeasible");
  const std::size_t coords = (std::size_t{1} << (l + 1)) - 1;
  if (coords > opts.maxBits) {
    throw BudgetExceeded(std::to_string(coords) + " relevant coordinates exceed the budget of " +
                         std::to_string(opts.maxBits) + " bits");
  }
  std::unordered_map<BitString, std::size_t> index;
  for (std::size_t i = 0; i < coords; ++i) index.emplace(dyad(i), i);

  const MeasureQDecider decide = [&opts](const Formula& mq, const Env& e) {
    const auto inner = countingFraction(mq.a, e, opts);
    return lengthRatioHolds(mq, e, inner.count, inner.total);
  };
  const std::uint64_t total = std::uint64_t{1} << coords;
  std::uint64_t count = 0;
  Env scratch = env;
  for (std::uint64_t w = 0; w < total; ++w) {
    PackedOracle oracle(index, w);
    if (truth(f, scratch, oracle, decide)) ++count;
  }
  return {BigInt(count), BigInt(total)};
}

Shape classifySigmaB1(const FormulaPtr& f) {
  if (hasUnbounded(f)) return Shape::Unbounded;
  FormulaPtr body = f;
  while (body->kind == K::Quant && body->quantifier == Quantifier::Exists && body->range == Range::Bounded) {
    body = body->a;
  }
  return hasQuant(body, Range::Bounded) ? Shape::BoundedOnly : Shape::SigmaB1;
}

std::string toString(Shape s) {
  switch (s) {
    case Shape::SigmaB1: return "sigmaB1";
    case Shape::BoundedOnly: return "boundedOnly";
    case Shape::Unbounded: return "unbounded";
  }
  throw std::logic_error("unreachable");
}

bool TwoThirdsReport::allPass() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass; });
}

TwoThirdsReport twoThirdsCheck(const FormulaPtr& g, const std::vector<BitString>& inputs,
                               const MeasureOptions& opts, const std::string& xVar, const std::string& yVar) {
  rejectNestedMeasureQ(g, false);
  TwoThirdsReport report;
  for (const auto& sigma : inputs) {
    TwoThirdsEntry entry{sigma, std::nullopt, {}, false, {}};
    try {
      for (const auto& tau : stringsUpTo(1)) {
        const auto mu = measure(g, Env{{xVar, sigma}, {yVar, tau}}, opts);
        if (!entry.witness || mu > entry.best) {
          entry.best = mu;
          entry.witness = tau;
        }
      }
      entry.pass = entry.best.atLeast(2, 3);
    } catch (const Error& e) {
      entry.error = e.what();
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

bool langMember(const Distribution& output) { return output.mass(BitString{}).greaterThan(1, 2); }

bool langMember(const std::function<Distribution(const BitString&)>& f, const BitString& sigma) {
  return langMember(f(sigma));
}

}  // namespace flipbench::rl
