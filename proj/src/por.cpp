#include "flipbench/por.hpp"

#include <sstream>
#include <stdexcept>

#include "flipbench/errors.hpp"
#include "lexer.hpp"

namespace flipbench::por {

namespace {

BoundPtr bnode(BoundTerm::Kind k, std::string name = {}, std::vector<BoundPtr> children = {}) {
  return std::make_shared<BoundTerm>(BoundTerm{k, std::move(name), std::move(children)});
}

PorPtr fnode(PorFn f) { return std::make_shared<PorFn>(std::move(f)); }

PorFn blank(PorFn::Kind k) {
  PorFn f;
  f.kind = k;
  return f;
}

}  // namespace

BoundPtr bEps() { return bnode(BoundTerm::Kind::Eps); }
BoundPtr bZero() { return bnode(BoundTerm::Kind::Zero); }
BoundPtr bOne() { return bnode(BoundTerm::Kind::One); }
BoundPtr bVar(std::string name) { return bnode(BoundTerm::Kind::Var, std::move(name)); }
BoundPtr bCat(BoundPtr a, BoundPtr b) { return bnode(BoundTerm::Kind::Concat, {}, {std::move(a), std::move(b)}); }
BoundPtr bTimes(BoundPtr a, BoundPtr b) { return bnode(BoundTerm::Kind::Times, {}, {std::move(a), std::move(b)}); }
BoundPtr bForeign(std::string name, std::vector<BoundPtr> children) {
  return bnode(BoundTerm::Kind::Foreign, std::move(name), std::move(children));
}

PorPtr E() { return fnode(blank(PorFn::Kind::E)); }
PorPtr proj(std::size_t n, std::size_t i) {
  auto f = blank(PorFn::Kind::Proj);
  f.n = n;
  f.i = i;
  return fnode(std::move(f));
}
PorPtr succ(bool bit) {
  auto f = blank(PorFn::Kind::Succ);
  f.bit = bit;
  return fnode(std::move(f));
}
PorPtr cond() { return fnode(blank(PorFn::Kind::Cond)); }
PorPtr query() { return fnode(blank(PorFn::Kind::Query)); }
PorPtr comp(PorPtr g, std::vector<PorPtr> hs) {
  auto f = blank(PorFn::Kind::Compose);
  f.g = std::move(g);
  f.hs = std::move(hs);
  return fnode(std::move(f));
}
PorPtr rec(PorPtr g, PorPtr h0, PorPtr h1, BoundPtr bound) {
  auto f = blank(PorFn::Kind::Rec);
  f.g = std::move(g);
  f.h0 = std::move(h0);
  f.h1 = std::move(h1);
  f.bound = std::move(bound);
  return fnode(std::move(f));
}

std::optional<std::size_t> arity(const PorFn& f) {
  switch (f.kind) {
    case PorFn::Kind::E: return std::nullopt;
    case PorFn::Kind::Proj: return f.n;
    case PorFn::Kind::Succ:
    case PorFn::Kind::Query: return 1;
    case PorFn::Kind::Cond: return 4;
    case PorFn::Kind::Compose:
      for (const auto& h : f.hs) {
        if (auto a = arity(*h)) return a;
      }
      return std::nullopt;
    case PorFn::Kind::Rec:
      if (auto a = arity(*f.g)) return *a + 1;
      for (const auto& h : {f.h0, f.h1}) {
        if (auto a = arity(*h); a && *a >= 1) return *a - 1;
      }
      return std::nullopt;
  }
  throw std::logic_error("unreachable");
}

namespace {

std::optional<std::size_t> paramIndex(const std::string& name) {
  if (name.size() < 2 || name[0] != 'x') return std::nullopt;
  for (std::size_t k = 1; k < name.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(name[k]))) return std::nullopt;
  }
  return std::stoul(name.substr(1));
}

void checkBound(const BoundPtr& t, std::optional<std::size_t> params, std::vector<std::string>& errs) {
  switch (t->kind) {
    case BoundTerm::Kind::Eps:
    case BoundTerm::Kind::Zero:
    case BoundTerm::Kind::One: return;
    case BoundTerm::Kind::Var: {
      if (t->name == "y") return;
      auto idx = paramIndex(t->name);
      if (!idx || *idx == 0) {
        errs.push_back("bound variable '" + t->name + "' is neither y nor x<i>");
      } else if (params && *idx > *params) {
        errs.push_back("bound variable '" + t->name + "' exceeds the " + std::to_string(*params) +
                       " recursion parameters");
      }
      return;
    }
    case BoundTerm::Kind::Concat:
    case BoundTerm::Kind::Times:
      for (const auto& c : t->children) checkBound(c, params, errs);
      return;
    case BoundTerm::Kind::Foreign:
      errs.push_back("bound not explicit-definition: '" + t->name + "'");
      return;
  }
}

void check(const PorPtr& f, std::vector<std::string>& errs) {
  switch (f->kind) {
    case PorFn::Kind::E:
    case PorFn::Kind::Succ:
    case PorFn::Kind::Cond:
    case PorFn::Kind::Query: return;
    case PorFn::Kind::Proj:
      if (f->i < 1 || f->i > f->n) {
        errs.push_back("projection index " + std::to_string(f->i) + " outside 1.." + std::to_string(f->n));
      }
      return;
    case PorFn::Kind::Compose: {
      check(f->g, errs);
      for (const auto& h : f->hs) check(h, errs);
      if (auto a = arity(*f->g); a && *a != f->hs.size()) {
        errs.push_back("composition arity mismatch: outer function takes " + std::to_string(*a) + " arguments, " +
                       std::to_string(f->hs.size()) + " inner functions given");
      }
      std::optional<std::size_t> common;
      for (const auto& h : f->hs) {
        auto a = arity(*h);
        if (!a) continue;
        if (common && *common != *a) {
          errs.push_back("composition arity mismatch: inner functions take " + std::to_string(*common) + " and " +
                         std::to_string(*a) + " arguments");
        }
        common = common ? common : a;
      }
      return;
    }
    case PorFn::Kind::Rec: {
      check(f->g, errs);
      check(f->h0, errs);
      check(f->h1, errs);
      std::optional<std::size_t> params = arity(*f->g);
      for (const auto* label : {"h0", "h1"}) {
        const auto& h = std::string(label) == "h0" ? f->h0 : f->h1;
        auto a = arity(*h);
        if (!a) continue;
        if (*a < 2) {
          errs.push_back(std::string("recursion step ") + label + " takes " + std::to_string(*a) +
                         " arguments, needs at least 2");
        } else if (params && *a != *params + 2) {
          errs.push_back(std::string("recursion arity mismatch: base takes ") + std::to_string(*params) + ", step " +
                         label + " takes " + std::to_string(*a));
        } else if (!params) {
          params = *a - 2;
        }
      }
      checkBound(f->bound, params, errs);
      return;
    }
  }
}

}  // namespace

std::vector<std::string> validate(const PorPtr& f) {
  std::vector<std::string> errs;
  check(f, errs);
  return errs;
}

void requireValid(const PorPtr& f) {
  auto errs = validate(f);
  if (errs.empty()) return;
  std::string msg = errs.front();
  for (std::size_t k = 1; k < errs.size(); ++k) msg += "; " + errs[k];
  throw ValidationError(msg);
}

BitString evalBound(const BoundPtr& t, const std::vector<BitString>& xs, const BitString& y) {
  switch (t->kind) {
    case BoundTerm::Kind::Eps: return {};
    case BoundTerm::Kind::Zero: return BitString::parse("0");
    case BoundTerm::Kind::One: return BitString::parse("1");
    case BoundTerm::Kind::Var: {
      if (t->name == "y") return y;
      auto idx = paramIndex(t->name);
      if (!idx || *idx == 0 || *idx > xs.size()) throw ValidationError("bad bound variable '" + t->name + "'");
      return xs[*idx - 1];
    }
    case BoundTerm::Kind::Concat:
      return concat(evalBound(t->children.at(0), xs, y), evalBound(t->children.at(1), xs, y));
    case BoundTerm::Kind::Times:
      return times(evalBound(t->children.at(0), xs, y), evalBound(t->children.at(1), xs, y));
    case BoundTerm::Kind::Foreign: throw ValidationError("bound not explicit-definition: '" + t->name + "'");
  }
  throw std::logic_error("unreachable");
}

namespace {

BitString eval(const PorFn& f, const std::vector<BitString>& args, OracleAccess& oracle) {
  switch (f.kind) {
    case PorFn::Kind::E: return {};
    case PorFn::Kind::Proj: return args.at(f.i - 1);
    case PorFn::Kind::Succ: return args.at(0).appended(f.bit);
    case PorFn::Kind::Query: return BitString::repeat(oracle.query(args.at(0)), 1);
    case PorFn::Kind::Cond: {
      const auto& x = args.at(0);
      if (x.empty()) return args.at(1);
      return x.back() ? args.at(3) : args.at(2);
    }
    case PorFn::Kind::Compose: {
      std::vector<BitString> inner;
      inner.reserve(f.hs.size());
      for (const auto& h : f.hs) inner.push_back(eval(*h, args, oracle));
      return eval(*f.g, inner, oracle);
    }
    case PorFn::Kind::Rec: {
      if (args.empty()) throw ValidationError("bounded recursion applied to no arguments");
      std::vector<BitString> xs(args.begin(), args.end() - 1);
      const BitString& y = args.back();
      BitString value = eval(*f.g, xs, oracle);
      std::vector<BitString> stepArgs = xs;
      stepArgs.emplace_back();
      stepArgs.emplace_back();
      for (std::size_t k = 0; k < y.size(); ++k) {
        const BitString prefix = y.prefix(k);
        stepArgs[xs.size()] = prefix;
        stepArgs[xs.size() + 1] = value;
        const BitString b = evalBound(f.bound, xs, prefix);
        value = truncate(eval(y[k] ? *f.h1 : *f.h0, stepArgs, oracle), b);
        if (value.size() > b.size()) throw std::logic_error("bounded recursion exceeded its bound");
      }
      return value;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

BitString evalPor(const PorPtr& f, const std::vector<BitString>& args, OracleAccess& oracle) {
  requireValid(f);
  if (auto a = arity(*f); a && *a != args.size()) {
    throw ValidationError("function of arity " + std::to_string(*a) + " applied to " + std::to_string(args.size()) +
                          " arguments");
  }
  return eval(*f, args, oracle);
}

BitString saIterate(const PorPtr& f, const BoundPtr& t, const BitString& x, const BitString& n,
                    const std::vector<BitString>& z, OracleAccess& oracle) {
  requireValid(f);
  std::vector<std::string> errs;
  checkBound(t, std::nullopt, errs);
  if (!errs.empty()) throw ValidationError(errs.front());
  std::vector<BitString> boundArgs{x};
  boundArgs.insert(boundArgs.end(), z.begin(), z.end());
  BitString value = x;
  std::vector<BitString> args{value};
  args.insert(args.end(), z.begin(), z.end());
  for (std::size_t k = 0; k < n.size(); ++k) {
    args[0] = value;
    value = truncate(eval(*f, args, oracle), evalBound(t, boundArgs, n.prefix(k)));
  }
  return value;
}

BitString extractorE(const BitString& x, OracleAccess& oracle) {
  BitString out;
  for (std::size_t j = 0; j < x.size(); ++j) out.push_back(oracle.query(dyad(j)));
  return out;
}

PorPtr dyadSuccFn() {
  static const PorPtr f = rec(comp(succ(false), {E()}), comp(succ(true), {proj(2, 1)}),
                              comp(succ(false), {proj(2, 2)}), bCat(bCat(bVar("y"), bOne()), bOne()));
  return f;
}

PorPtr dyadOfLengthFn() {
  static const PorPtr f = [] {
    auto step = comp(dyadSuccFn(), {proj(2, 2)});
    return rec(E(), step, step, bCat(bVar("y"), bOne()));
  }();
  return f;
}

PorPtr extractorFn() {
  static const PorPtr f = [] {
    auto bit = comp(query(), {comp(dyadOfLengthFn(), {proj(2, 1)})});
    auto step = comp(cond(), {bit, proj(2, 2), comp(succ(false), {proj(2, 2)}), comp(succ(true), {proj(2, 2)})});
    return rec(E(), step, step, bCat(bVar("y"), bOne()));
  }();
  return f;
}

namespace {

class RecordingOracle final : public OracleAccess {
 public:
  RecordingOracle(OracleAccess& inner, std::set<BitString>& seen) : inner_(inner), seen_(seen) {}
  bool query(const BitString& c) override {
    seen_.insert(c);
    return inner_.query(c);
  }

 private:
  OracleAccess& inner_;
  std::set<BitString>& seen_;
};

}  // namespace

std::set<BitString> queriedCoords(const PorPtr& f, const std::vector<BitString>& args, OracleAccess& oracle) {
  std::set<BitString> seen;
  RecordingOracle rec(oracle, seen);
  evalPor(f, args, rec);
  return seen;
}

namespace {

using detail::Token;
using detail::TokenCursor;

BitString bitsOf(const Token& t, TokenCursor& cur) {
  for (char c : t.text) {
    if (c != '0' && c != '1') cur.fail("expected a binary literal");
  }
  return BitString::parse(t.text);
}

BoundPtr literal(const BitString& s) {
  if (s.empty()) return bEps();
  BoundPtr out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    BoundPtr b = s[k] ? bOne() : bZero();
    out = out ? bCat(out, b) : b;
  }
  return out;
}

BoundPtr boundTerm(TokenCursor& cur) {
  const Token& t = cur.peek();
  if (t.kind == Token::Kind::Digits) {
    cur.next();
    return literal(bitsOf(t, cur));
  }
  if (t.kind == Token::Kind::Ident) {
    cur.next();
    if (t.text == "eps") return bEps();
    return bVar(t.text);
  }
  cur.expect("(");
  const Token& head = cur.next();
  if (head.kind != Token::Kind::Ident) cur.fail("expected an operator name");
  std::vector<BoundPtr> children;
  while (!cur.is(")")) {
    if (cur.atEnd()) cur.fail("unterminated bound term");
    children.push_back(boundTerm(cur));
  }
  cur.expect(")");
  if ((head.text == "concat" || head.text == "times") && children.size() == 2) {
    return head.text == "concat" ? bCat(children[0], children[1]) : bTimes(children[0], children[1]);
  }
  return bForeign(head.text, std::move(children));
}

std::size_t number(TokenCursor& cur) {
  const Token& t = cur.peek();
  if (t.kind != Token::Kind::Digits) cur.fail("expected a number");
  cur.next();
  return std::stoul(t.text);
}

PorPtr program(TokenCursor& cur);

template <typename F>
auto labelled(TokenCursor& cur, std::string_view label, F parseInner) {
  if (cur.is("(") && cur.peek(1).kind == Token::Kind::Ident && cur.peek(1).text == label) {
    cur.next();
    cur.next();
    auto inner = parseInner(cur);
    cur.expect(")");
    return inner;
  }
  return parseInner(cur);
}

PorPtr program(TokenCursor& cur) {
  cur.expect("(");
  const Token& head = cur.next();
  if (head.kind != Token::Kind::Ident) cur.fail("expected a function name");
  const std::string name = head.text;
  PorPtr out;
  if (name == "empty" || name == "E") {
    out = E();
  } else if (name == "proj") {
    const std::size_t n = number(cur);
    out = proj(n, number(cur));
  } else if (name == "succ") {
    const std::size_t b = number(cur);
    if (b > 1) cur.fail("succ takes 0 or 1");
    out = succ(b == 1);
  } else if (name == "cond") {
    out = cond();
  } else if (name == "query") {
    out = query();
  } else if (name == "comp") {
    auto g = program(cur);
    std::vector<PorPtr> hs;
    while (!cur.is(")")) {
      if (cur.atEnd()) cur.fail("unterminated composition");
      hs.push_back(program(cur));
    }
    out = comp(std::move(g), std::move(hs));
  } else if (name == "rec") {
    auto g = labelled(cur, "g", program);
    auto h0 = labelled(cur, "h0", program);
    auto h1 = labelled(cur, "h1", program);
    auto t = labelled(cur, "bound", boundTerm);
    out = rec(std::move(g), std::move(h0), std::move(h1), std::move(t));
  } else {
    cur.fail("unknown function '" + name + "'");
  }
  cur.expect(")");
  return out;
}

}  // namespace

PorPtr parse(std::string_view text) {
  TokenCursor cur(detail::tokenize(text));
  auto f = program(cur);
  if (!cur.atEnd()) cur.fail("trailing input");
  return f;
}

BoundPtr parseBound(std::string_view text) {
  TokenCursor cur(detail::tokenize(text));
  auto t = boundTerm(cur);
  if (!cur.atEnd()) cur.fail("trailing input");
  return t;
}

std::string toString(const BoundPtr& t) {
  switch (t->kind) {
    case BoundTerm::Kind::Eps: return "eps";
    case BoundTerm::Kind::Zero: return "0";
    case BoundTerm::Kind::One: return "1";
    case BoundTerm::Kind::Var: return t->name;
    case BoundTerm::Kind::Concat:
    case BoundTerm::Kind::Times:
    case BoundTerm::Kind::Foreign: {
      std::string out = "(";
      out += t->kind == BoundTerm::Kind::Concat ? "concat" : t->kind == BoundTerm::Kind::Times ? "times" : t->name;
      for (const auto& c : t->children) out += " " + toString(c);
      return out + ")";
    }
  }
  throw std::logic_error("unreachable");
}

std::string toString(const PorPtr& f) {
  switch (f->kind) {
    case PorFn::Kind::E: return "(empty)";
    case PorFn::Kind::Proj: return "(proj " + std::to_string(f->n) + " " + std::to_string(f->i) + ")";
    case PorFn::Kind::Succ: return f->bit ? "(succ 1)" : "(succ 0)";
    case PorFn::Kind::Cond: return "(cond)";
    case PorFn::Kind::Query: return "(query)";
    case PorFn::Kind::Compose: {
      std::string out = "(comp " + toString(f->g);
      for (const auto& h : f->hs) out += " " + toString(h);
      return out + ")";
    }
    case PorFn::Kind::Rec:
      return "(rec (g " + toString(f->g) + ") (h0 " + toString(f->h0) + ") (h1 " + toString(f->h1) + ") (bound " +
             toString(f->bound) + "))";
  }
  throw std::logic_error("unreachable");
}

}  // namespace flipbench::por
