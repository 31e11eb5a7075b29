#include <stdexcept>

#include "flipbench/rl.hpp"
#include "lexer.hpp"

namespace flipbench::rl {

TermPtr var(std::string name) { return std::make_shared<Term>(Term{Term::Kind::Var, std::move(name), {}, {}}); }
TermPtr eps() { return std::make_shared<Term>(Term{Term::Kind::Eps, {}, {}, {}}); }
TermPtr zero() { return std::make_shared<Term>(Term{Term::Kind::Zero, {}, {}, {}}); }
TermPtr one() { return std::make_shared<Term>(Term{Term::Kind::One, {}, {}, {}}); }
TermPtr cat(TermPtr t, TermPtr s) {
  return std::make_shared<Term>(Term{Term::Kind::Concat, {}, std::move(t), std::move(s)});
}
TermPtr times(TermPtr t, TermPtr s) {
  return std::make_shared<Term>(Term{Term::Kind::Times, {}, std::move(t), std::move(s)});
}

TermPtr literal(const BitString& s) {
  if (s.empty()) return eps();
  TermPtr t = s[0] ? one() : zero();
  for (std::size_t i = 1; i < s.size(); ++i) t = cat(t, s[i] ? one() : zero());
  return t;
}

namespace {

FormulaPtr make(Formula f) { return std::make_shared<Formula>(std::move(f)); }

FormulaPtr quant(Quantifier q, Range r, std::string x, TermPtr bound, FormulaPtr body) {
  Formula f;
  f.kind = Formula::Kind::Quant;
  f.t = std::move(bound);
  f.a = std::move(body);
  f.quantifier = q;
  f.range = r;
  f.variable = std::move(x);
  return make(std::move(f));
}

FormulaPtr node(Formula::Kind kind, TermPtr t, TermPtr s, FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = kind;
  f.t = std::move(t);
  f.s = std::move(s);
  f.a = std::move(a);
  f.b = std::move(b);
  return make(std::move(f));
}

}  // namespace

FormulaPtr flip(TermPtr t) { return node(Formula::Kind::Flip, std::move(t), {}, {}, {}); }
FormulaPtr eq(TermPtr t, TermPtr s) { return node(Formula::Kind::Eq, std::move(t), std::move(s), {}, {}); }
FormulaPtr subEq(TermPtr t, TermPtr s) { return node(Formula::Kind::SubEq, std::move(t), std::move(s), {}, {}); }
FormulaPtr negate(FormulaPtr f) { return node(Formula::Kind::Not, {}, {}, std::move(f), {}); }
FormulaPtr conj(FormulaPtr f, FormulaPtr g) { return node(Formula::Kind::And, {}, {}, std::move(f), std::move(g)); }
FormulaPtr disj(FormulaPtr f, FormulaPtr g) { return node(Formula::Kind::Or, {}, {}, std::move(f), std::move(g)); }
FormulaPtr exists(std::string x, FormulaPtr body) {
  return quant(Quantifier::Exists, Range::Unbounded, std::move(x), nullptr, std::move(body));
}
FormulaPtr forall(std::string x, FormulaPtr body) {
  return quant(Quantifier::Forall, Range::Unbounded, std::move(x), nullptr, std::move(body));
}
FormulaPtr existsBounded(std::string x, TermPtr bound, FormulaPtr body) {
  return quant(Quantifier::Exists, Range::Bounded, std::move(x), std::move(bound), std::move(body));
}
FormulaPtr forallBounded(std::string x, TermPtr bound, FormulaPtr body) {
  return quant(Quantifier::Forall, Range::Bounded, std::move(x), std::move(bound), std::move(body));
}
FormulaPtr existsSubword(std::string x, TermPtr bound, FormulaPtr body) {
  return quant(Quantifier::Exists, Range::Subword, std::move(x), std::move(bound), std::move(body));
}
FormulaPtr forallSubword(std::string x, TermPtr bound, FormulaPtr body) {
  return quant(Quantifier::Forall, Range::Subword, std::move(x), std::move(bound), std::move(body));
}
FormulaPtr measureQ(TermPtr t, TermPtr s, FormulaPtr body) {
  return node(Formula::Kind::MeasureQ, std::move(t), std::move(s), std::move(body), {});
}

FormulaPtr expandAbbreviations(const FormulaPtr& f) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::Flip:
    case K::Eq:
    case K::SubEq:
      return f;
    case K::Not:
      return negate(expandAbbreviations(f->a));
    case K::And:
      return conj(expandAbbreviations(f->a), expandAbbreviations(f->b));
    case K::Or:
      return disj(expandAbbreviations(f->a), expandAbbreviations(f->b));
    case K::MeasureQ:
      return measureQ(f->t, f->s, expandAbbreviations(f->a));
    case K::Quant: {
      auto body = expandAbbreviations(f->a);
      if (f->range == Range::Unbounded) return quant(f->quantifier, Range::Unbounded, f->variable, nullptr, body);
      FormulaPtr guard;
      if (f->range == Range::Bounded) {
        guard = subEq(times(one(), var(f->variable)), times(one(), f->t));
      } else {
        // Fresh witness name that cannot clash with identifiers users write.
        const std::string w = "w_" + f->variable;
        guard = exists(w, conj(subEq(var(w), f->t), subEq(cat(var(w), var(f->variable)), f->t)));
      }
      if (f->quantifier == Quantifier::Exists) return exists(f->variable, conj(guard, body));
      return forall(f->variable, disj(negate(guard), body));
    }
  }
  throw std::logic_error("unreachable");
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind || a->name != b->name) return false;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (!a || !b) return a == b;
  return a->kind == b->kind && a->quantifier == b->quantifier && a->range == b->range &&
         a->variable == b->variable && equal(a->t, b->t) && equal(a->s, b->s) && equal(a->a, b->a) &&
         equal(a->b, b->b);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string termPrimary(const TermPtr& t) {
  if (t->kind == Term::Kind::Concat || t->kind == Term::Kind::Times) return "(" + toString(t) + ")";
  return toString(t);
}

std::string termProduct(const TermPtr& t) {
  if (t->kind == Term::Kind::Times) return termProduct(t->lhs) + " * " + termPrimary(t->rhs);
  return termPrimary(t);
}

}  // namespace

std::string toString(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var: return t->name;
    case Term::Kind::Eps: return "eps";
    case Term::Kind::Zero: return "0";
    case Term::Kind::One: return "1";
    case Term::Kind::Concat: {
      const std::string rhs = t->rhs->kind == Term::Kind::Concat ? "(" + toString(t->rhs) + ")" : termProduct(t->rhs);
      return toString(t->lhs) + " . " + rhs;
    }
    case Term::Kind::Times: return termProduct(t);
  }
  throw std::logic_error("unreachable");
}

namespace {

std::string atomic(const FormulaPtr& f) {
  using K = Formula::Kind;
  if (f->kind == K::Flip || f->kind == K::Eq || f->kind == K::SubEq || f->kind == K::Not) return toString(f);
  return "(" + toString(f) + ")";
}

}  // namespace

std::string toString(const FormulaPtr& f) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::Flip: return "Flip(" + toString(f->t) + ")";
    case K::Eq: return toString(f->t) + " = " + toString(f->s);
    case K::SubEq: return toString(f->t) + " sub " + toString(f->s);
    case K::Not: return "~" + atomic(f->a);
    case K::And: return atomic(f->a) + " & " + atomic(f->b);
    case K::Or: return atomic(f->a) + " | " + atomic(f->b);
    case K::MeasureQ: return "C[" + toString(f->t) + " / " + toString(f->s) + "] " + atomic(f->a);
    case K::Quant: {
      const std::string q = f->quantifier == Quantifier::Exists ? "E" : "A";
      switch (f->range) {
        case Range::Unbounded: return q + " " + f->variable + " . " + atomic(f->a);
        case Range::Bounded: return q + " " + f->variable + " <= " + termProduct(f->t) + " . " + atomic(f->a);
        case Range::Subword: return q + "sub " + f->variable + " in " + termProduct(f->t) + " . " + atomic(f->a);
      }
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

using detail::Token;
using detail::TokenCursor;

bool isKeyword(const std::string& s) {
  return s == "Flip" || s == "E" || s == "A" || s == "Esub" || s == "Asub" || s == "C" || s == "sub" ||
         s == "in" || s == "eps";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : cur_(detail::tokenize(text)) {}

  TermPtr wholeTerm() {
    auto t = term();
    if (!cur_.atEnd()) cur_.fail("unexpected trailing input");
    return t;
  }

  FormulaPtr wholeFormula() {
    auto f = formula();
    if (!cur_.atEnd()) cur_.fail("unexpected trailing input");
    return f;
  }

 private:
  TermPtr term() {
    auto t = product();
    while (cur_.accept(".")) t = cat(t, product());
    return t;
  }

  TermPtr product() {
    auto t = primary();
    while (cur_.accept("*")) t = times(t, primary());
    return t;
  }

  TermPtr primary() {
    const Token& tok = cur_.peek();
    if (tok.kind == Token::Kind::Digits) {
      cur_.next();
      TermPtr t;
      for (char c : tok.text) {
        if (c != '0' && c != '1') throw ParseError("digit literal must be binary", tok.line, tok.column);
        auto bit = c == '1' ? one() : zero();
        t = t ? cat(t, bit) : bit;
      }
      return t;
    }
    if (tok.kind == Token::Kind::Ident) {
      if (tok.text == "eps") {
        cur_.next();
        return eps();
      }
      if (isKeyword(tok.text)) cur_.fail("expected a term");
      cur_.next();
      return var(tok.text);
    }
    if (cur_.accept("(")) {
      auto t = term();
      cur_.expect(")");
      return t;
    }
    cur_.fail("expected a term");
  }

  std::string identifier() {
    const Token& tok = cur_.peek();
    if (tok.kind != Token::Kind::Ident || isKeyword(tok.text)) cur_.fail("expected a variable name");
    cur_.next();
    return tok.text;
  }

  FormulaPtr formula() {
    if (auto q = quantified()) return q;
    auto f = conjunction();
    while (cur_.accept("|")) f = disj(f, conjunctionOrQuantified());
    return f;
  }

  FormulaPtr conjunctionOrQuantified() {
    if (auto q = quantified()) return q;
    return conjunction();
  }

  FormulaPtr conjunction() {
    auto f = unary();
    while (cur_.accept("&")) f = conj(f, unary());
    return f;
  }

  FormulaPtr unary() {
    if (cur_.accept("~")) return negate(unary());
    if (auto q = quantified()) return q;
    return atom();
  }

  // Quantifiers and measure quantifiers extend as far right as possible.
  FormulaPtr quantified() {
    if (cur_.is("E") || cur_.is("A")) {
      const bool ex = cur_.next().text == "E";
      auto x = identifier();
      if (cur_.accept("<=")) {
        auto bound = product();
        cur_.expect(".");
        auto body = formula();
        return ex ? existsBounded(x, bound, body) : forallBounded(x, bound, body);
      }
      cur_.expect(".");
      auto body = formula();
      return ex ? exists(x, body) : forall(x, body);
    }
    if (cur_.is("Esub") || cur_.is("Asub")) {
      const bool ex = cur_.next().text == "Esub";
      auto x = identifier();
      cur_.expect("in");
      auto bound = product();
      cur_.expect(".");
      auto body = formula();
      return ex ? existsSubword(x, bound, body) : forallSubword(x, bound, body);
    }
    if (cur_.is("C") && cur_.peek(1).text == "[") {
      cur_.next();
      cur_.expect("[");
      auto t = term();
      cur_.expect("/");
      auto s = term();
      cur_.expect("]");
      return measureQ(t, s, formula());
    }
    return nullptr;
  }

  FormulaPtr atom() {
    if (cur_.is("Flip")) {
      cur_.next();
      cur_.expect("(");
      auto t = term();
      cur_.expect(")");
      return flip(t);
    }
    if (cur_.is("(")) {
      // Either a parenthesised term on the left of a comparison, or a
      // parenthesised formula.
      const auto mark = cur_.mark();
      try {
        auto t = term();
        if (cur_.is("=") || cur_.is("sub")) return comparison(t);
      } catch (const ParseError&) {
      }
      cur_.reset(mark);
      cur_.expect("(");
      auto f = formula();
      cur_.expect(")");
      return f;
    }
    return comparison(term());
  }

  FormulaPtr comparison(TermPtr lhs) {
    if (cur_.accept("=")) return eq(lhs, term());
    if (cur_.accept("sub")) return subEq(lhs, term());
    cur_.fail("expected '=' or 'sub'");
  }

  TokenCursor cur_;
};

}  // namespace

TermPtr parseTerm(std::string_view text) { return Parser(text).wholeTerm(); }
FormulaPtr parseFormula(std::string_view text) { return Parser(text).wholeFormula(); }

}  // namespace flipbench::rl
