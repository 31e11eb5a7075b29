#include "flipbench/sifp.hpp"

#include <cctype>
#include <functional>
#include <stdexcept>

#include "flipbench/errors.hpp"
#include "lexer.hpp"

namespace flipbench::sifp {

namespace {

ExprPtr enode(Expr::Kind k, ExprPtr e = nullptr, std::string reg = {}) {
  return std::make_shared<Expr>(Expr{k, std::move(e), std::move(reg)});
}

StmtPtr snode(Stmt::Kind k, std::string reg = {}, ExprPtr e = nullptr, StmtPtr s = nullptr, StmtPtr t = nullptr) {
  return std::make_shared<Stmt>(Stmt{k, std::move(reg), std::move(e), std::move(s), std::move(t)});
}

void requireRegister(const std::string& reg) {
  if (!isRegister(reg)) throw ValidationError("'" + reg + "' is not a register name");
}

}  // namespace

ExprPtr eps() { return enode(Expr::Kind::Eps); }
ExprPtr app0(ExprPtr e) { return enode(Expr::Kind::Append0, std::move(e)); }
ExprPtr app1(ExprPtr e) { return enode(Expr::Kind::Append1, std::move(e)); }
ExprPtr id(std::string reg) {
  requireRegister(reg);
  return enode(Expr::Kind::Id, nullptr, std::move(reg));
}
ExprPtr subEq(ExprPtr e, std::string reg) {
  requireRegister(reg);
  return enode(Expr::Kind::SubEq, std::move(e), std::move(reg));
}
ExprPtr andE(ExprPtr e, std::string reg) {
  requireRegister(reg);
  return enode(Expr::Kind::And, std::move(e), std::move(reg));
}
ExprPtr notE(ExprPtr e) { return enode(Expr::Kind::Not, std::move(e)); }
ExprPtr literal(const BitString& s) {
  ExprPtr out = eps();
  for (std::size_t k = 0; k < s.size(); ++k) out = s[k] ? app1(out) : app0(out);
  return out;
}

StmtPtr assign(std::string reg, ExprPtr e) {
  requireRegister(reg);
  return snode(Stmt::Kind::Assign, std::move(reg), std::move(e));
}
StmtPtr seq(StmtPtr s, StmtPtr t) { return snode(Stmt::Kind::Seq, {}, nullptr, std::move(s), std::move(t)); }
StmtPtr seqAll(const std::vector<StmtPtr>& stmts) {
  if (stmts.empty()) throw std::invalid_argument("seqAll of no statements");
  StmtPtr out = stmts.back();
  for (std::size_t k = stmts.size() - 1; k-- > 0;) out = seq(stmts[k], out);
  return out;
}
StmtPtr whileDo(ExprPtr guard, StmtPtr body) {
  return snode(Stmt::Kind::While, {}, std::move(guard), std::move(body));
}
StmtPtr flip(ExprPtr e) { return snode(Stmt::Kind::Flip, {}, std::move(e)); }
StmtPtr randBit() { return snode(Stmt::Kind::RandBit); }

bool isRegister(std::string_view name) {
  if (name == "R" || name == "Q" || name == "Z" || name == "T") return true;
  if (name.size() < 2 || (name[0] != 'X' && name[0] != 'Y' && name[0] != 'S')) return false;
  if (name[1] == '0') return false;
  for (std::size_t k = 1; k < name.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(name[k]))) return false;
  }
  return true;
}

BitString lookup(const Store& store, const std::string& reg) {
  auto it = store.find(reg);
  return it == store.end() ? BitString{} : it->second;
}

BitString evalExpr(const ExprPtr& e, const Store& store) {
  static const BitString kZero = BitString::parse("0"), kOne = BitString::parse("1");
  switch (e->kind) {
    case Expr::Kind::Eps: return {};
    case Expr::Kind::Append0: return evalExpr(e->e, store).appended(false);
    case Expr::Kind::Append1: return evalExpr(e->e, store).appended(true);
    case Expr::Kind::Id: return lookup(store, e->reg);
    case Expr::Kind::SubEq: return isPrefix(evalExpr(e->e, store), lookup(store, e->reg)) ? kOne : kZero;
    case Expr::Kind::And: return evalExpr(e->e, store) == kOne && lookup(store, e->reg) == kOne ? kOne : kZero;
    case Expr::Kind::Not: return evalExpr(e->e, store) == kZero ? kOne : kZero;
  }
  throw std::logic_error("unreachable");
}

namespace {

void collect(const StmtPtr& p, bool& hasFlip, bool& hasRand) {
  switch (p->kind) {
    case Stmt::Kind::Flip: hasFlip = true; return;
    case Stmt::Kind::RandBit: hasRand = true; return;
    case Stmt::Kind::Assign: return;
    case Stmt::Kind::Seq:
      collect(p->s, hasFlip, hasRand);
      collect(p->t, hasFlip, hasRand);
      return;
    case Stmt::Kind::While: collect(p->s, hasFlip, hasRand); return;
  }
}

void exprRegisters(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  if (!e->reg.empty()) out.insert(e->reg);
  exprRegisters(e->e, out);
}

void stmtRegisters(const StmtPtr& p, std::set<std::string>& out) {
  if (!p) return;
  if (!p->reg.empty()) out.insert(p->reg);
  if (p->kind == Stmt::Kind::Flip || p->kind == Stmt::Kind::RandBit) out.insert("R");
  exprRegisters(p->e, out);
  stmtRegisters(p->s, out);
  stmtRegisters(p->t, out);
}

class Interpreter {
 public:
  Interpreter(Store store, std::size_t fuel, std::function<bool(const BitString&)> draw, const TraceSink& trace)
      : store_(std::move(store)), fuel_(fuel), draw_(std::move(draw)), trace_(trace) {}

  void exec(const StmtPtr& p) {
    burn();
    switch (p->kind) {
      case Stmt::Kind::Assign:
        store_[p->reg] = evalExpr(p->e, store_);
        if (trace_) trace_(p->reg + " := " + store_[p->reg].str());
        return;
      case Stmt::Kind::Seq:
        exec(p->s);
        exec(p->t);
        return;
      case Stmt::Kind::While:
        while (evalExpr(p->e, store_) == BitString::parse("1")) {
          exec(p->s);
          burn();
        }
        return;
      case Stmt::Kind::Flip:
      case Stmt::Kind::RandBit: {
        const BitString coord = p->e ? evalExpr(p->e, store_) : BitString{};
        store_["R"] = BitString::repeat(draw_(coord), 1);
        if (trace_) {
          trace_((p->kind == Stmt::Kind::Flip ? "flip " + coord.str() : std::string("randbit")) + " -> R := " +
                 store_["R"].str());
        }
        return;
      }
    }
  }

  Store& store() { return store_; }

 private:
  void burn() {
    if (fuel_ == 0) throw FuelExhausted("SIFP interpreter ran out of fuel");
    --fuel_;
  }

  Store store_;
  std::size_t fuel_;
  std::function<bool(const BitString&)> draw_;
  const TraceSink& trace_;
};

}  // namespace

Flavor flavor(const StmtPtr& p) {
  bool hasFlip = false, hasRand = false;
  collect(p, hasFlip, hasRand);
  if (hasFlip && hasRand) return Flavor::Mixed;
  if (hasFlip) return Flavor::RA;
  if (hasRand) return Flavor::LA;
  return Flavor::Deterministic;
}

std::set<std::string> registers(const StmtPtr& p) {
  std::set<std::string> out;
  stmtRegisters(p, out);
  return out;
}

Store runRA(const StmtPtr& p, Store store, OracleAccess& oracle, std::size_t fuel, const TraceSink& trace) {
  const Flavor fl = flavor(p);
  if (fl == Flavor::LA || fl == Flavor::Mixed) throw ValidationError("randbit in a SIFP_RA program");
  Interpreter in(std::move(store), fuel, [&oracle](const BitString& c) { return oracle.query(c); }, trace);
  in.exec(p);
  return std::move(in.store());
}

LAResult runLA(const StmtPtr& p, Store store, StreamAccess& stream, std::size_t fuel, const TraceSink& trace) {
  const Flavor fl = flavor(p);
  if (fl == Flavor::RA || fl == Flavor::Mixed) throw ValidationError("flip in a SIFP_LA program");
  std::size_t consumed = 0;
  Interpreter in(std::move(store), fuel, [&](const BitString&) { return stream.at(consumed++); }, trace);
  in.exec(p);
  return {std::move(in.store()), consumed};
}

Store loadInputs(const std::vector<BitString>& inputs) {
  Store s;
  for (std::size_t k = 0; k < inputs.size(); ++k) s["X" + std::to_string(k + 1)] = inputs[k];
  return s;
}

BitString evalProgramRA(const StmtPtr& p, const std::vector<BitString>& inputs, OracleAccess& oracle,
                        std::size_t fuel) {
  return lookup(runRA(p, loadInputs(inputs), oracle, fuel), "R");
}

BitString evalProgramLA(const StmtPtr& p, const std::vector<BitString>& inputs, StreamAccess& stream,
                        std::size_t fuel) {
  return lookup(runLA(p, loadInputs(inputs), stream, fuel).store, "R");
}

namespace {

using detail::Token;
using detail::TokenCursor;

std::string reg(TokenCursor& cur) {
  const Token& t = cur.peek();
  if (t.kind != Token::Kind::Ident || !isRegister(t.text)) cur.fail("expected a register");
  cur.next();
  return t.text;
}

ExprPtr expr(TokenCursor& cur);

ExprPtr atom(TokenCursor& cur) {
  if (cur.accept("eps")) return eps();
  if (cur.accept("(")) {
    auto e = expr(cur);
    cur.expect(")");
    return e;
  }
  return id(reg(cur));
}

ExprPtr unary(TokenCursor& cur) {
  if (cur.accept("not")) return notE(unary(cur));
  return atom(cur);
}

ExprPtr expr(TokenCursor& cur) {
  ExprPtr e = unary(cur);
  for (;;) {
    if (cur.accept("sub")) {
      e = subEq(e, reg(cur));
    } else if (cur.accept("and")) {
      e = andE(e, reg(cur));
    } else if (cur.accept(".")) {
      const Token& b = cur.peek();
      if (b.kind != Token::Kind::Digits || (b.text != "0" && b.text != "1")) cur.fail("expected .0 or .1");
      cur.next();
      e = b.text == "1" ? app1(e) : app0(e);
    } else {
      return e;
    }
  }
}

StmtPtr block(TokenCursor& cur, std::string_view terminator);

StmtPtr stmt(TokenCursor& cur) {
  if (cur.accept("while")) {
    auto guard = expr(cur);
    cur.expect("{");
    auto body = block(cur, "}");
    cur.expect("}");
    return whileDo(guard, body);
  }
  if (cur.accept("flip")) return flip(expr(cur));
  if (cur.accept("randbit")) return randBit();
  auto r = reg(cur);
  cur.expect(":=");
  return assign(r, expr(cur));
}

StmtPtr block(TokenCursor& cur, std::string_view terminator) {
  std::vector<StmtPtr> stmts{stmt(cur)};
  while (cur.accept(";")) {
    if (cur.atEnd() || cur.is(terminator)) break;
    stmts.push_back(stmt(cur));
  }
  return seqAll(stmts);
}

bool isPostfix(const ExprPtr& e) {
  return e->kind == Expr::Kind::Append0 || e->kind == Expr::Kind::Append1 || e->kind == Expr::Kind::SubEq ||
         e->kind == Expr::Kind::And;
}

void flatten(const StmtPtr& p, std::vector<StmtPtr>& out) {
  if (p->kind == Stmt::Kind::Seq) {
    flatten(p->s, out);
    flatten(p->t, out);
  } else {
    out.push_back(p);
  }
}

void print(const StmtPtr& p, std::size_t indent, std::string& out) {
  std::vector<StmtPtr> parts;
  flatten(p, parts);
  const std::string pad(indent, ' ');
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& s = parts[k];
    out += pad;
    switch (s->kind) {
      case Stmt::Kind::Assign: out += s->reg + " := " + toString(s->e); break;
      case Stmt::Kind::Flip: out += "flip " + toString(s->e); break;
      case Stmt::Kind::RandBit: out += "randbit"; break;
      case Stmt::Kind::While:
        out += "while " + toString(s->e) + " {\n";
        print(s->s, indent + 2, out);
        out += pad + "}";
        break;
      case Stmt::Kind::Seq: break;
    }
    out += k + 1 < parts.size() ? " ;\n" : "\n";
  }
}

}  // namespace

StmtPtr parse(std::string_view text) {
  TokenCursor cur(detail::tokenize(text));
  auto p = block(cur, "");
  if (!cur.atEnd()) cur.fail("expected ';' or end of program");
  return p;
}

ExprPtr parseExpr(std::string_view text) {
  TokenCursor cur(detail::tokenize(text));
  auto e = expr(cur);
  if (!cur.atEnd()) cur.fail("trailing input");
  return e;
}

std::string toString(const ExprPtr& e) {
  auto base = [](const ExprPtr& b) { return b->kind == Expr::Kind::Not ? "(" + toString(b) + ")" : toString(b); };
  switch (e->kind) {
    case Expr::Kind::Eps: return "eps";
    case Expr::Kind::Id: return e->reg;
    case Expr::Kind::Append0: return base(e->e) + ".0";
    case Expr::Kind::Append1: return base(e->e) + ".1";
    case Expr::Kind::SubEq: return base(e->e) + " sub " + e->reg;
    case Expr::Kind::And: return base(e->e) + " and " + e->reg;
    case Expr::Kind::Not: return "not " + (isPostfix(e->e) ? "(" + toString(e->e) + ")" : toString(e->e));
  }
  throw std::logic_error("unreachable");
}

std::string toString(const StmtPtr& p) {
  std::string out;
  print(p, 0, out);
  return out;
}

}  // namespace flipbench::sifp
