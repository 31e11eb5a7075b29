#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flipbench/bitstring.hpp"
#include "flipbench/randomness.hpp"

namespace flipbench::sifp {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Eps, Append0, Append1, Id, SubEq, And, Not };
  Kind kind;
  ExprPtr e;        // Append0/1, SubEq, And, Not
  std::string reg;  // Id, SubEq, And
};

ExprPtr eps();
ExprPtr app0(ExprPtr e);
ExprPtr app1(ExprPtr e);
ExprPtr id(std::string reg);
ExprPtr subEq(ExprPtr e, std::string reg);
ExprPtr andE(ExprPtr e, std::string reg);
ExprPtr notE(ExprPtr e);
/// eps followed by the given bits.
ExprPtr literal(const BitString& s);

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  enum class Kind { Assign, Seq, While, Flip, RandBit };
  Kind kind;
  std::string reg;  // Assign
  ExprPtr e;        // Assign, While guard, Flip coordinate
  StmtPtr s, t;     // Seq: s ; t; While: body in s
};

StmtPtr assign(std::string reg, ExprPtr e);
StmtPtr seq(StmtPtr s, StmtPtr t);
/// Right-nested sequence; a single statement is returned as is. Must be non-empty.
StmtPtr seqAll(const std::vector<StmtPtr>& stmts);
StmtPtr whileDo(ExprPtr guard, StmtPtr body);
StmtPtr flip(ExprPtr e);
StmtPtr randBit();

/// X<i>, Y<i>, S<i> (i >= 1), R, Q, Z, T.
bool isRegister(std::string_view name);

using Store = std::map<std::string, BitString>;
/// Unbound registers read as eps.
BitString lookup(const Store& store, const std::string& reg);

BitString evalExpr(const ExprPtr& e, const Store& store);

enum class Flavor { Deterministic, RA, LA, Mixed };
Flavor flavor(const StmtPtr& p);
std::set<std::string> registers(const StmtPtr& p);

constexpr std::size_t kDefaultFuel = 1'000'000;

/// Receives one line per executed assignment, flip or randbit.
using TraceSink = std::function<void(const std::string&)>;

/// Big-step semantics with random access to the oracle. Each rule
/// application costs one unit of fuel.
Store runRA(const StmtPtr& p, Store store, OracleAccess& oracle, std::size_t fuel = kDefaultFuel,
            const TraceSink& trace = nullptr);

struct LAResult {
  Store store;
  std::size_t consumed = 0;
};
LAResult runLA(const StmtPtr& p, Store store, StreamAccess& stream, std::size_t fuel = kDefaultFuel,
               const TraceSink& trace = nullptr);

Store loadInputs(const std::vector<BitString>& inputs);
BitString evalProgramRA(const StmtPtr& p, const std::vector<BitString>& inputs, OracleAccess& oracle,
                        std::size_t fuel = kDefaultFuel);
BitString evalProgramLA(const StmtPtr& p, const std::vector<BitString>& inputs, StreamAccess& stream,
                        std::size_t fuel = kDefaultFuel);

/// `R := e`, `s ; t`, `while e { s }`, `flip e`, `randbit`; expressions
/// `eps`, `e.0`, `e.1`, `e sub Reg`, `e and Reg`, `not e`, parentheses.
StmtPtr parse(std::string_view text);
ExprPtr parseExpr(std::string_view text);
/// One statement per line, bodies indented.
std::string toString(const StmtPtr& p);
std::string toString(const ExprPtr& e);

}  // namespace flipbench::sifp
