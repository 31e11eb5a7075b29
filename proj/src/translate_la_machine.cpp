#include <algorithm>
#include <map>
#include <stdexcept>

#include "flipbench/errors.hpp"
#include "flipbench/translate.hpp"

namespace flipbench::translate {

namespace {

using machine::Label;
using machine::Machine;
using machine::Transition;
using namespace sifp;

// Register tapes keep their content at and right of the head, blanks
// elsewhere. Erasing leaves the head just past the old content, which
// becomes the new origin. Every fragment below runs from state `from` to
// state `to` and restores that layout on the tapes it touches.
class MachineBuilder {
 public:
  MachineBuilder(std::map<std::string, std::size_t> tapeOf, std::size_t tapes)
      : tapeOf_(std::move(tapeOf)), tapes_(tapes), expr_(tapes - 1) {}

  std::string fresh() { return "q" + std::to_string(counter_++); }

  void stmt(const StmtPtr& p, const std::string& from, const std::string& to) {
    switch (p->kind) {
      case Stmt::Kind::Assign: {
        const std::string evaluated = fresh(), erased = fresh();
        expr(p->e, from, evaluated);
        erase(tape(p->reg), evaluated, erased);
        copy(expr_, tape(p->reg), erased, to);
        return;
      }
      case Stmt::Kind::Seq: {
        const std::string mid = fresh();
        stmt(p->s, from, mid);
        stmt(p->t, mid, to);
        return;
      }
      case Stmt::Kind::While: {
        const std::string evaluated = fresh(), body = fresh();
        expr(p->e, from, evaluated);
        classify(expr_, evaluated, to, to, body, to);
        stmt(p->s, body, from);
        return;
      }
      case Stmt::Kind::RandBit: {
        const std::string erased = fresh();
        const std::size_t r = tape("R");
        erase(r, from, erased);
        add(erased, to, {}, {{r, '0'}}, {}, Label::Zero);
        add(erased, to, {}, {{r, '1'}}, {}, Label::One);
        return;
      }
      case Stmt::Kind::Flip: throw ValidationError("flip in a program compiled to a stream machine");
    }
  }

  // Leaves the value of e on the expression tape.
  void expr(const ExprPtr& e, const std::string& from, const std::string& to) {
    switch (e->kind) {
      case Expr::Kind::Eps: erase(expr_, from, to); return;
      case Expr::Kind::Id: {
        const std::string erased = fresh();
        erase(expr_, from, erased);
        copy(tape(e->reg), expr_, erased, to);
        return;
      }
      case Expr::Kind::Append0:
      case Expr::Kind::Append1: {
        const std::string mid = fresh();
        expr(e->e, from, mid);
        append(expr_, e->kind == Expr::Kind::Append1 ? '1' : '0', mid, to);
        return;
      }
      case Expr::Kind::SubEq: {
        const std::string mid = fresh();
        expr(e->e, from, mid);
        prefixTest(tape(e->reg), mid, to);
        return;
      }
      case Expr::Kind::And: {
        const std::string mid = fresh(), lhsOne = fresh(), yes = fresh(), no = fresh();
        expr(e->e, from, mid);
        classify(expr_, mid, no, no, lhsOne, no);
        classify(tape(e->reg), lhsOne, no, no, yes, no);
        setResult('1', yes, to);
        setResult('0', no, to);
        return;
      }
      case Expr::Kind::Not: {
        const std::string mid = fresh(), yes = fresh(), no = fresh();
        expr(e->e, from, mid);
        classify(expr_, mid, no, yes, no, no);
        setResult('1', yes, to);
        setResult('0', no, to);
        return;
      }
    }
  }

  // Moves the output tape's head past its content and halts.
  void finish(const std::string& from, const std::string& halt) {
    const std::size_t r = tape("R");
    add(from, from, {{r, '0'}}, {}, {{r, 'R'}});
    add(from, from, {{r, '1'}}, {}, {{r, 'R'}});
    add(from, halt, {{r, '_'}}, {}, {});
  }

  std::vector<Transition> take() { return std::move(ts_); }

 private:
  using Spec = std::map<std::size_t, char>;

  std::size_t tape(const std::string& reg) const { return tapeOf_.at(reg); }

  void add(const std::string& from, const std::string& to, const Spec& read, const Spec& write, const Spec& moves,
           Label label = Label::Natural) {
    Transition t{from, std::string(tapes_, '*'), label, to, std::string(tapes_, '*'), std::string(tapes_, 'S')};
    for (auto [k, c] : read) t.read[k] = c;
    for (auto [k, c] : write) t.write[k] = c;
    for (auto [k, c] : moves) t.moves[k] = c;
    ts_.push_back(std::move(t));
  }

  void erase(std::size_t t, const std::string& from, const std::string& to) {
    add(from, from, {{t, '0'}}, {{t, '_'}}, {{t, 'R'}});
    add(from, from, {{t, '1'}}, {{t, '_'}}, {{t, 'R'}});
    add(from, to, {{t, '_'}}, {}, {});
  }

  // dst must be blank from its head rightwards.
  void copy(std::size_t src, std::size_t dst, const std::string& from, const std::string& to) {
    const std::string back = fresh();
    for (char c : {'0', '1'}) add(from, from, {{src, c}}, {{dst, c}}, {{src, 'R'}, {dst, 'R'}});
    add(from, back, {{src, '_'}}, {}, {{src, 'L'}, {dst, 'L'}});
    rewind(src, {dst}, back, to);
  }

  // Walks `lead` (and the `with` tapes in lockstep) left to the cell after
  // the first blank, starting one step past it.
  void rewind(std::size_t lead, const std::vector<std::size_t>& with, const std::string& from, const std::string& to) {
    Spec left{{lead, 'L'}}, right{{lead, 'R'}};
    for (auto w : with) {
      left[w] = 'L';
      right[w] = 'R';
    }
    for (char c : {'0', '1'}) add(from, from, {{lead, c}}, {}, left);
    add(from, to, {{lead, '_'}}, {}, right);
  }

  void append(std::size_t t, char bit, const std::string& from, const std::string& to) {
    const std::string back = fresh();
    for (char c : {'0', '1'}) add(from, from, {{t, c}}, {}, {{t, 'R'}});
    add(from, back, {{t, '_'}}, {{t, bit}}, {{t, 'L'}});
    rewind(t, {}, back, to);
  }

  // Expression tape := 1 if it is a prefix of `reg`, else 0.
  void prefixTest(std::size_t reg, const std::string& from, const std::string& to) {
    const std::string backYes = fresh(), backNo = fresh(), yes = fresh(), no = fresh();
    const Spec both{{expr_, 'L'}, {reg, 'L'}};
    for (char c : {'0', '1'}) add(from, from, {{expr_, c}, {reg, c}}, {}, {{expr_, 'R'}, {reg, 'R'}});
    add(from, backYes, {{expr_, '_'}}, {}, both);
    for (auto [e, r] : {std::pair{'0', '1'}, {'1', '0'}, {'0', '_'}, {'1', '_'}}) {
      add(from, backNo, {{expr_, e}, {reg, r}}, {}, both);
    }
    rewind(expr_, {reg}, backYes, yes);
    rewind(expr_, {reg}, backNo, no);
    setResult('1', yes, to);
    setResult('0', no, to);
  }

  void setResult(char bit, const std::string& from, const std::string& to) {
    const std::string erased = fresh();
    erase(expr_, from, erased);
    add(erased, to, {}, {{expr_, bit}}, {});
  }

  // Branches on whether tape t holds eps, 0, 1 or a longer string; the head ends where it started.
  void classify(std::size_t t, const std::string& from, const std::string& onEps, const std::string& onZero,
                const std::string& onOne, const std::string& onOther) {
    add(from, onEps, {{t, '_'}}, {}, {});
    for (char c : {'0', '1'}) {
      const std::string seen = fresh();
      add(from, seen, {{t, c}}, {}, {{t, 'R'}});
      add(seen, c == '0' ? onZero : onOne, {{t, '_'}}, {}, {{t, 'L'}});
      for (char d : {'0', '1'}) add(seen, onOther, {{t, d}}, {}, {{t, 'L'}});
    }
  }

  std::map<std::string, std::size_t> tapeOf_;
  std::size_t tapes_;
  std::size_t expr_;
  std::size_t counter_ = 0;
  std::vector<Transition> ts_;
};

}  // namespace

machine::Machine compileLAtoMachine(const sifp::StmtPtr& p, std::size_t inputs) {
  const Flavor fl = flavor(p);
  if (fl == Flavor::RA || fl == Flavor::Mixed) throw ValidationError("compileLAtoMachine expects a SIFP_LA program");
  auto regs = registers(p);
  regs.insert("R");
  std::size_t n = inputs;
  for (const auto& r : regs) {
    if (r[0] == 'X') n = std::max<std::size_t>(n, std::stoul(r.substr(1)));
  }
  std::map<std::string, std::size_t> tapeOf;
  for (std::size_t k = 1; k <= n; ++k) tapeOf["X" + std::to_string(k)] = k - 1;
  for (const auto& r : regs) {
    if (!tapeOf.count(r)) {
      const std::size_t next = tapeOf.size();
      tapeOf.emplace(r, next);
    }
  }
  const std::size_t tapes = tapeOf.size() + 1;
  Machine m;
  m.kind = machine::Kind::OnDemand;
  m.tapes = tapes;
  m.inputs = n;
  m.output = tapeOf.at("R");
  m.start = "start";
  m.halt = {"halt"};
  MachineBuilder b(tapeOf, tapes);
  b.stmt(p, "start", "fin");
  b.finish("fin", "halt");
  m.transitions = b.take();
  machine::validate(m);
  return m;
}

}  // namespace flipbench::translate
