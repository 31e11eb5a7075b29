#include "flipbench/machine.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "flipbench/errors.hpp"

namespace flipbench::machine {

namespace {

char labelChar(Label l) { return l == Label::Zero ? '0' : l == Label::One ? '1' : '#'; }

bool overlaps(const std::string& a, const std::string& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != kAny && b[k] != kAny && a[k] != b[k]) return false;
  }
  return true;
}

bool conflicting(Label a, Label b) { return a == b || a == Label::Natural || b == Label::Natural; }

std::string describeTransition(const Transition& t) {
  return "(" + t.from + ", " + t.read + ", " + labelChar(t.label) + ") -> (" + t.to + ", " + t.write + ", " +
         t.moves + ")";
}

}  // namespace

std::string toString(Kind k) {
  switch (k) {
    case Kind::OnDemand: return "od";
    case Kind::Stream: return "stm";
    case Kind::Ptm: return "ptm";
  }
  throw std::logic_error("unreachable");
}

void validate(const Machine& m) {
  auto fail = [](const std::string& what) { throw ValidationError(what); };
  if (m.tapes == 0) fail("a machine needs at least one tape");
  if (m.inputs > m.tapes) fail("more input tapes than tapes");
  if (m.output >= m.tapes) fail("output tape out of range");
  if (m.start.empty()) fail("no start state");
  std::map<std::string, std::vector<const Transition*>> byState;
  for (const auto& t : m.transitions) {
    const std::string where = " in " + describeTransition(t);
    if (t.read.size() != m.tapes || t.write.size() != m.tapes || t.moves.size() != m.tapes) {
      fail("pattern width differs from the tape count" + where);
    }
    for (std::size_t k = 0; k < m.tapes; ++k) {
      if (std::string_view("01_*").find(t.read[k]) == std::string_view::npos) fail("bad read symbol" + where);
      if (std::string_view("01_*").find(t.write[k]) == std::string_view::npos) fail("bad write symbol" + where);
      if (std::string_view("LRS").find(t.moves[k]) == std::string_view::npos) fail("bad move" + where);
    }
    if (m.kind != Kind::OnDemand && t.label == Label::Natural) {
      fail("natural transition in a " + toString(m.kind) + " machine" + where);
    }
    if (m.halt.count(t.from)) fail("transition out of halting state" + where);
    byState[t.from].push_back(&t);
  }
  for (const auto& [state, ts] : byState) {
    for (std::size_t a = 0; a < ts.size(); ++a) {
      for (std::size_t b = a + 1; b < ts.size(); ++b) {
        if (conflicting(ts[a]->label, ts[b]->label) && overlaps(ts[a]->read, ts[b]->read)) {
          fail("nondeterministic transitions " + describeTransition(*ts[a]) + " and " + describeTransition(*ts[b]));
        }
      }
    }
  }
}

char Tape::read() const {
  const long idx = head - offset;
  if (idx < 0 || idx >= static_cast<long>(cells.size())) return kBlank;
  return cells[static_cast<std::size_t>(idx)];
}

void Tape::write(char c) {
  long idx = head - offset;
  if (idx < 0) {
    if (c == kBlank) return;
    cells.insert(0, static_cast<std::size_t>(-idx), kBlank);
    offset = head;
    idx = 0;
  }
  if (idx >= static_cast<long>(cells.size())) {
    if (c == kBlank) return;
    cells.resize(static_cast<std::size_t>(idx) + 1, kBlank);
  }
  cells[static_cast<std::size_t>(idx)] = c;
}

void Tape::move(char dir) {
  if (dir == 'L') --head;
  if (dir == 'R') ++head;
}

BitString Tape::leftOfHead() const {
  long idx = std::min<long>(head - offset, static_cast<long>(cells.size()));
  long begin = idx;
  while (begin > 0 && cells[static_cast<std::size_t>(begin - 1)] != kBlank) --begin;
  if (idx <= 0) return {};
  return BitString::parse(cells.substr(static_cast<std::size_t>(begin), static_cast<std::size_t>(idx - begin)));
}

std::pair<long, std::string> Tape::normalized() const {
  const auto first = cells.find_first_not_of(kBlank);
  if (first == std::string::npos) return {0, {}};
  const auto last = cells.find_last_not_of(kBlank);
  return {offset + static_cast<long>(first), cells.substr(first, last - first + 1)};
}

Simulator::Simulator(const Machine& m) : m_(m) {
  validate(m_);
  std::map<std::string, std::size_t> ids;
  auto intern = [&](const std::string& n) {
    auto [it, fresh] = ids.emplace(n, names_.size());
    if (fresh) names_.push_back(n);
    return it->second;
  };
  intern(m_.start);
  for (const auto& h : m_.halt) intern(h);
  for (const auto& t : m_.transitions) {
    intern(t.from);
    intern(t.to);
  }
  byState_.resize(names_.size());
  halting_.resize(names_.size());
  for (std::size_t k = 0; k < m_.transitions.size(); ++k) {
    byState_[ids[m_.transitions[k].from]].push_back(k);
    targets_.push_back(ids[m_.transitions[k].to]);
  }
  for (const auto& h : m_.halt) halting_[ids[h]] = true;
}

std::size_t Simulator::stateId(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::logic_error("unknown state " + name);
  return static_cast<std::size_t>(it - names_.begin());
}

Config Simulator::initial(const std::vector<BitString>& inputs) const {
  if (inputs.size() > m_.inputs) {
    throw ValidationError("machine takes " + std::to_string(m_.inputs) + " inputs, " +
                          std::to_string(inputs.size()) + " given");
  }
  Config c;
  c.state = 0;
  c.tapes.resize(m_.tapes);
  for (std::size_t k = 0; k < inputs.size(); ++k) c.tapes[k].cells = inputs[k].bits();
  return c;
}

bool Simulator::halted(const Config& c) const { return halting_[c.state]; }

const Transition* Simulator::match(const Config& c, Label label) const {
  for (std::size_t idx : byState_[c.state]) {
    const Transition& t = m_.transitions[idx];
    if (t.label != label) continue;
    bool ok = true;
    for (std::size_t k = 0; k < m_.tapes && ok; ++k) ok = t.read[k] == kAny || t.read[k] == c.tapes[k].read();
    if (ok) return &t;
  }
  return nullptr;
}

void Simulator::apply(Config& c, const Transition& t) const {
  for (std::size_t k = 0; k < m_.tapes; ++k) {
    if (t.write[k] != kAny) c.tapes[k].write(t.write[k]);
    c.tapes[k].move(t.moves[k]);
  }
  const Transition* base = m_.transitions.data();
  const bool own = std::less_equal<const Transition*>()(base, &t) &&
                   std::less<const Transition*>()(&t, base + m_.transitions.size());
  c.state = own ? targets_[static_cast<std::size_t>(&t - base)] : stateId(t.to);
}

bool Simulator::sameEffect(const Config& c, const Transition& a, const Transition& b) const {
  if (&a == &b) return true;
  if (a.to != b.to || a.moves != b.moves) return false;
  for (std::size_t k = 0; k < m_.tapes; ++k) {
    const char cur = c.tapes[k].read();
    if ((a.write[k] == kAny ? cur : a.write[k]) != (b.write[k] == kAny ? cur : b.write[k])) return false;
  }
  return true;
}

BitString Simulator::output(const Config& c) const { return c.tapes[m_.output].leftOfHead(); }

std::string Simulator::describe(const Config& c) const {
  std::string out = names_[c.state];
  for (const auto& t : c.tapes) {
    out += " |";
    const auto [first, content] = t.normalized();
    const long lo = std::min(first, t.head), hi = std::max(first + static_cast<long>(content.size()), t.head + 1);
    for (long p = lo; p < hi; ++p) {
      if (p == t.head) out += '[';
      const long idx = p - first;
      out += idx >= 0 && idx < static_cast<long>(content.size()) ? content[static_cast<std::size_t>(idx)] : kBlank;
      if (p == t.head) out += ']';
    }
  }
  return out;
}

namespace {

[[noreturn]] void stuck(const Simulator& sim, const Config& c) {
  throw StuckMachine("machine stuck in non-halting configuration " + sim.describe(c));
}

RunResult drive(const Machine& m, const std::vector<BitString>& inputs, StreamAccess& stream, std::size_t fuel,
                bool trace) {
  Simulator sim(m);
  Config c = sim.initial(inputs);
  RunResult r;
  if (trace) r.trace.push_back(sim.describe(c));
  while (!sim.halted(c)) {
    if (r.steps >= fuel) throw FuelExhausted("machine ran out of fuel after " + std::to_string(fuel) + " steps");
    const Transition* t = nullptr;
    if (m.kind == Kind::OnDemand) t = sim.match(c, Label::Natural);
    if (!t) {
      const Transition* t0 = sim.match(c, Label::Zero);
      const Transition* t1 = sim.match(c, Label::One);
      if (!t0 && !t1) stuck(sim, c);
      const std::size_t pos = m.kind == Kind::Ptm ? r.steps : r.consumed;
      const bool bit = stream.at(pos);
      r.consumed = pos + 1;
      t = bit ? t1 : t0;
      if (!t && m.kind != Kind::Ptm) stuck(sim, c);
    }
    if (t) sim.apply(c, *t);
    ++r.steps;
    if (trace) r.trace.push_back(sim.describe(c));
  }
  r.output = sim.output(c);
  return r;
}

void requireKind(const Machine& m, Kind k) {
  if (m.kind != k) throw ValidationError("expected a " + toString(k) + " machine, got " + toString(m.kind));
}

class FiniteStream final : public StreamAccess {
 public:
  explicit FiniteStream(const BitString& y) : y_(y) {}
  bool at(std::size_t index) override {
    if (index >= y_.size()) {
      throw RandomnessExhausted("finite randomness of length " + std::to_string(y_.size()) + " exhausted");
    }
    return y_[index];
  }

 private:
  const BitString& y_;
};

}  // namespace

RunResult run(const Machine& m, const std::vector<BitString>& inputs, StreamAccess& stream, std::size_t fuel,
              bool trace) {
  return drive(m, inputs, stream, fuel, trace);
}

RunResult runStm(const Machine& m, const std::vector<BitString>& inputs, StreamAccess& stream, std::size_t fuel,
                 bool trace) {
  requireKind(m, Kind::Stream);
  return drive(m, inputs, stream, fuel, trace);
}

RunResult runOd(const Machine& m, const std::vector<BitString>& inputs, StreamAccess& stream, std::size_t fuel,
                bool trace) {
  requireKind(m, Kind::OnDemand);
  return drive(m, inputs, stream, fuel, trace);
}

RunResult runPtm(const Machine& m, const std::vector<BitString>& inputs, StreamAccess& stream, std::size_t fuel,
                 bool trace) {
  requireKind(m, Kind::Ptm);
  return drive(m, inputs, stream, fuel, trace);
}

RunResult runFstm(const Machine& m, const std::vector<BitString>& inputs, const BitString& y, std::size_t fuel) {
  FiniteStream s(y);
  return drive(m, inputs, s, fuel, false);
}

ExactOutcome exactOutputs(const Machine& m, const std::vector<BitString>& inputs, std::size_t maxBits,
                          std::size_t fuel) {
  Simulator sim(m);
  ExactOutcome out;
  auto fail = [&out](std::size_t forks, const std::string& msg) {
    out.errorMass += DyadicRational::pow2(forks);
    if (out.errors.size() < 8 && std::find(out.errors.begin(), out.errors.end(), msg) == out.errors.end()) {
      out.errors.push_back(msg);
    }
    ++out.leaves;
  };
  struct Node {
    Config c;
    std::size_t forks;
    std::size_t steps;
  };
  std::vector<Node> stack{{sim.initial(inputs), 0, 0}};
  while (!stack.empty()) {
    Node n = std::move(stack.back());
    stack.pop_back();
    for (;;) {
      out.maxDepth = std::max(out.maxDepth, n.forks);
      if (sim.halted(n.c)) {
        out.outputs[sim.output(n.c)] += DyadicRational::pow2(n.forks);
        ++out.leaves;
        break;
      }
      if (n.steps >= fuel) {
        out.fuelExhausted = true;
        fail(n.forks, "machine ran out of fuel after " + std::to_string(fuel) + " steps");
        break;
      }
      const Transition* nat = m.kind == Kind::OnDemand ? sim.match(n.c, Label::Natural) : nullptr;
      if (nat) {
        sim.apply(n.c, *nat);
        ++n.steps;
        continue;
      }
      const Transition* t0 = sim.match(n.c, Label::Zero);
      const Transition* t1 = sim.match(n.c, Label::One);
      if (!t0 && !t1) {
        fail(n.forks, "machine stuck in state " + sim.stateName(n.c));
        break;
      }
      if (t0 && t1 && sim.sameEffect(n.c, *t0, *t1)) {
        sim.apply(n.c, *t0);
        ++n.steps;
        continue;
      }
      if (n.forks >= maxBits) {
        out.budgetExceeded = true;
        fail(n.forks, "random-bit budget of " + std::to_string(maxBits) + " exceeded");
        break;
      }
      for (const Transition* t : {t1, t0}) {
        Node child{n.c, n.forks + 1, n.steps + 1};
        if (t) {
          sim.apply(child.c, *t);
        } else if (m.kind != Kind::Ptm) {
          fail(child.forks, "machine stuck in state " + sim.stateName(n.c));
          continue;
        }
        stack.push_back(std::move(child));
      }
      break;
    }
  }
  return out;
}

Machine odToCanonical(const Machine& m) {
  requireKind(m, Kind::OnDemand);
  Machine out = m;
  out.kind = Kind::Stream;
  out.transitions.clear();
  for (const auto& t : m.transitions) {
    if (t.label != Label::Natural) {
      out.transitions.push_back(t);
      continue;
    }
    for (Label l : {Label::Zero, Label::One}) {
      Transition copy = t;
      copy.label = l;
      out.transitions.push_back(std::move(copy));
    }
  }
  return out;
}

Machine splitStmToPtm(const Machine& m) {
  requireKind(m, Kind::Stream);
  Machine out = m;
  out.kind = Kind::Ptm;
  return out;
}

Machine ptmToStm(const Machine& m) {
  requireKind(m, Kind::Ptm);
  Machine out = m;
  out.kind = Kind::Stream;
  return out;
}

Machine parse(std::string_view text) {
  static const std::regex kTransition(
      R"(\(\s*([^,\s()]+)\s*,\s*([01_*]+)\s*,\s*([01#])\s*\)\s*->\s*\(\s*([^,\s()]+)\s*,\s*([01_*]+)\s*,\s*([LRS]+)\s*\))");
  Machine m;
  bool sawTapes = false, sawInputs = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto c = line.find("//"); c != std::string::npos) line.erase(c);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    auto fail = [&](const std::string& what) -> void { throw ParseError(what, lineNo, first + 1); };
    if (line[0] == '(') {
      std::smatch mt;
      if (!std::regex_match(line, mt, kTransition)) fail("malformed transition");
      const char lab = mt[3].str()[0];
      m.transitions.push_back({mt[1], mt[2], lab == '0' ? Label::Zero : lab == '1' ? Label::One : Label::Natural,
                               mt[4], mt[5], mt[6]});
      continue;
    }
    std::istringstream words(line);
    std::string key, value, extra;
    words >> key >> value;
    if (value.empty() || (words >> extra)) fail("expected '<keyword> <value>'");
    auto number = [&]() -> std::size_t {
      if (value.find_first_not_of("0123456789") != std::string::npos) fail("expected a number");
      return std::stoul(value);
    };
    if (key == "kind") {
      if (value == "od") m.kind = Kind::OnDemand;
      else if (value == "stm") m.kind = Kind::Stream;
      else if (value == "ptm") m.kind = Kind::Ptm;
      else fail("kind must be od, stm or ptm");
    } else if (key == "tapes") {
      m.tapes = number();
      sawTapes = true;
    } else if (key == "inputs") {
      m.inputs = number();
      sawInputs = true;
    } else if (key == "output") {
      m.output = number();
    } else if (key == "start") {
      m.start = value;
    } else if (key == "halt") {
      m.halt.insert(value);
    } else if (key == "state") {
      // declarations are informational
    } else {
      fail("unknown keyword '" + key + "'");
    }
  }
  if (!sawInputs) m.inputs = std::min<std::size_t>(1, m.tapes);
  if (!sawTapes && !m.transitions.empty()) m.tapes = m.transitions.front().read.size();
  validate(m);
  return m;
}

std::string toString(const Machine& m) {
  std::string out = "kind " + toString(m.kind) + "\ntapes " + std::to_string(m.tapes) + "\ninputs " +
                    std::to_string(m.inputs) + "\noutput " + std::to_string(m.output) + "\nstart " + m.start + "\n";
  for (const auto& h : m.halt) out += "halt " + h + "\n";
  for (const auto& t : m.transitions) out += describeTransition(t) + "\n";
  return out;
}

}  // namespace flipbench::machine
