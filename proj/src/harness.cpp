#include "flipbench/harness.hpp"

#include <algorithm>
#include <stdexcept>

#include "flipbench/errors.hpp"
#include "flipbench/translate.hpp"

namespace flipbench::harness {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

BitString runOnce(const Model& model, const std::vector<BitString>& inputs, OracleAccess* oracle,
                  StreamAccess* stream, const Budget& budget) {
  return std::visit(Overloaded{
                        [&](const por::PorPtr& f) { return por::evalPor(f, inputs, *oracle); },
                        [&](const RaProgram& p) { return sifp::evalProgramRA(p.program, inputs, *oracle, budget.fuel); },
                        [&](const LaProgram& p) { return sifp::evalProgramLA(p.program, inputs, *stream, budget.fuel); },
                        [&](const machine::Machine& m) { return machine::run(m, inputs, *stream, budget.fuel).output; },
                    },
                    model);
}

}  // namespace

ExactOutcome exactOutcome(const Model& model, const std::vector<BitString>& inputs, const Budget& budget) {
  if (auto* m = std::get_if<machine::Machine>(&model)) {
    return machine::exactOutputs(*m, inputs, budget.maxBits, budget.fuel);
  }
  const bool linear = std::holds_alternative<LaProgram>(model);
  return enumeratePaths(
      [&](const std::vector<bool>& decisions) {
        if (linear) {
          DecisionStream s(decisions);
          return runOnce(model, inputs, nullptr, &s, budget);
        }
        DecisionOracle o(decisions);
        return runOnce(model, inputs, &o, nullptr, budget);
      },
      budget.maxBits);
}

Distribution exactDist(const Model& model, const std::vector<BitString>& inputs, const Budget& budget) {
  return exactOutcome(model, inputs, budget).distribution();
}

SampleCounts sampleDist(const Model& model, const std::vector<BitString>& inputs, std::size_t trials,
                        std::uint64_t seed, const Budget& budget) {
  if (trials == 0) throw ValidationError("sampleDist needs at least one trial");
  SampleCounts out;
  out.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s = trialSeed(seed, t);
    Oracle oracle(s);
    Stream stream(s);
    try {
      ++out.counts[runOnce(model, inputs, &oracle, &stream, budget)];
    } catch (const Error&) {
      ++out.failures;
    }
  }
  return out;
}

std::string toString(Stage s) {
  switch (s) {
    case Stage::Por: return "por";
    case Stage::SifpRA: return "sifp-ra";
    case Stage::SifpLA: return "sifp-la";
    case Stage::OnDemand: return "od-stm";
    case Stage::Canonical: return "stm";
    case Stage::Ptm: return "ptm";
  }
  throw std::logic_error("unreachable");
}

Model Chain::model(Stage s) const {
  switch (s) {
    case Stage::Por: return por;
    case Stage::SifpRA: return RaProgram{ra};
    case Stage::SifpLA: return LaProgram{la};
    case Stage::OnDemand: return od;
    case Stage::Canonical: return stm;
    case Stage::Ptm: return ptm;
  }
  throw std::logic_error("unreachable");
}

namespace {

struct StageFailure {
  Stage stage;
  std::string what;
};

template <typename F>
auto attempt(Stage s, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw StageFailure{s, e.what()};
  }
}

}  // namespace

Chain buildChain(const por::PorPtr& f, std::size_t arity) {
  Chain c;
  c.por = f;
  c.ra = translate::compilePorToRA(f, arity);
  c.la = translate::compileRAtoLA(c.ra);
  c.od = translate::compileLAtoMachine(c.la, por::arity(*f).value_or(arity));
  c.stm = machine::odToCanonical(c.od);
  c.ptm = machine::splitStmToPtm(c.stm);
  return c;
}

bool ChainRow::allEqual() const {
  return std::all_of(stages.begin(), stages.end(), [](const StageResult& s) { return s.equal; });
}

bool ChainReport::allEqual() const {
  return !compileFailure && std::all_of(rows.begin(), rows.end(), [](const ChainRow& r) { return r.allEqual(); });
}

ChainReport checkChain(const por::PorPtr& f, const std::vector<std::vector<BitString>>& inputs, const Budget& budget) {
  ChainReport report;
  Chain chain;
  try {
    chain.por = f;
    attempt(Stage::Por, [&] { por::requireValid(f); return 0; });
    const std::size_t arity = inputs.empty() ? 0 : inputs.front().size();
    chain.ra = attempt(Stage::SifpRA, [&] { return translate::compilePorToRA(f, arity); });
    chain.la = attempt(Stage::SifpLA, [&] { return translate::compileRAtoLA(chain.ra); });
    chain.od = attempt(Stage::OnDemand, [&] { return translate::compileLAtoMachine(chain.la, arity); });
    chain.stm = attempt(Stage::Canonical, [&] { return machine::odToCanonical(chain.od); });
    chain.ptm = attempt(Stage::Ptm, [&] { return machine::splitStmToPtm(chain.stm); });
  } catch (const StageFailure& e) {
    report.compileFailure = e.stage;
    report.compileError = e.what;
    return report;
  }
  for (const auto& input : inputs) {
    ChainRow row;
    row.input = input;
    for (Stage s : kStages) {
      StageResult r{s, std::nullopt, {}, false};
      try {
        r.dist = exactDist(chain.model(s), input, budget);
      } catch (const Error& e) {
        r.error = e.what();
      }
      const auto& reference = row.stages.empty() ? r.dist : row.stages.front().dist;
      r.equal = r.dist && reference && *r.dist == *reference;
      row.stages.push_back(std::move(r));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<std::vector<BitString>> allInputs(std::size_t arity, std::size_t maxLen) {
  const auto strings = stringsUpTo(maxLen);
  std::vector<std::vector<BitString>> out{{}};
  for (std::size_t k = 0; k < arity; ++k) {
    std::vector<std::vector<BitString>> next;
    for (const auto& prefix : out) {
      for (const auto& s : strings) {
        auto t = prefix;
        t.push_back(s);
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return out;
}

machine::Machine composeMachines(const machine::Machine& m1, const machine::Machine& m2) {
  using machine::Label;
  using machine::Transition;
  machine::validate(m1);
  machine::validate(m2);
  if (m1.kind != m2.kind) throw ValidationError("composed machines must be of the same kind");
  if (m2.inputs < 1) throw ValidationError("the second machine needs an input tape");
  const std::size_t k1 = m1.tapes, k2 = m2.tapes, width = k1 + k2;
  machine::Machine out;
  out.kind = m1.kind;
  out.tapes = width;
  out.inputs = m1.inputs;
  out.output = k1 + m2.output;
  out.start = "a:" + m1.start;
  for (const auto& h : m2.halt) out.halt.insert("b:" + h);
  auto embed = [&](const Transition& t, const std::string& prefix, std::size_t offset) {
    Transition e{prefix + t.from, std::string(width, '*'), t.label, prefix + t.to, std::string(width, '*'),
                 std::string(width, 'S')};
    e.read.replace(offset, t.read.size(), t.read);
    e.write.replace(offset, t.write.size(), t.write);
    e.moves.replace(offset, t.moves.size(), t.moves);
    return e;
  };
  for (const auto& t : m1.transitions) out.transitions.push_back(embed(t, "a:", 0));
  for (const auto& t : m2.transitions) out.transitions.push_back(embed(t, "b:", k1));

  const std::size_t src = m1.output, dst = k1;
  auto glue = [&](const std::string& from, const std::string& to, std::map<std::size_t, char> read,
                  std::map<std::size_t, char> write, std::map<std::size_t, char> moves) {
    Transition t{from, std::string(width, '*'), Label::Natural, to, std::string(width, '*'), std::string(width, 'S')};
    for (auto [k, c] : read) t.read[k] = c;
    for (auto [k, c] : write) t.write[k] = c;
    for (auto [k, c] : moves) t.moves[k] = c;
    if (out.kind == machine::Kind::OnDemand) {
      out.transitions.push_back(std::move(t));
      return;
    }
    for (Label l : {Label::Zero, Label::One}) {
      t.label = l;
      out.transitions.push_back(t);
    }
  };
  for (const auto& h : m1.halt) glue("a:" + h, "g:scan", {}, {}, {{src, 'L'}});
  for (char c : {'0', '1'}) glue("g:scan", "g:scan", {{src, c}}, {}, {{src, 'L'}});
  glue("g:scan", "g:copy", {{src, '_'}}, {}, {{src, 'R'}});
  for (char c : {'0', '1'}) glue("g:copy", "g:copy", {{src, c}}, {{dst, c}}, {{src, 'R'}, {dst, 'R'}});
  glue("g:copy", "g:back", {{src, '_'}}, {}, {{dst, 'L'}});
  for (char c : {'0', '1'}) glue("g:back", "g:back", {{dst, c}}, {}, {{dst, 'L'}});
  glue("g:back", "b:" + m2.start, {{dst, '_'}}, {}, {{dst, 'R'}});
  machine::validate(out);
  return out;
}

bool ComposeReport::allEqual() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const ComposeRow& r) { return r.equal; });
}

ComposeReport checkMonadicCompose(const machine::Machine& m1, const machine::Machine& m2,
                                  const std::vector<BitString>& inputs, const Budget& budget) {
  ComposeReport report;
  const auto composed = composeMachines(m1, m2);
  const Kernel second = [&](const BitString& rho) { return exactDist(m2, {rho}, budget); };
  for (const auto& input : inputs) {
    ComposeRow row{input, std::nullopt, std::nullopt, {}, false};
    try {
      row.composed = exactDist(composed, {input}, budget);
      row.expected = monadicCompose(second, exactDist(m1, {input}, budget));
      row.equal = *row.composed == *row.expected;
    } catch (const Error& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace flipbench::harness
