#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flipbench/bitstring.hpp"
#include "flipbench/distribution.hpp"
#include "flipbench/randomness.hpp"

namespace flipbench::machine {

/// OnDemand: transitions labelled 0, 1 or natural (no oracle bit consumed).
/// Stream: canonical stream machine, every step consumes one bit.
/// Ptm: transitions labelled 0 form delta_0, labelled 1 form delta_1; step n
/// uses delta_{eta(n)}.
enum class Kind { OnDemand, Stream, Ptm };
enum class Label { Zero, One, Natural };

constexpr char kBlank = '_';
/// In a read pattern: any symbol. In a write pattern: keep the symbol read.
constexpr char kAny = '*';

/// Per-tape strings: `read` and `write` over {0,1,_,*}, `moves` over {L,R,S}.
struct Transition {
  std::string from;
  std::string read;
  Label label = Label::Natural;
  std::string to;
  std::string write;
  std::string moves;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Machine {
  Kind kind = Kind::OnDemand;
  std::size_t tapes = 1;
  std::size_t inputs = 1;  // tapes 0..inputs-1 start with the inputs
  std::size_t output = 0;  // output: non-blank run left of this tape's head
  std::string start;
  std::set<std::string> halt;
  std::vector<Transition> transitions;
};

/// Checks shapes, label/kind compatibility and determinism. Throws ValidationError.
void validate(const Machine& m);

struct Tape {
  std::string cells;
  long offset = 0;  // absolute position of cells[0]
  long head = 0;

  char read() const;
  void write(char c);
  void move(char dir);
  /// Non-blank run ending just left of the head.
  BitString leftOfHead() const;
  /// Content with surrounding blanks trimmed, as (first position, symbols).
  std::pair<long, std::string> normalized() const;
};

struct Config {
  std::size_t state = 0;
  std::vector<Tape> tapes;
};

/// A validated machine with states interned; the engine behind every runner.
class Simulator {
 public:
  explicit Simulator(const Machine& m);

  const Machine& machine() const { return m_; }
  Config initial(const std::vector<BitString>& inputs) const;
  bool halted(const Config& c) const;
  const std::string& stateName(const Config& c) const { return names_[c.state]; }

  /// The transition applicable under `label`, if any.
  const Transition* match(const Config& c, Label label) const;
  /// Applies one transition (wildcards resolved against the current symbols).
  void apply(Config& c, const Transition& t) const;
  /// True when both transitions have the same effect on `c`.
  bool sameEffect(const Config& c, const Transition& a, const Transition& b) const;
  BitString output(const Config& c) const;
  std::string describe(const Config& c) const;

 private:
  std::size_t stateId(const std::string& name) const;

  Machine m_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> byState_;
  std::vector<bool> halting_;
  std::vector<std::size_t> targets_;
};

struct RunResult {
  BitString output;
  std::size_t steps = 0;
  std::size_t consumed = 0;  // stream positions read
  std::vector<std::string> trace;
};

constexpr std::size_t kDefaultFuel = 1'000'000;

/// Runs the machine according to its kind.
RunResult run(const Machine& m, const std::vector<BitString>& inputs, StreamAccess& stream,
              std::size_t fuel = kDefaultFuel, bool trace = false);
RunResult runStm(const Machine& m, const std::vector<BitString>& inputs, StreamAccess& stream,
                 std::size_t fuel = kDefaultFuel, bool trace = false);
RunResult runOd(const Machine& m, const std::vector<BitString>& inputs, StreamAccess& stream,
                std::size_t fuel = kDefaultFuel, bool trace = false);
RunResult runPtm(const Machine& m, const std::vector<BitString>& inputs, StreamAccess& stream,
                 std::size_t fuel = kDefaultFuel, bool trace = false);
/// As run(), but the randomness is the finite string `y`; reading past it
/// throws RandomnessExhausted.
RunResult runFstm(const Machine& m, const std::vector<BitString>& inputs, const BitString& y,
                  std::size_t fuel = kDefaultFuel);

/// Exact output distribution by exploring the configuration tree. A step
/// forks only when the two possible random bits lead to different
/// transitions, so bits that cannot influence the run are marginalised.
/// `maxBits` caps the forks along one path.
ExactOutcome exactOutputs(const Machine& m, const std::vector<BitString>& inputs, std::size_t maxBits,
                          std::size_t fuel = kDefaultFuel);

/// Delta_H: every natural transition becomes a 0-labelled and a 1-labelled copy.
Machine odToCanonical(const Machine& m);
Machine splitStmToPtm(const Machine& m);
Machine ptmToStm(const Machine& m);

Machine parse(std::string_view text);
std::string toString(const Machine& m);
std::string toString(Kind k);

}  // namespace flipbench::machine
