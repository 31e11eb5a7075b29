#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flipbench/distribution.hpp"
#include "flipbench/machine.hpp"
#include "flipbench/por.hpp"
#include "flipbench/sifp.hpp"

namespace flipbench::harness {

struct RaProgram {
  sifp::StmtPtr program;
};
struct LaProgram {
  sifp::StmtPtr program;
};
/// A POR function, a SIFP_RA or SIFP_LA program, or a machine of any kind.
using Model = std::variant<por::PorPtr, RaProgram, LaProgram, machine::Machine>;

struct Budget {
  std::size_t maxBits = 24;
  std::size_t fuel = machine::kDefaultFuel;
};

/// Oracle models fork on each fresh coordinate (repeats are memoised),
/// linear models on each stream position.
ExactOutcome exactOutcome(const Model& model, const std::vector<BitString>& inputs, const Budget& budget = {});
/// Throws BudgetExceeded, FuelExhausted or Error when some path failed.
Distribution exactDist(const Model& model, const std::vector<BitString>& inputs, const Budget& budget = {});

struct SampleCounts {
  std::map<BitString, std::size_t> counts;
  std::size_t trials = 0;
  std::size_t failures = 0;  // runs that raised an error (fuel, stuck, ...)
};
/// Reproducible Monte Carlo: trial t runs with randomness seeded by (seed, t).
SampleCounts sampleDist(const Model& model, const std::vector<BitString>& inputs, std::size_t trials,
                        std::uint64_t seed, const Budget& budget = {});

enum class Stage { Por, SifpRA, SifpLA, OnDemand, Canonical, Ptm };
constexpr Stage kStages[] = {Stage::Por,      Stage::SifpRA,    Stage::SifpLA,
                             Stage::OnDemand, Stage::Canonical, Stage::Ptm};
std::string toString(Stage s);

struct Chain {
  por::PorPtr por;
  sifp::StmtPtr ra, la;
  machine::Machine od, stm, ptm;

  Model model(Stage s) const;
};
/// Runs every translator on f.
Chain buildChain(const por::PorPtr& f, std::size_t arity = 0);

struct StageResult {
  Stage stage;
  std::optional<Distribution> dist;
  std::string error;
  bool equal = false;  // matches the POR stage
};
struct ChainRow {
  std::vector<BitString> input;
  std::vector<StageResult> stages;
  bool allEqual() const;
};
struct ChainReport {
  std::optional<Stage> compileFailure;
  std::string compileError;
  std::vector<ChainRow> rows;
  bool allEqual() const;
};
ChainReport checkChain(const por::PorPtr& f, const std::vector<std::vector<BitString>>& inputs,
                       const Budget& budget = {});

/// Every tuple of `arity` strings of length at most maxLen.
std::vector<std::vector<BitString>> allInputs(std::size_t arity, std::size_t maxLen);

/// M2 after M1 on disjoint tapes: when M1 halts, its output is copied onto
/// M2's first input tape and M2 starts, reading the rest of the stream.
machine::Machine composeMachines(const machine::Machine& m1, const machine::Machine& m2);

struct ComposeRow {
  BitString input;
  std::optional<Distribution> composed, expected;
  std::string error;
  bool equal = false;
};
struct ComposeReport {
  std::vector<ComposeRow> rows;
  bool allEqual() const;
};
/// Compares exactDist(M2 o M1) with the monadic composition of the two
/// machines' kernels on each input.
ComposeReport checkMonadicCompose(const machine::Machine& m1, const machine::Machine& m2,
                                  const std::vector<BitString>& inputs, const Budget& budget = {});

}  // namespace flipbench::harness
