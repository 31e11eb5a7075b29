#pragma once

#include <cstddef>

#include "flipbench/machine.hpp"
#include "flipbench/por.hpp"
#include "flipbench/sifp.hpp"

namespace flipbench::translate {

/// A SIFP_RA program computing f: inputs in X1..Xn (never written), result
/// in R. Temporaries live in Y registers. `arity` is used when f itself
/// does not fix one.
sifp::StmtPtr compilePorToRA(const por::PorPtr& f, std::size_t arity = 0);

/// Replaces every `flip e` by a lookup in a memo table kept in S registers
/// above those the source uses: a known coordinate reloads its bit, a new
/// one draws `randbit` and is recorded.
sifp::StmtPtr compileRAtoLA(const sifp::StmtPtr& p);

/// A multi-tape on-demand machine: tapes X1..Xn first (n = max(inputs,
/// highest X index used)), then the other registers in name order, then an
/// expression tape. `randbit` becomes the only oracle-labelled step; the
/// output tape is R's.
machine::Machine compileLAtoMachine(const sifp::StmtPtr& p, std::size_t inputs = 0);

}  // namespace flipbench::translate
