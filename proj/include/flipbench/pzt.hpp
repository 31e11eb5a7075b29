#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flipbench/circuit.hpp"

namespace flipbench::pzt {

struct PztOptions {
  std::optional<std::size_t> iterations;  // default 37 * m
  std::size_t rho = 0;                    // circuits with m < rho go to hOracle
  std::optional<std::size_t> rBits;       // default m + 3
  std::optional<std::size_t> kBits;       // default 2m; k = (kBits random bits) + 1
};

struct PztResult {
  bool accept = false;
  bool viaOracle = false;
  std::size_t rounds = 0;  // rounds actually run (stops at the first non-zero residue)
};

/// The randomized zero test: each round draws r_i in [0, 2^rBits) and
/// k in [1, 2^kBits] and evaluates mod k; accepts iff every round gives 0.
PztResult pztRun(const Circuit& c, std::uint64_t seed, const PztOptions& opts = {});

struct Interval {
  double lo = 0, hi = 0;
};
/// Wilson score interval for `successes` out of `total` at normal quantile z.
Interval wilson(std::size_t successes, std::size_t total, double z);
constexpr double kZ99 = 2.5758293035489004;

struct ErrorRate {
  std::size_t wrong = 0;
  std::size_t total = 0;
  Interval wilson99;
  bool truth = false;  // hOracle verdict
};
/// Fraction of seeds trialSeed(seed, t) on which pztRun disagrees with hOracle.
ErrorRate errorRate(const Circuit& c, std::size_t trials, std::uint64_t seed, const PztOptions& opts = {});

/// Roots of p over S^n (n = p.vars()), by exhaustion.
std::size_t szCount(const SparsePoly& p, const std::vector<BigInt>& s, std::size_t maxPoints = 10'000'000);

struct SzFamily {
  std::size_t maxVars = 2;
  std::size_t maxDegree = 3;
  long coefLo = -2, coefHi = 2;
  long pointLo = 0, pointHi = 4;
};
struct SzReport {
  std::size_t checked = 0;     // non-zero polynomials examined
  std::size_t violations = 0;  // roots > d |S|^(n-1)
  double worstRatio = 0;       // max roots / bound over polynomials with a positive bound
  std::string firstViolation;
};
/// Every polynomial with at most maxVars variables, total degree at most
/// maxDegree and coefficients in [coefLo, coefHi], against the bound with
/// S = [pointLo, pointHi] and d the actual total degree.
SzReport szCheck(const SzFamily& family = {});

struct PrimeDensityRow {
  std::size_t m = 0;
  std::uint64_t limit = 0;   // 2^(2m)
  std::uint64_t primes = 0;  // pi(limit)
  bool pass = false;         // primes >= limit / (8m)
};
std::vector<PrimeDensityRow> primeDensityCheck(std::size_t mLo, std::size_t mHi);
/// pi(n) by the sieve of Eratosthenes.
std::uint64_t primeCount(std::uint64_t n);

}  // namespace flipbench::pzt
