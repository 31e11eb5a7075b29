#include "flipbench/pzt.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "flipbench/errors.hpp"
#include "flipbench/randomness.hpp"

namespace flipbench::pzt {

namespace {

__extension__ typedef unsigned __int128 u128;

BigInt randomBits(std::mt19937_64& gen, std::size_t bits) {
  BigInt v = 0;
  for (std::size_t have = 0; have < bits; have += 64) v = (v << 64) | BigInt(gen());
  return v & ((BigInt(1) << bits) - 1);
}

std::uint64_t randomBitsSmall(std::mt19937_64& gen, std::size_t bits) {
  const std::uint64_t w = gen();
  return bits >= 64 ? w : w & ((std::uint64_t{1} << bits) - 1);
}

// Circuit with variables resolved, for the word-sized round loop.
struct Flat {
  std::vector<Node> nodes;
  std::vector<std::size_t> var;
  std::size_t output;
  std::size_t vars;
};

Flat flatten(const Circuit& c) {
  const auto idx = inputIndices(c);
  Flat f{c.nodes(), std::vector<std::size_t>(c.nodes().size(), 0), c.output(), idx.size()};
  for (std::size_t k = 0; k < f.nodes.size(); ++k) {
    if (f.nodes[k].op == Node::Op::Input) {
      f.var[k] = static_cast<std::size_t>(std::lower_bound(idx.begin(), idx.end(), f.nodes[k].value) - idx.begin());
    }
  }
  return f;
}

std::uint64_t evalWord(const Flat& f, const std::vector<std::uint64_t>& r, std::uint64_t k,
                       std::vector<std::uint64_t>& v) {
  for (std::size_t j = 0; j <= f.output; ++j) {
    const Node& n = f.nodes[j];
    switch (n.op) {
      case Node::Op::Input: v[j] = r[f.var[j]] % k; break;
      case Node::Op::Const: v[j] = n.value % k; break;
      case Node::Op::Add: v[j] = static_cast<std::uint64_t>((u128(v[n.a]) + v[n.b]) % k); break;
      case Node::Op::Sub: v[j] = static_cast<std::uint64_t>((u128(v[n.a]) + k - v[n.b]) % k); break;
      case Node::Op::Mul: v[j] = static_cast<std::uint64_t>((u128(v[n.a]) * v[n.b]) % k); break;
    }
  }
  return v[f.output];
}

}  // namespace

PztResult pztRun(const Circuit& c, std::uint64_t seed, const PztOptions& opts) {
  const auto stats = circuitStats(c);
  const std::size_t m = stats.m;
  if (m < opts.rho) return {hOracle(c), true, 0};
  const std::size_t rounds = opts.iterations.value_or(37 * m);
  const std::size_t rBits = opts.rBits.value_or(m + 3);
  const std::size_t kBits = opts.kBits.value_or(2 * m);
  std::mt19937_64 gen(seed);
  PztResult result{true, false, 0};
  if (rBits <= 64 && kBits <= 62) {
    const Flat f = flatten(c);
    std::vector<std::uint64_t> r(f.vars), scratch(f.nodes.size());
    for (std::size_t i = 0; i < rounds; ++i) {
      for (auto& x : r) x = randomBitsSmall(gen, rBits);
      const std::uint64_t k = randomBitsSmall(gen, kBits) + 1;
      ++result.rounds;
      if (evalWord(f, r, k, scratch) != 0) {
        result.accept = false;
        return result;
      }
    }
    return result;
  }
  std::vector<BigInt> r(stats.n);
  for (std::size_t i = 0; i < rounds; ++i) {
    for (auto& x : r) x = randomBits(gen, rBits);
    const BigInt k = randomBits(gen, kBits) + 1;
    ++result.rounds;
    if (evalMod(c, r, k) != 0) {
      result.accept = false;
      return result;
    }
  }
  return result;
}

Interval wilson(std::size_t successes, std::size_t total, double z) {
  if (total == 0) return {0, 1};
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

ErrorRate errorRate(const Circuit& c, std::size_t trials, std::uint64_t seed, const PztOptions& opts) {
  ErrorRate out;
  out.truth = hOracle(c);
  out.total = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    if (pztRun(c, trialSeed(seed, t), opts).accept != out.truth) ++out.wrong;
  }
  out.wilson99 = wilson(out.wrong, out.total, kZ99);
  return out;
}

std::size_t szCount(const SparsePoly& p, const std::vector<BigInt>& s, std::size_t maxPoints) {
  const std::size_t n = p.vars();
  double points = std::pow(static_cast<double>(s.size()), static_cast<double>(n));
  if (points > static_cast<double>(maxPoints)) {
    throw BudgetExceeded("|S|^n = " + std::to_string(points) + " points exceed the budget");
  }
  if (s.empty()) return 0;
  std::vector<std::size_t> at(n, 0);
  std::vector<BigInt> point(n);
  std::size_t roots = 0;
  for (;;) {
    for (std::size_t k = 0; k < n; ++k) point[k] = s[at[k]];
    if (p.eval(point) == 0) ++roots;
    std::size_t k = 0;
    while (k < n && ++at[k] == s.size()) at[k++] = 0;
    if (k == n) break;
  }
  return roots;
}

namespace {

void monomialsUpTo(std::size_t vars, std::size_t maxDeg, std::vector<std::vector<std::uint32_t>>& out,
                   std::vector<std::uint32_t>& cur, std::size_t k, std::size_t left) {
  if (k == vars) {
    out.push_back(cur);
    return;
  }
  for (std::size_t e = 0; e <= left; ++e) {
    cur[k] = static_cast<std::uint32_t>(e);
    monomialsUpTo(vars, maxDeg, out, cur, k + 1, left - e);
  }
  cur[k] = 0;
}

void szCheckVars(const SzFamily& fam, std::size_t vars, SzReport& report) {
  std::vector<std::vector<std::uint32_t>> monos;
  std::vector<std::uint32_t> cur(vars, 0);
  monomialsUpTo(vars, fam.maxDegree, monos, cur, 0, fam.maxDegree);
  std::vector<long> pts;
  for (long v = fam.pointLo; v <= fam.pointHi; ++v) pts.push_back(v);
  const std::size_t sz = pts.size();
  std::size_t numPoints = 1;
  for (std::size_t k = 0; k < vars; ++k) numPoints *= sz;
  // monoVal[i][p] = value of monomial i at point p
  std::vector<std::vector<long long>> monoVal(monos.size(), std::vector<long long>(numPoints));
  std::vector<std::size_t> degree(monos.size());
  for (std::size_t i = 0; i < monos.size(); ++i) {
    degree[i] = 0;
    for (auto e : monos[i]) degree[i] += e;
    for (std::size_t p = 0; p < numPoints; ++p) {
      long long v = 1;
      std::size_t rest = p;
      for (std::size_t k = 0; k < vars; ++k) {
        const long x = pts[rest % sz];
        rest /= sz;
        for (std::uint32_t e = 0; e < monos[i][k]; ++e) v *= x;
      }
      monoVal[i][p] = v;
    }
  }
  const long span = fam.coefHi - fam.coefLo;
  std::vector<long> coef(monos.size(), fam.coefLo);
  std::vector<long long> val(numPoints, 0);
  std::vector<std::size_t> nonzeroByDeg(fam.maxDegree + 1, 0);
  for (std::size_t i = 0; i < monos.size(); ++i) {
    for (std::size_t p = 0; p < numPoints; ++p) val[p] += fam.coefLo * monoVal[i][p];
    if (fam.coefLo != 0) ++nonzeroByDeg[degree[i]];
  }
  const std::size_t boundUnit = numPoints / sz;  // |S|^(n-1)
  for (;;) {
    std::size_t d = fam.maxDegree + 1;
    while (d > 0 && nonzeroByDeg[d - 1] == 0) --d;
    if (d > 0) {
      const std::size_t deg = d - 1;
      std::size_t roots = 0;
      for (auto v : val) roots += v == 0;
      const std::size_t bound = deg * boundUnit;
      ++report.checked;
      if (roots > bound) {
        if (report.violations++ == 0) {
          report.firstViolation = std::to_string(vars) + " variables, degree " + std::to_string(deg) + ": " +
                                  std::to_string(roots) + " roots > " + std::to_string(bound);
        }
      } else if (bound > 0) {
        report.worstRatio = std::max(report.worstRatio, static_cast<double>(roots) / static_cast<double>(bound));
      }
    }
    std::size_t i = 0;
    for (; i < monos.size(); ++i) {
      const long before = coef[i];
      const long after = before < fam.coefHi ? before + 1 : fam.coefLo;
      coef[i] = after;
      for (std::size_t p = 0; p < numPoints; ++p) val[p] += (after - before) * monoVal[i][p];
      if ((before == 0) != (after == 0)) {
        if (after == 0) {
          --nonzeroByDeg[degree[i]];
        } else {
          ++nonzeroByDeg[degree[i]];
        }
      }
      if (before < fam.coefHi) break;
    }
    if (i == monos.size() || span == 0) break;
  }
}

}  // namespace

SzReport szCheck(const SzFamily& family) {
  if (family.coefLo > family.coefHi || family.pointLo > family.pointHi) {
    throw ValidationError("empty coefficient or point range");
  }
  SzReport report;
  for (std::size_t vars = 1; vars <= family.maxVars; ++vars) szCheckVars(family, vars, report);
  return report;
}

std::uint64_t primeCount(std::uint64_t n) {
  if (n > (std::uint64_t{1} << 32)) throw BudgetExceeded("sieve limit " + std::to_string(n) + " exceeds 2^32");
  if (n < 2) return 0;
  std::vector<bool> composite(n + 1, false);
  std::uint64_t count = 0;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    ++count;
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return count;
}

std::vector<PrimeDensityRow> primeDensityCheck(std::size_t mLo, std::size_t mHi) {
  if (mLo < 1 || mHi > 16) throw BudgetExceeded("m must lie in 1..16");
  std::vector<PrimeDensityRow> rows;
  for (std::size_t m = mLo; m <= mHi; ++m) {
    PrimeDensityRow r;
    r.m = m;
    r.limit = std::uint64_t{1} << (2 * m);
    r.primes = primeCount(r.limit);
    r.pass = r.primes * 8 * m >= r.limit;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace flipbench::pzt
