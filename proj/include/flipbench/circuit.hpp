#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "flipbench/bitstring.hpp"

namespace flipbench::pzt {

struct Node {
  enum class Op { Input, Const, Add, Mul, Sub };
  Op op;
  std::size_t value = 0;  // Input: variable index j; Const: 0 or 1
  std::size_t a = 0, b = 0;
};

/// Arithmetic circuit over Z as a topologically ordered node list.
class Circuit {
 public:
  std::size_t input(std::size_t j);
  std::size_t constant(bool one);
  std::size_t add(std::size_t a, std::size_t b);
  std::size_t mul(std::size_t a, std::size_t b);
  std::size_t sub(std::size_t a, std::size_t b);
  void setOutput(std::size_t node) { output_ = node; }

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t output() const { return output_; }

  /// `n<i> = input <j>` | `n<i> = const 0|1` | `n<i> = add|mul|sub n<a> n<b>`, then `output n<i>`.
  static Circuit parse(std::string_view text);
  std::string str() const;

 private:
  std::size_t push(Node n);
  std::vector<Node> nodes_;
  std::size_t output_ = 0;
};

/// Throws ValidationError unless operands precede their node and the output exists.
void validate(const Circuit& c);

/// Distinct input indices, ascending. Variable number k of the circuit is
/// the k-th of these.
std::vector<std::size_t> inputIndices(const Circuit& c);

struct CircuitStats {
  std::size_t n = 0;  // arity
  std::size_t m = 0;  // node count
  std::size_t d = 0;  // syntactic degree of the output
};
CircuitStats circuitStats(const Circuit& c);

/// Exact value over Z at a point given per variable (see inputIndices).
BigInt evalExact(const Circuit& c, const std::vector<BigInt>& point);

/// Canonical residue in [0, k).
BigInt modCanonical(const BigInt& v, const BigInt& k);
BigInt addMod(const BigInt& a, const BigInt& b, const BigInt& k);
BigInt subMod(const BigInt& a, const BigInt& b, const BigInt& k);
BigInt mulMod(const BigInt& a, const BigInt& b, const BigInt& k);

/// Node-wise evaluation reducing mod k after every gate; k >= 1.
BigInt evalMod(const Circuit& c, const std::vector<BigInt>& r, const BigInt& k);

/// Sparse polynomial over Z: exponent vector -> non-zero coefficient.
class SparsePoly {
 public:
  using Monomial = std::vector<std::uint32_t>;

  SparsePoly() = default;
  explicit SparsePoly(std::size_t vars) : vars_(vars) {}
  static SparsePoly constant(std::size_t vars, const BigInt& c);
  static SparsePoly variable(std::size_t vars, std::size_t k);

  std::size_t vars() const { return vars_; }
  const std::map<Monomial, BigInt>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  std::size_t totalDegree() const;

  void addTerm(const Monomial& mono, const BigInt& coef);
  SparsePoly operator+(const SparsePoly& o) const;
  SparsePoly operator-(const SparsePoly& o) const;
  /// Throws BudgetExceeded when the product would hold more than maxTerms monomials.
  SparsePoly times(const SparsePoly& o, std::size_t maxTerms) const;
  BigInt eval(const std::vector<BigInt>& point) const;
  std::string str() const;

  friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

 private:
  std::size_t vars_ = 0;
  std::map<Monomial, BigInt> terms_;
};

constexpr std::size_t kDefaultMonomialBudget = 200'000;

/// Full expansion of the output node over Z.
SparsePoly normalForm(const Circuit& c, std::size_t maxTerms = kDefaultMonomialBudget);
/// Deterministic zero test: true (accept) iff the normal form is empty.
bool hOracle(const Circuit& c, std::size_t maxTerms = kDefaultMonomialBudget);

/// p - q as one circuit; inputs with the same index are shared.
Circuit pitToPzt(const Circuit& p, const Circuit& q);

}  // namespace flipbench::pzt
