#include "flipbench/circuit.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "flipbench/errors.hpp"

namespace flipbench::pzt {

std::size_t Circuit::push(Node n) {
  nodes_.push_back(n);
  output_ = nodes_.size() - 1;
  return output_;
}

std::size_t Circuit::input(std::size_t j) { return push({Node::Op::Input, j}); }
std::size_t Circuit::constant(bool one) { return push({Node::Op::Const, one ? 1U : 0U}); }
std::size_t Circuit::add(std::size_t a, std::size_t b) { return push({Node::Op::Add, 0, a, b}); }
std::size_t Circuit::mul(std::size_t a, std::size_t b) { return push({Node::Op::Mul, 0, a, b}); }
std::size_t Circuit::sub(std::size_t a, std::size_t b) { return push({Node::Op::Sub, 0, a, b}); }

Circuit Circuit::parse(std::string_view text) {
  static const std::regex kNode(R"(n(\d+)\s*=\s*(?:input\s+(\d+)|const\s+([01])|(add|mul|sub)\s+n(\d+)\s+n(\d+)))");
  static const std::regex kOutput(R"(output\s+n(\d+))");
  Circuit c;
  std::map<std::string, std::size_t> ids;
  bool sawOutput = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    auto fail = [&](const std::string& what) { throw ParseError(what, lineNo, first + 1); };
    auto ref = [&](const std::string& name) {
      auto it = ids.find(name);
      if (it == ids.end()) fail("node n" + name + " used before its definition");
      return it->second;
    };
    std::smatch mt;
    if (sawOutput) fail("nothing may follow the output line");
    if (std::regex_match(line, mt, kOutput)) {
      c.output_ = ref(mt[1]);
      sawOutput = true;
      continue;
    }
    if (!std::regex_match(line, mt, kNode)) fail("malformed node line");
    if (ids.count(mt[1])) fail("node n" + mt[1].str() + " defined twice");
    std::size_t id;
    if (mt[2].matched) {
      id = c.input(std::stoul(mt[2]));
    } else if (mt[3].matched) {
      id = c.constant(mt[3] == "1");
    } else {
      const std::size_t a = ref(mt[5]), b = ref(mt[6]);
      id = mt[4] == "add" ? c.add(a, b) : mt[4] == "mul" ? c.mul(a, b) : c.sub(a, b);
    }
    ids[mt[1]] = id;
  }
  if (!sawOutput) throw ParseError("missing output line", lineNo + 1, 1);
  return c;
}

std::string Circuit::str() const {
  std::string out;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Node& n = nodes_[k];
    out += "n" + std::to_string(k) + " = ";
    switch (n.op) {
      case Node::Op::Input: out += "input " + std::to_string(n.value); break;
      case Node::Op::Const: out += "const " + std::to_string(n.value); break;
      case Node::Op::Add: out += "add"; break;
      case Node::Op::Mul: out += "mul"; break;
      case Node::Op::Sub: out += "sub"; break;
    }
    if (n.op != Node::Op::Input && n.op != Node::Op::Const) {
      out += " n" + std::to_string(n.a) + " n" + std::to_string(n.b);
    }
    out += "\n";
  }
  return out + "output n" + std::to_string(output_) + "\n";
}

void validate(const Circuit& c) {
  if (c.nodes().empty()) throw ValidationError("empty circuit");
  if (c.output() >= c.nodes().size()) throw ValidationError("output node out of range");
  for (std::size_t k = 0; k < c.nodes().size(); ++k) {
    const Node& n = c.nodes()[k];
    if (n.op == Node::Op::Const && n.value > 1) throw ValidationError("constants are 0 or 1");
    if (n.op != Node::Op::Input && n.op != Node::Op::Const && (n.a >= k || n.b >= k)) {
      throw ValidationError("node n" + std::to_string(k) + " uses an operand that does not precede it");
    }
  }
}

std::vector<std::size_t> inputIndices(const Circuit& c) {
  std::vector<std::size_t> out;
  for (const auto& n : c.nodes()) {
    if (n.op == Node::Op::Input) out.push_back(n.value);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::vector<std::size_t> variableOf(const Circuit& c) {
  const auto idx = inputIndices(c);
  std::vector<std::size_t> var(c.nodes().size(), 0);
  for (std::size_t k = 0; k < c.nodes().size(); ++k) {
    const Node& n = c.nodes()[k];
    if (n.op == Node::Op::Input) {
      var[k] = static_cast<std::size_t>(std::lower_bound(idx.begin(), idx.end(), n.value) - idx.begin());
    }
  }
  return var;
}

std::vector<bool> reachable(const Circuit& c) {
  std::vector<bool> live(c.nodes().size(), false);
  live[c.output()] = true;
  for (std::size_t k = c.nodes().size(); k-- > 0;) {
    if (!live[k]) continue;
    const Node& n = c.nodes()[k];
    if (n.op != Node::Op::Input && n.op != Node::Op::Const) live[n.a] = live[n.b] = true;
  }
  return live;
}

void requirePoint(const Circuit& c, std::size_t given) {
  const std::size_t n = inputIndices(c).size();
  if (given < n) {
    throw ValidationError("circuit has " + std::to_string(n) + " variables, " + std::to_string(given) + " values given");
  }
}

}  // namespace

CircuitStats circuitStats(const Circuit& c) {
  validate(c);
  std::vector<std::size_t> deg(c.nodes().size(), 0);
  for (std::size_t k = 0; k < c.nodes().size(); ++k) {
    const Node& n = c.nodes()[k];
    switch (n.op) {
      case Node::Op::Input: deg[k] = 1; break;
      case Node::Op::Const: deg[k] = 0; break;
      case Node::Op::Add:
      case Node::Op::Sub: deg[k] = std::max(deg[n.a], deg[n.b]); break;
      case Node::Op::Mul: deg[k] = deg[n.a] + deg[n.b]; break;
    }
  }
  return {inputIndices(c).size(), c.nodes().size(), deg[c.output()]};
}

BigInt evalExact(const Circuit& c, const std::vector<BigInt>& point) {
  validate(c);
  requirePoint(c, point.size());
  const auto var = variableOf(c);
  std::vector<BigInt> v(c.nodes().size());
  for (std::size_t k = 0; k <= c.output(); ++k) {
    const Node& n = c.nodes()[k];
    switch (n.op) {
      case Node::Op::Input: v[k] = point[var[k]]; break;
      case Node::Op::Const: v[k] = n.value; break;
      case Node::Op::Add: v[k] = v[n.a] + v[n.b]; break;
      case Node::Op::Sub: v[k] = v[n.a] - v[n.b]; break;
      case Node::Op::Mul: v[k] = v[n.a] * v[n.b]; break;
    }
  }
  return v[c.output()];
}

BigInt modCanonical(const BigInt& v, const BigInt& k) {
  if (k < 1) throw ValidationError("modulus must be at least 1");
  BigInt r = v % k;
  if (r < 0) r += k;
  return r;
}

BigInt addMod(const BigInt& a, const BigInt& b, const BigInt& k) { return modCanonical(a + b, k); }
BigInt subMod(const BigInt& a, const BigInt& b, const BigInt& k) { return modCanonical(a - b, k); }
BigInt mulMod(const BigInt& a, const BigInt& b, const BigInt& k) { return modCanonical(a * b, k); }

namespace {

__extension__ typedef unsigned __int128 u128;

std::uint64_t evalModSmall(const Circuit& c, const std::vector<std::size_t>& var, const std::vector<BigInt>& r,
                           std::uint64_t k) {
  std::vector<std::uint64_t> res(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) res[i] = modCanonical(r[i], k).convert_to<std::uint64_t>();
  std::vector<std::uint64_t> v(c.nodes().size(), 0);
  for (std::size_t j = 0; j <= c.output(); ++j) {
    const Node& n = c.nodes()[j];
    switch (n.op) {
      case Node::Op::Input: v[j] = res[var[j]]; break;
      case Node::Op::Const: v[j] = n.value % k; break;
      case Node::Op::Add: v[j] = static_cast<std::uint64_t>((u128(v[n.a]) + v[n.b]) % k); break;
      case Node::Op::Sub: v[j] = static_cast<std::uint64_t>((u128(v[n.a]) + k - v[n.b]) % k); break;
      case Node::Op::Mul: v[j] = static_cast<std::uint64_t>((u128(v[n.a]) * v[n.b]) % k); break;
    }
  }
  return v[c.output()];
}

}  // namespace

BigInt evalMod(const Circuit& c, const std::vector<BigInt>& r, const BigInt& k) {
  validate(c);
  requirePoint(c, r.size());
  if (k < 1) throw ValidationError("modulus must be at least 1");
  const auto var = variableOf(c);
  if (k <= (BigInt(1) << 63)) return evalModSmall(c, var, r, k.convert_to<std::uint64_t>());
  std::vector<BigInt> v(c.nodes().size());
  for (std::size_t j = 0; j <= c.output(); ++j) {
    const Node& n = c.nodes()[j];
    switch (n.op) {
      case Node::Op::Input: v[j] = modCanonical(r[var[j]], k); break;
      case Node::Op::Const: v[j] = modCanonical(n.value, k); break;
      case Node::Op::Add: v[j] = addMod(v[n.a], v[n.b], k); break;
      case Node::Op::Sub: v[j] = subMod(v[n.a], v[n.b], k); break;
      case Node::Op::Mul: v[j] = mulMod(v[n.a], v[n.b], k); break;
    }
  }
  return v[c.output()];
}

SparsePoly SparsePoly::constant(std::size_t vars, const BigInt& c) {
  SparsePoly p(vars);
  p.addTerm(Monomial(vars, 0), c);
  return p;
}

SparsePoly SparsePoly::variable(std::size_t vars, std::size_t k) {
  SparsePoly p(vars);
  Monomial m(vars, 0);
  m.at(k) = 1;
  p.addTerm(m, 1);
  return p;
}

std::size_t SparsePoly::totalDegree() const {
  std::size_t d = 0;
  for (const auto& [mono, coef] : terms_) {
    std::size_t s = 0;
    for (auto e : mono) s += e;
    d = std::max(d, s);
  }
  return d;
}

void SparsePoly::addTerm(const Monomial& mono, const BigInt& coef) {
  if (mono.size() != vars_) throw std::invalid_argument("monomial width mismatch");
  if (coef == 0) return;
  auto [it, fresh] = terms_.emplace(mono, coef);
  if (fresh) return;
  it->second += coef;
  if (it->second == 0) terms_.erase(it);
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
  SparsePoly out = *this;
  for (const auto& [m, c] : o.terms_) out.addTerm(m, c);
  return out;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const {
  SparsePoly out = *this;
  for (const auto& [m, c] : o.terms_) out.addTerm(m, -c);
  return out;
}

SparsePoly SparsePoly::times(const SparsePoly& o, std::size_t maxTerms) const {
  SparsePoly out(vars_);
  Monomial mono(vars_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      for (std::size_t k = 0; k < vars_; ++k) mono[k] = ma[k] + mb[k];
      out.addTerm(mono, ca * cb);
      if (out.terms_.size() > maxTerms) {
        throw BudgetExceeded("normal form exceeds the budget of " + std::to_string(maxTerms) + " monomials");
      }
    }
  }
  return out;
}

BigInt SparsePoly::eval(const std::vector<BigInt>& point) const {
  if (point.size() < vars_) throw ValidationError("point has too few coordinates");
  BigInt sum = 0;
  for (const auto& [mono, coef] : terms_) {
    BigInt term = coef;
    for (std::size_t k = 0; k < vars_; ++k) term *= boost::multiprecision::pow(point[k], mono[k]);
    sum += term;
  }
  return sum;
}

std::string SparsePoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [mono, coef] = *it;
    std::string factors;
    for (std::size_t k = 0; k < vars_; ++k) {
      if (mono[k] == 0) continue;
      factors += (factors.empty() ? "" : "*") + ("x" + std::to_string(k + 1));
      if (mono[k] > 1) factors += "^" + std::to_string(mono[k]);
    }
    const BigInt mag = coef < 0 ? BigInt(-coef) : coef;
    std::string term = factors.empty() ? mag.str() : (mag == 1 ? factors : mag.str() + "*" + factors);
    if (out.empty()) {
      out = (coef < 0 ? "-" : "") + term;
    } else {
      out += (coef < 0 ? " - " : " + ") + term;
    }
  }
  return out;
}

SparsePoly normalForm(const Circuit& c, std::size_t maxTerms) {
  validate(c);
  const std::size_t vars = inputIndices(c).size();
  const auto var = variableOf(c);
  const auto live = reachable(c);
  std::vector<SparsePoly> p(c.nodes().size(), SparsePoly(vars));
  for (std::size_t k = 0; k <= c.output(); ++k) {
    if (!live[k]) continue;
    const Node& n = c.nodes()[k];
    switch (n.op) {
      case Node::Op::Input: p[k] = SparsePoly::variable(vars, var[k]); break;
      case Node::Op::Const: p[k] = SparsePoly::constant(vars, n.value); break;
      case Node::Op::Add: p[k] = p[n.a] + p[n.b]; break;
      case Node::Op::Sub: p[k] = p[n.a] - p[n.b]; break;
      case Node::Op::Mul: p[k] = p[n.a].times(p[n.b], maxTerms); break;
    }
    if (p[k].terms().size() > maxTerms) {
      throw BudgetExceeded("normal form exceeds the budget of " + std::to_string(maxTerms) + " monomials");
    }
  }
  return p[c.output()];
}

bool hOracle(const Circuit& c, std::size_t maxTerms) { return normalForm(c, maxTerms).isZero(); }

Circuit pitToPzt(const Circuit& p, const Circuit& q) {
  validate(p);
  validate(q);
  Circuit out;
  auto copy = [&out](const Circuit& c) {
    const std::size_t base = out.nodes().size();
    for (const auto& n : c.nodes()) {
      switch (n.op) {
        case Node::Op::Input: out.input(n.value); break;
        case Node::Op::Const: out.constant(n.value == 1); break;
        case Node::Op::Add: out.add(base + n.a, base + n.b); break;
        case Node::Op::Mul: out.mul(base + n.a, base + n.b); break;
        case Node::Op::Sub: out.sub(base + n.a, base + n.b); break;
      }
    }
    return base + c.output();
  };
  const std::size_t a = copy(p);
  const std::size_t b = copy(q);
  out.setOutput(out.sub(a, b));
  return out;
}

}  // namespace flipbench::pzt
