#include "flipbench/distribution.hpp"

#include <algorithm>
#include <sstream>

#include "flipbench/errors.hpp"
#include "flipbench/randomness.hpp"

namespace flipbench {

Distribution::Distribution(Masses masses) : masses_(std::move(masses)) {
  DyadicRational total;
  for (const auto& [v, m] : masses_) {
    if (m.isZero()) throw ValidationError("distribution point " + v.str() + " has zero mass");
    total += m;
  }
  if (total != DyadicRational::one()) throw ValidationError("distribution masses sum to " + total.str());
}

Distribution Distribution::dirac(const BitString& v) { return Distribution({{v, DyadicRational::one()}}); }

Distribution Distribution::uniform(std::size_t len) {
  Masses m;
  for (auto& s : stringsOfLength(len)) m.emplace(std::move(s), DyadicRational::pow2(static_cast<std::uint32_t>(len)));
  return Distribution(std::move(m));
}

DyadicRational Distribution::mass(const BitString& v) const {
  auto it = masses_.find(v);
  return it == masses_.end() ? DyadicRational{} : it->second;
}

std::string Distribution::serialize() const {
  std::string out;
  for (const auto& [v, m] : masses_) out += v.str() + " " + m.serialize() + "\n";
  return out;
}

std::string Distribution::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, m] : masses_) {
    if (!first) out += ", ";
    first = false;
    out += v.str() + ":" + m.str();
  }
  return out + "}";
}

Distribution Distribution::parse(const std::string& text) {
  Masses m;
  std::istringstream in(text);
  std::string value, mass;
  while (in >> value >> mass) m[BitString::parse(value)] += DyadicRational::parse(mass);
  return Distribution(std::move(m));
}

Distribution monadicCompose(const Kernel& g, const Distribution& f) {
  Distribution::Masses out;
  for (const auto& [rho, p] : f.masses()) {
    const Distribution next = g(rho);
    for (const auto& [tau, q] : next.masses()) out[tau] += q * p;
  }
  return Distribution(std::move(out));
}

DyadicRational totalVariation(const Distribution& a, const Distribution& b) {
  DyadicRational sum;
  for (const auto& [v, m] : a.masses()) sum += absDiff(m, b.mass(v));
  for (const auto& [v, m] : b.masses()) {
    if (!a.masses().contains(v)) sum += m;
  }
  return sum.half();
}

Distribution ExactOutcome::distribution() const {
  if (!complete()) {
    const std::string msg = errors.empty() ? "incomplete enumeration" : errors.front();
    if (budgetExceeded) throw BudgetExceeded(msg);
    if (fuelExhausted) throw FuelExhausted(msg);
    throw Error(msg);
  }
  return Distribution(outputs);
}

ExactOutcome enumeratePaths(const std::function<BitString(const std::vector<bool>&)>& run,
                            std::size_t maxBits) {
  ExactOutcome out;
  std::vector<std::vector<bool>> pending{{}};
  auto recordError = [&out](const std::string& msg, const DyadicRational& mass) {
    out.errorMass += mass;
    if (out.errors.size() < 8 && std::find(out.errors.begin(), out.errors.end(), msg) == out.errors.end()) {
      out.errors.push_back(msg);
    }
  };
  while (!pending.empty()) {
    std::vector<bool> decisions = std::move(pending.back());
    pending.pop_back();
    const auto mass = DyadicRational::pow2(static_cast<std::uint32_t>(decisions.size()));
    try {
      BitString result = run(decisions);
      out.outputs[result] += mass;
      ++out.leaves;
      out.maxDepth = std::max(out.maxDepth, decisions.size());
    } catch (const NeedFreshBit&) {
      if (decisions.size() >= maxBits) {
        out.budgetExceeded = true;
        recordError("random-bit budget of " + std::to_string(maxBits) + " exceeded", mass);
        continue;
      }
      decisions.push_back(true);
      pending.push_back(decisions);
      decisions.back() = false;
      pending.push_back(std::move(decisions));
    } catch (const Error& e) {
      ++out.leaves;
      if (dynamic_cast<const FuelExhausted*>(&e)) out.fuelExhausted = true;
      if (dynamic_cast<const BudgetExceeded*>(&e)) out.budgetExceeded = true;
      recordError(e.what(), mass);
    }
  }
  return out;
}

}  // namespace flipbench
