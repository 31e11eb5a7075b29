#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "flipbench/bitstring.hpp"

namespace flipbench {

/// Random-access source of oracle bits, addressed by string coordinates.
class OracleAccess {
 public:
  virtual ~OracleAccess() = default;
  virtual bool query(const BitString& coordinate) = 0;
};

/// Linear source of random bits addressed by position.
class StreamAccess {
 public:
  virtual ~StreamAccess() = default;
  virtual bool at(std::size_t index) = 0;
};

std::uint64_t splitmix64(std::uint64_t x);
/// Platform-independent hash of a bit string, used to key oracle fillers.
std::uint64_t stableHash(const BitString& s);

/// A total oracle: explicit assignments first, then a seeded filler.
/// Every coordinate answers the same bit on every query.
class Oracle final : public OracleAccess {
 public:
  explicit Oracle(std::uint64_t seed = 0) : seed_(seed) {}

  void assign(const BitString& coordinate, bool bit) { bits_[coordinate] = bit; }
  bool query(const BitString& coordinate) override;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::unordered_map<BitString, bool> bits_;
};

/// An infinite stream: a fixed prefix followed by seeded filler bits.
class Stream final : public StreamAccess {
 public:
  explicit Stream(std::uint64_t seed = 0) : seed_(seed) {}
  Stream(const BitString& prefix, std::uint64_t seed);

  bool at(std::size_t index) override;

 private:
  std::uint64_t seed_;
  std::vector<std::int8_t> bits_;  // -1 = not drawn yet
};

/// Thrown by decision-replay sources when a run needs a bit that has not
/// been decided yet. Deliberately not a flipbench::Error.
struct NeedFreshBit {};

/// Oracle that answers fresh coordinates from a decision list, in order of
/// first query, and repeats earlier answers for coordinates already seen.
class DecisionOracle final : public OracleAccess {
 public:
  explicit DecisionOracle(const std::vector<bool>& decisions) : decisions_(decisions) {}
  bool query(const BitString& coordinate) override;
  std::size_t used() const { return seen_.size(); }

 private:
  const std::vector<bool>& decisions_;
  std::unordered_map<BitString, bool> seen_;
};

/// Stream whose position i answers decision i.
class DecisionStream final : public StreamAccess {
 public:
  explicit DecisionStream(const std::vector<bool>& decisions) : decisions_(decisions) {}
  bool at(std::size_t index) override;
  std::size_t used() const { return used_; }

 private:
  const std::vector<bool>& decisions_;
  std::size_t used_ = 0;
};

/// Splits a base seed into per-trial seeds.
std::uint64_t trialSeed(std::uint64_t seed, std::uint64_t trial);

}  // namespace flipbench
