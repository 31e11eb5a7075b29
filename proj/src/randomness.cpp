#include "flipbench/randomness.hpp"

namespace flipbench {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stableHash(const BitString& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : s.bits()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h ^ s.size());
}

std::uint64_t trialSeed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(splitmix64(seed) ^ (trial * 0xd1b54a32d192ed03ULL));
}

bool Oracle::query(const BitString& coordinate) {
  auto [it, inserted] = bits_.try_emplace(coordinate, false);
  if (inserted) it->second = (splitmix64(seed_ ^ stableHash(coordinate)) & 1U) != 0;
  return it->second;
}

Stream::Stream(const BitString& prefix, std::uint64_t seed) : seed_(seed) {
  bits_.reserve(prefix.size());
  for (std::size_t i = 0; i < prefix.size(); ++i) bits_.push_back(prefix[i] ? 1 : 0);
}

bool Stream::at(std::size_t index) {
  if (index >= bits_.size()) bits_.resize(index + 1, -1);
  if (bits_[index] < 0) {
    bits_[index] = static_cast<std::int8_t>(splitmix64(seed_ * 0x2545f4914f6cdd1dULL + index) & 1U);
  }
  return bits_[index] == 1;
}

bool DecisionOracle::query(const BitString& coordinate) {
  if (auto it = seen_.find(coordinate); it != seen_.end()) return it->second;
  const std::size_t next = seen_.size();
  if (next >= decisions_.size()) throw NeedFreshBit{};
  seen_.emplace(coordinate, decisions_[next]);
  return decisions_[next];
}

bool DecisionStream::at(std::size_t index) {
  if (index >= decisions_.size()) throw NeedFreshBit{};
  if (index + 1 > used_) used_ = index + 1;
  return decisions_[index];
}

}  // namespace flipbench
