#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>
#include <iosfwd>

#include <boost/multiprecision/cpp_int.hpp>

namespace flipbench {

using BigInt = boost::multiprecision::cpp_int;

/// A finite binary string, the value type shared by every model.
///
/// Bits are kept in source order: the last character of `xb` is `b`, which is
/// the end recursion on notation peels off.
class BitString {
 public:
  BitString() = default;

  /// Parses a run of '0'/'1' characters; "eps" (or an empty view) is the empty string.
  static BitString parse(std::string_view text);
  static BitString fromBits(std::string bits);
  static BitString repeat(bool bit, std::size_t count);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] == '1'; }
  bool back() const { return bits_.back() == '1'; }

  void push_back(bool bit) { bits_.push_back(bit ? '1' : '0'); }
  BitString appended(bool bit) const;
  /// The prefix of length `n` (or the whole string when it is shorter).
  BitString prefix(std::size_t n) const;
  BitString dropLast() const;

  /// The raw '0'/'1' characters; empty for ε.
  const std::string& bits() const { return bits_; }
  /// Serialized form: the bits, or "eps" for the empty string.
  std::string str() const;

  friend bool operator==(const BitString&, const BitString&) = default;
  /// Length-lexicographic order (ε, 0, 1, 00, ...), the dyadic enumeration order.
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b);

 private:
  explicit BitString(std::string bits) : bits_(std::move(bits)) {}
  std::string bits_;
};

BitString concat(const BitString& x, const BitString& y);
/// `x` concatenated with itself |y| times.
BitString times(const BitString& x, const BitString& y);
/// Prefix of `t` of length |r|, or `t` itself when |t| <= |r|.
BitString truncate(const BitString& t, const BitString& r);
bool isPrefix(const BitString& x, const BitString& y);
bool lenLeq(const BitString& x, const BitString& y);
/// True when `x` occurs contiguously inside `y`.
bool isSubword(const BitString& x, const BitString& y);

/// Binary expansion of n+1 with its leading bit removed; a bijection N -> S.
BitString dyad(const BigInt& n);
BitString dyad(std::size_t n);
/// Inverse of dyad.
BigInt dyadIndex(const BitString& s);

/// All strings of length at most `maxLen`, in dyadic order.
std::vector<BitString> stringsUpTo(std::size_t maxLen);
/// All strings of length exactly `len`, lexicographically.
std::vector<BitString> stringsOfLength(std::size_t len);

std::ostream& operator<<(std::ostream& os, const BitString& s);

}  // namespace flipbench

template <>
struct std::hash<flipbench::BitString> {
  std::size_t operator()(const flipbench::BitString& s) const noexcept {
    return std::hash<std::string>{}(s.bits()) ^ (s.size() * 0x9e3779b97f4a7c15ULL);
  }
};
