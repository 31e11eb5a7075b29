#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "flipbench/bitstring.hpp"

namespace flipbench {

/// Exact non-negative rational numerator / 2^exponent.
///
/// Always kept canonical: the numerator is odd, or the exponent is zero.
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(BigInt numerator, std::uint32_t exponent);
  static DyadicRational integer(std::uint64_t v) { return {BigInt(v), 0}; }
  static DyadicRational zero() { return {}; }
  static DyadicRational one() { return integer(1); }
  /// 2^-k.
  static DyadicRational pow2(std::uint32_t k) { return {BigInt(1), k}; }

  /// Accepts "n", "n/2^e" or "n/d" with d a power of two.
  static DyadicRational parse(std::string_view text);

  const BigInt& numerator() const { return numerator_; }
  std::uint32_t exponent() const { return exponent_; }
  bool isZero() const { return numerator_ == 0; }

  DyadicRational half() const { return {numerator_, exponent_ + 1}; }

  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b);
  /// Throws when the result would be negative.
  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b);
  DyadicRational& operator+=(const DyadicRational& o) { return *this = *this + o; }

  friend bool operator==(const DyadicRational&, const DyadicRational&) = default;
  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b);

  /// Exact test of value >= p/q (q > 0).
  bool atLeast(const BigInt& p, const BigInt& q) const;
  /// Exact test of value > p/q (q > 0).
  bool greaterThan(const BigInt& p, const BigInt& q) const;

  /// Reduced fraction, e.g. "3/4", "0", "1".
  std::string str() const;
  /// "numerator/2^exponent".
  std::string serialize() const;
  double toDouble() const;

 private:
  void normalize();
  BigInt numerator_ = 0;
  std::uint32_t exponent_ = 0;
};

DyadicRational absDiff(const DyadicRational& a, const DyadicRational& b);

std::ostream& operator<<(std::ostream& os, const DyadicRational& d);

}  // namespace flipbench
