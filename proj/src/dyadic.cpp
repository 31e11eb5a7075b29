#include "flipbench/dyadic.hpp"

#include <ostream>

#include "flipbench/errors.hpp"

namespace flipbench {

DyadicRational::DyadicRational(BigInt numerator, std::uint32_t exponent)
    : numerator_(std::move(numerator)), exponent_(exponent) {
  if (numerator_ < 0) throw Error("negative dyadic rational");
  normalize();
}

void DyadicRational::normalize() {
  if (numerator_ == 0) {
    exponent_ = 0;
    return;
  }
  while (exponent_ > 0 && (numerator_ & 1) == 0) {
    numerator_ >>= 1;
    --exponent_;
  }
}

namespace {

// Both numerators brought to the common exponent max(ea, eb).
std::pair<BigInt, BigInt> aligned(const DyadicRational& a, const DyadicRational& b) {
  const auto e = std::max(a.exponent(), b.exponent());
  return {a.numerator() << (e - a.exponent()), b.numerator() << (e - b.exponent())};
}

}  // namespace

DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
  auto [x, y] = aligned(a, b);
  return {x + y, std::max(a.exponent_, b.exponent_)};
}

DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) {
  auto [x, y] = aligned(a, b);
  if (x < y) throw Error("dyadic subtraction below zero");
  return {x - y, std::max(a.exponent_, b.exponent_)};
}

DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
  return {a.numerator_ * b.numerator_, a.exponent_ + b.exponent_};
}

std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
  auto [x, y] = aligned(a, b);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool DyadicRational::atLeast(const BigInt& p, const BigInt& q) const {
  return numerator_ * q >= p * (BigInt(1) << exponent_);
}

bool DyadicRational::greaterThan(const BigInt& p, const BigInt& q) const {
  return numerator_ * q > p * (BigInt(1) << exponent_);
}

std::string DyadicRational::str() const {
  if (exponent_ == 0) return numerator_.str();
  return numerator_.str() + "/" + (BigInt(1) << exponent_).str();
}

std::string DyadicRational::serialize() const {
  return numerator_.str() + "/2^" + std::to_string(exponent_);
}

double DyadicRational::toDouble() const {
  return static_cast<double>(numerator_) / static_cast<double>(BigInt(1) << exponent_);
}

DyadicRational DyadicRational::parse(std::string_view text) {
  const auto slash = text.find('/');
  try {
    BigInt num(std::string(text.substr(0, slash)));
    if (slash == std::string_view::npos) return {num, 0};
    auto rest = text.substr(slash + 1);
    if (rest.starts_with("2^")) {
      return {num, static_cast<std::uint32_t>(std::stoul(std::string(rest.substr(2))))};
    }
    BigInt den(std::string{rest});
    std::uint32_t e = 0;
    while (den > 1 && (den & 1) == 0) {
      den >>= 1;
      ++e;
    }
    if (den != 1) throw Error("denominator is not a power of two");
    return {num, e};
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error("malformed dyadic rational '" + std::string(text) + "'");
  }
}

DyadicRational absDiff(const DyadicRational& a, const DyadicRational& b) {
  return a >= b ? a - b : b - a;
}

std::ostream& operator<<(std::ostream& os, const DyadicRational& d) { return os << d.str(); }

}  // namespace flipbench
