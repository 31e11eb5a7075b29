#include "flipbench/bitstring.hpp"

#include <ostream>

#include "flipbench/errors.hpp"

namespace flipbench {

BitString BitString::parse(std::string_view text) {
  if (text.empty() || text == "eps" || text == "ε") return {};
  for (char c : text) {
    if (c != '0' && c != '1') throw Error("not a bit string: '" + std::string(text) + "'");
  }
  return BitString(std::string(text));
}

BitString BitString::fromBits(std::string bits) { return parse(bits); }

BitString BitString::repeat(bool bit, std::size_t count) {
  return BitString(std::string(count, bit ? '1' : '0'));
}

BitString BitString::appended(bool bit) const {
  BitString r = *this;
  r.push_back(bit);
  return r;
}

BitString BitString::prefix(std::size_t n) const {
  if (n >= bits_.size()) return *this;
  return BitString(bits_.substr(0, n));
}

BitString BitString::dropLast() const { return prefix(bits_.empty() ? 0 : bits_.size() - 1); }

std::string BitString::str() const { return bits_.empty() ? "eps" : bits_; }

std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  return a.bits_.compare(b.bits_) <=> 0;
}

BitString concat(const BitString& x, const BitString& y) {
  return BitString::fromBits(x.bits() + y.bits());
}

BitString times(const BitString& x, const BitString& y) {
  std::string out;
  out.reserve(x.size() * y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out += x.bits();
  return BitString::fromBits(std::move(out));
}

BitString truncate(const BitString& t, const BitString& r) { return t.prefix(r.size()); }

bool isPrefix(const BitString& x, const BitString& y) {
  return x.size() <= y.size() && y.bits().compare(0, x.size(), x.bits()) == 0;
}

bool lenLeq(const BitString& x, const BitString& y) { return x.size() <= y.size(); }

bool isSubword(const BitString& x, const BitString& y) {
  return y.bits().find(x.bits()) != std::string::npos;
}

BitString dyad(const BigInt& n) {
  BigInt m = n + 1;
  std::string bin;
  while (m > 0) {
    bin.push_back(static_cast<int>(m & 1) ? '1' : '0');
    m >>= 1;
  }
  bin.pop_back();  // leading 1
  return BitString::fromBits(std::string(bin.rbegin(), bin.rend()));
}

BitString dyad(std::size_t n) { return dyad(BigInt(n)); }

BigInt dyadIndex(const BitString& s) {
  BigInt v = 1;
  for (std::size_t i = 0; i < s.size(); ++i) v = (v << 1) | (s[i] ? 1 : 0);
  return v - 1;
}

std::vector<BitString> stringsOfLength(std::size_t len) {
  std::vector<BitString> out;
  const std::size_t count = std::size_t{1} << len;
  out.reserve(count);
  for (std::size_t v = 0; v < count; ++v) {
    std::string bits(len, '0');
    for (std::size_t i = 0; i < len; ++i) {
      if ((v >> (len - 1 - i)) & 1U) bits[i] = '1';
    }
    out.push_back(BitString::fromBits(std::move(bits)));
  }
  return out;
}

std::vector<BitString> stringsUpTo(std::size_t maxLen) {
  std::vector<BitString> out;
  for (std::size_t len = 0; len <= maxLen; ++len) {
    auto level = stringsOfLength(len);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const BitString& s) { return os << s.str(); }

}  // namespace flipbench
