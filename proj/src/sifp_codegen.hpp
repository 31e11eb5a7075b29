#pragma once

// Building blocks for generated SIFP code. Every helper initialises the
// temporaries it uses, so fragments may be re-entered inside loops.

#include <functional>
#include <string>

#include "flipbench/sifp.hpp"

namespace flipbench::detail {

class RegAlloc {
 public:
  RegAlloc(char cls, std::size_t next) : cls_(cls), next_(next) {}
  std::string fresh() { return std::string(1, cls_) + std::to_string(next_++); }

 private:
  char cls_;
  std::size_t next_;
};

using sifp::ExprPtr;
using sifp::StmtPtr;

inline StmtPtr ifThen(RegAlloc& a, ExprPtr cond, StmtPtr body) {
  const std::string f = a.fresh();
  return sifp::seq(sifp::assign(f, std::move(cond)),
                   sifp::whileDo(sifp::id(f), sifp::seq(std::move(body), sifp::assign(f, sifp::eps()))));
}

/// dst := dst . bit, for a register holding 0 or 1.
inline StmtPtr appendBit(RegAlloc& a, const std::string& dst, const std::string& bit) {
  return sifp::seq(ifThen(a, sifp::id(bit), sifp::assign(dst, sifp::app1(sifp::id(dst)))),
                   ifThen(a, sifp::notE(sifp::id(bit)), sifp::assign(dst, sifp::app0(sifp::id(dst)))));
}

/// Runs body(prefix, bit) once per bit of src, left to right; `prefix`
/// holds the bits before `bit`. The body must not write src, prefix or bit.
inline StmtPtr forEachBit(RegAlloc& a, const std::string& src,
                          const std::function<StmtPtr(const std::string&, const std::string&)>& body) {
  const std::string p = a.fresh(), c = a.fresh(), b = a.fresh();
  auto more = sifp::assign(c, sifp::notE(sifp::subEq(sifp::id(src), p)));
  return sifp::seqAll({sifp::assign(p, sifp::eps()), more,
                       sifp::whileDo(sifp::id(c), sifp::seqAll({sifp::assign(b, sifp::subEq(sifp::app1(sifp::id(p)), src)),
                                                                body(p, b), appendBit(a, p, b), more}))});
}

/// dst := dst . src
inline StmtPtr concatInto(RegAlloc& a, const std::string& dst, const std::string& src) {
  return forEachBit(a, src, [&](const std::string&, const std::string& b) { return appendBit(a, dst, b); });
}

}  // namespace flipbench::detail
