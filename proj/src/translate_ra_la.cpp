#include <algorithm>

#include "flipbench/errors.hpp"
#include "flipbench/translate.hpp"
#include "sifp_codegen.hpp"

namespace flipbench::translate {

namespace {

using namespace sifp;
using detail::appendBit;
using detail::ifThen;
using detail::RegAlloc;

// Table layout: per entry, each coordinate bit c as "1c", then "0", then the drawn bit.
class MemoCompiler {
 public:
  MemoCompiler(std::size_t firstFree) : regs_('S', firstFree), table_(regs_.fresh()) {}

  StmtPtr rewrite(const StmtPtr& p) {
    switch (p->kind) {
      case Stmt::Kind::Assign:
      case Stmt::Kind::RandBit: return p;
      case Stmt::Kind::Seq: return seq(rewrite(p->s), rewrite(p->t));
      case Stmt::Kind::While: return whileDo(p->e, rewrite(p->s));
      case Stmt::Kind::Flip: return lookup(p->e);
    }
    throw ValidationError("unknown statement");
  }

 private:
  StmtPtr lookup(const ExprPtr& coordinate) {
    const std::string cd = regs_.fresh(), pos = regs_.fresh(), found = regs_.fresh(), val = regs_.fresh(),
                      more = regs_.fresh(), match = regs_.fresh(), matched = regs_.fresh(), flag = regs_.fresh(),
                      bit = regs_.fresh(), done = regs_.fresh(), next = regs_.fresh(), same = regs_.fresh(),
                      drawn = regs_.fresh();
    const std::string& tab = table_;
    auto readInto = [&](const std::string& r) {
      return seq(assign(r, subEq(app1(id(pos)), tab)), appendBit(regs_, pos, r));
    };
    auto compareBit = seqAll({assign(done, subEq(id(cd), matched)), ifThen(regs_, id(done), assign(match, app0(eps()))),
                              ifThen(regs_, notE(id(done)),
                                     seqAll({assign(next, subEq(app1(id(matched)), cd)), assign(same, subEq(id(next), bit)),
                                             ifThen(regs_, notE(id(same)), assign(match, app0(eps()))),
                                             appendBit(regs_, matched, next)}))});
    auto entry = seqAll({assign(match, app1(eps())), assign(matched, eps()), readInto(flag),
                         whileDo(id(flag), seqAll({readInto(bit), ifThen(regs_, id(match), compareBit), readInto(flag)})),
                         readInto(drawn),
                         ifThen(regs_, id(match),
                                ifThen(regs_, subEq(id(cd), matched),
                                       seq(assign(found, app1(eps())), assign(val, id(drawn))))),
                         assign(more, notE(subEq(id(tab), pos)))});
    auto record = detail::forEachBit(regs_, cd, [&](const std::string&, const std::string& b) {
      return seq(assign(tab, app1(id(tab))), appendBit(regs_, tab, b));
    });
    auto miss = seqAll({randBit(), record, assign(tab, app0(id(tab))), appendBit(regs_, tab, "R")});
    return seqAll({assign(cd, coordinate), assign(pos, eps()), assign(found, app0(eps())), assign(val, eps()),
                   assign(more, notE(subEq(id(tab), pos))), whileDo(id(more), entry),
                   ifThen(regs_, id(found), assign("R", id(val))), ifThen(regs_, notE(id(found)), miss)});
  }

  RegAlloc regs_;
  std::string table_;
};

}  // namespace

sifp::StmtPtr compileRAtoLA(const sifp::StmtPtr& p) {
  const Flavor fl = flavor(p);
  if (fl == Flavor::LA || fl == Flavor::Mixed) throw ValidationError("compileRAtoLA expects a SIFP_RA program");
  std::size_t maxS = 0;
  for (const auto& r : registers(p)) {
    if (r[0] == 'S') maxS = std::max<std::size_t>(maxS, std::stoul(r.substr(1)));
  }
  MemoCompiler c(maxS + 1);
  return c.rewrite(p);
}

}  // namespace flipbench::translate
