#include <stdexcept>

#include "flipbench/errors.hpp"
#include "flipbench/translate.hpp"
#include "sifp_codegen.hpp"

namespace flipbench::translate {

namespace {

using namespace sifp;
using detail::RegAlloc;
using por::BoundPtr;
using por::BoundTerm;
using por::PorFn;
using por::PorPtr;
using Regs = std::vector<std::string>;

class PorCompiler {
 public:
  std::string fresh() { return regs_.fresh(); }

  StmtPtr compile(const PorFn& f, const Regs& args, const std::string& out) {
    switch (f.kind) {
      case PorFn::Kind::E: return assign(out, eps());
      case PorFn::Kind::Proj: return assign(out, id(args.at(f.i - 1)));
      case PorFn::Kind::Succ: return assign(out, f.bit ? app1(id(args.at(0))) : app0(id(args.at(0))));
      case PorFn::Kind::Query: return seq(flip(id(args.at(0))), assign(out, id("R")));
      case PorFn::Kind::Cond: return compileCond(args, out);
      case PorFn::Kind::Compose: {
        std::vector<StmtPtr> code;
        Regs inner;
        for (const auto& h : f.hs) {
          inner.push_back(regs_.fresh());
          code.push_back(compile(*h, args, inner.back()));
        }
        code.push_back(compile(*f.g, inner, out));
        return seqAll(code);
      }
      case PorFn::Kind::Rec: return compileRec(f, args, out);
    }
    throw std::logic_error("unreachable");
  }

 private:
  // C(x, y, z0, z1): y when x is empty, otherwise z_b for the last bit b of x.
  StmtPtr compileCond(const Regs& args, const std::string& out) {
    const std::string last = regs_.fresh();
    auto scan = detail::forEachBit(regs_, args.at(0), [&](const std::string&, const std::string& b) {
      return assign(last, id(b));
    });
    return seqAll({assign(last, eps()), scan, assign(out, id(args.at(1))),
                   detail::ifThen(regs_, id(last), assign(out, id(args.at(3)))),
                   detail::ifThen(regs_, notE(id(last)), assign(out, id(args.at(2))))});
  }

  StmtPtr compileRec(const PorFn& f, const Regs& args, const std::string& out) {
    if (args.empty()) throw ValidationError("bounded recursion applied to no arguments");
    const Regs xs(args.begin(), args.end() - 1);
    const std::string value = regs_.fresh(), step = regs_.fresh(), bound = regs_.fresh();
    auto body = [&](const std::string& prefix, const std::string& b) {
      Regs hArgs = xs;
      hArgs.push_back(prefix);
      hArgs.push_back(value);
      return seqAll({detail::ifThen(regs_, id(b), compile(*f.h1, hArgs, step)),
                     detail::ifThen(regs_, notE(id(b)), compile(*f.h0, hArgs, step)),
                     compileBound(f.bound, xs, prefix, bound), truncateInto(value, step, bound)});
    };
    return seqAll({compile(*f.g, xs, value), detail::forEachBit(regs_, args.back(), body), assign(out, id(value))});
  }

  StmtPtr compileBound(const BoundPtr& t, const Regs& xs, const std::string& y, const std::string& out) {
    switch (t->kind) {
      case BoundTerm::Kind::Eps: return assign(out, eps());
      case BoundTerm::Kind::Zero: return assign(out, app0(eps()));
      case BoundTerm::Kind::One: return assign(out, app1(eps()));
      case BoundTerm::Kind::Var:
        if (t->name == "y") return assign(out, id(y));
        return assign(out, id(xs.at(std::stoul(t->name.substr(1)) - 1)));
      case BoundTerm::Kind::Concat: {
        const std::string rhs = regs_.fresh();
        return seqAll({compileBound(t->children.at(0), xs, y, out), compileBound(t->children.at(1), xs, y, rhs),
                       detail::concatInto(regs_, out, rhs)});
      }
      case BoundTerm::Kind::Times: {
        const std::string base = regs_.fresh(), count = regs_.fresh();
        auto repeat = detail::forEachBit(regs_, count, [&](const std::string&, const std::string&) {
          return detail::concatInto(regs_, out, base);
        });
        return seqAll({compileBound(t->children.at(0), xs, y, base), compileBound(t->children.at(1), xs, y, count),
                       assign(out, eps()), repeat});
      }
      case BoundTerm::Kind::Foreign: throw ValidationError("bound not explicit-definition: '" + t->name + "'");
    }
    throw std::logic_error("unreachable");
  }

  // dst := src truncated to the length of bound.
  StmtPtr truncateInto(const std::string& dst, const std::string& src, const std::string& bound) {
    const std::string pos = regs_.fresh(), more = regs_.fresh(), bit = regs_.fresh(), posBit = regs_.fresh();
    auto test = seq(assign(more, notE(subEq(id(bound), pos))),
                    detail::ifThen(regs_, id(more), assign(more, notE(subEq(id(src), dst)))));
    return seqAll({assign(dst, eps()), assign(pos, eps()), test,
                   whileDo(id(more), seqAll({assign(bit, subEq(app1(id(dst)), src)), detail::appendBit(regs_, dst, bit),
                                             assign(posBit, subEq(app1(id(pos)), bound)),
                                             detail::appendBit(regs_, pos, posBit), test}))});
  }

  RegAlloc regs_{'Y', 1};
};

}  // namespace

sifp::StmtPtr compilePorToRA(const por::PorPtr& f, std::size_t arity) {
  por::requireValid(f);
  const std::size_t n = por::arity(*f).value_or(arity);
  switch (f->kind) {
    case PorFn::Kind::E: return assign("R", eps());
    case PorFn::Kind::Query: return flip(id("X1"));
    case PorFn::Kind::Proj: return assign("R", id("X" + std::to_string(f->i)));
    case PorFn::Kind::Succ: return assign("R", f->bit ? app1(id("X1")) : app0(id("X1")));
    default: break;
  }
  Regs args;
  for (std::size_t k = 1; k <= n; ++k) args.push_back("X" + std::to_string(k));
  PorCompiler c;
  const std::string out = c.fresh();
  return seq(c.compile(*f, args, out), assign("R", id(out)));
}

}  // namespace flipbench::translate
