#include <algorithm>

#include "lfhh/lf_scope.hpp"
#include "lfhh/lf_syntax.hpp"

namespace lfhh {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw LfError("normalize", msg); }

void charge(NormalizeState& st) {
  if (st.budget == 0) fail("normalization budget exceeded");
  --st.budget;
}

void record_meta(Scope& scope, const std::string& name, const Expr& cls, NormalizeState& st) {
  if (!st.metas) fail("unexpected meta-variable " + name);
  for (const auto& [local, _] : scope.locals())
    if (occurs_free(cls, local))
      fail("type of meta-variable " + name + " depends on a local binder");
  // Recursion through normalize_in terminates: the classifier is strictly
  // smaller than the query it came from.
  NormalizeState inner{st.budget, st.metas};
  Expr canonical = normalize_in(scope, cls, Expr::type(), inner);
  st.budget = inner.budget;
  auto it = st.metas->types.find(name);
  if (it == st.metas->types.end()) {
    st.metas->types.emplace(name, canonical);
    st.metas->order.push_back(name);
  } else if (!alpha_eq(it->second, canonical)) {
    fail("meta-variable " + name + " used at two different types: " + pretty_print(it->second) + " and " +
         pretty_print(canonical));
  }
}

}  // namespace

Expr whnf(const Expr& e, NormalizeState& st) {
  Expr cur = e;
  for (;;) {
    if (!cur.is(ExprTag::App)) return cur;
    Spine sp = spine_of(cur);
    if (!sp.head.is(ExprTag::Lam)) return cur;
    Expr reduced = sp.head;
    std::size_t i = 0;
    while (i < sp.args.size() && reduced.is(ExprTag::Lam)) {
      charge(st);
      reduced = instantiate(reduced.body(), sp.args[i++]);
    }
    cur = lfhh::apply(reduced, std::vector<Expr>(sp.args.begin() + static_cast<std::ptrdiff_t>(i), sp.args.end()));
  }
}

Expr normalize_in(Scope& scope, const Expr& e, const Expr& classifier, NormalizeState& st) {
  Expr cls = whnf(classifier, st);
  if (e.is(ExprTag::Meta)) record_meta(scope, e.name(), cls, st);
  Expr ew = whnf(e, st);

  if (cls.is(ExprTag::Pi)) {
    const std::string& hint = ew.is(ExprTag::Lam) ? ew.name() : cls.name();
    Expr annot = normalize_in(scope, ew.is(ExprTag::Lam) ? ew.annot() : cls.annot(), Expr::type(), st);
    ScopedParam p(scope, hint, cls.annot());
    Expr body = ew.is(ExprTag::Lam) ? instantiate(ew.body(), p.var()) : Expr::app(ew, p.var());
    Expr r = normalize_in(scope, body, instantiate(cls.body(), p.var()), st);
    return Expr::lam(hint, annot, abstract(r, p.name()));
  }

  if (ew.is(ExprTag::Pi)) {
    if (!cls.is(ExprTag::Type)) fail("Π-type " + pretty_print(ew) + " where an object of type " + pretty_print(cls) + " is expected");
    Expr annot = normalize_in(scope, ew.annot(), Expr::type(), st);
    ScopedParam p(scope, ew.name(), annot);
    Expr body = normalize_in(scope, instantiate(ew.body(), p.var()), Expr::type(), st);
    return Expr::pi(ew.name(), annot, abstract(body, p.name()));
  }
  if (ew.is(ExprTag::Lam))
    fail("cannot eta-expand: abstraction " + pretty_print(ew) + " at base classifier " + pretty_print(cls));
  if (ew.is(ExprTag::Type)) fail("'type' is not an object or type family");

  Spine sp = spine_of(ew);
  Expr htype;
  const Expr& h = sp.head;
  switch (h.tag()) {
    case ExprTag::Const: {
      auto entry = scope.lookup(h.name());
      if (!entry) throw LfError("normalize", "unbound constant " + h.name());
      htype = entry->classifier;
      break;
    }
    case ExprTag::Meta: {
      if (!st.metas) fail("unexpected meta-variable " + h.name());
      auto it = st.metas->types.find(h.name());
      if (it == st.metas->types.end())
        fail("meta-variable " + h.name() + " applied before its type is known");
      htype = it->second;
      break;
    }
    case ExprTag::BVar:
      fail("loose bound variable in " + pretty_print(ew));
    default:
      fail("cannot eta-expand: head of " + pretty_print(ew) + " is not a variable or constant");
  }

  std::vector<Expr> args;
  args.reserve(sp.args.size());
  for (const auto& a : sp.args) {
    Expr t = whnf(htype, st);
    if (!t.is(ExprTag::Pi)) fail("too many arguments for " + h.name() + " in " + pretty_print(ew));
    Expr na = normalize_in(scope, a, t.annot(), st);
    htype = instantiate(t.body(), na);
    args.push_back(std::move(na));
  }
  if (whnf(htype, st).is(ExprTag::Pi))
    fail("cannot eta-expand: " + pretty_print(ew) + " is under-applied at base classifier " + pretty_print(cls));
  return lfhh::apply(h, args);
}

Expr normalize_kind_in(Scope& scope, const Expr& kind, NormalizeState& st) {
  Expr k = whnf(kind, st);
  if (k.is(ExprTag::Type)) return k;
  if (!k.is(ExprTag::Pi)) fail("kind expected, found " + pretty_print(k));
  Expr annot = normalize_in(scope, k.annot(), Expr::type(), st);
  ScopedParam p(scope, k.name(), annot);
  Expr body = normalize_kind_in(scope, instantiate(k.body(), p.var()), st);
  return Expr::pi(k.name(), annot, abstract(body, p.name()));
}

Expr normalize(const Signature& sig, const Expr& e, const Expr& classifier, const NormalizeOptions& opts,
               MetaTyping* metas) {
  NameSupply names = NameSupply::avoiding(e, classifier);
  Scope scope(sig, names);
  NormalizeState st{opts.step_budget, metas};
  return normalize_in(scope, e, classifier, st);
}

Expr normalize_kind(const Signature& sig, const Expr& kind, const NormalizeOptions& opts) {
  NameSupply names = NameSupply::avoiding(kind);
  Scope scope(sig, names);
  NormalizeState st{opts.step_budget, nullptr};
  return normalize_kind_in(scope, kind, st);
}

Signature canonicalize(const Signature& sig, const NormalizeOptions& opts) {
  Signature out;
  NameSupply names;
  for (const auto& d : sig.entries()) {
    names.reserve_past(d.classifier);
    Scope scope(out, names);
    NormalizeState st{opts.step_budget, nullptr};
    Expr cls;
    try {
      cls = d.sort == DeclSort::Kind ? normalize_kind_in(scope, d.classifier, st)
                                     : normalize_in(scope, d.classifier, Expr::type(), st);
    } catch (const LfError& err) {
      std::string msg = err.what();
      std::string where = d.line ? std::to_string(d.line) + ":" + std::to_string(d.col) + ": " : "";
      if (msg.find("unbound constant") != std::string::npos)
        throw LfError(err.rule(), where + "in " + d.name + ": " + msg.substr(err.rule().size() + 2));
      throw LfError("check_context", where + "classifier of " + d.name + " not canonical after normalization: " + msg);
    }
    out.add(Decl{d.name, cls, d.sort, d.line, d.col});
  }
  return out;
}

}  // namespace lfhh
