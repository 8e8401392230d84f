#include "lfhh/lf_typecheck.hpp"

#include <algorithm>
#include <sstream>

#include "lfhh/lf_scope.hpp"

namespace lfhh {

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::NullCtx: return "nullctx";
    case Rule::KindCtx: return "kindctx";
    case Rule::TypeCtx: return "typectx";
    case Rule::TypeKind: return "typekind";
    case Rule::PiKind: return "pikind";
    case Rule::PiFam: return "pifam";
    case Rule::AbsFam: return "absfam";
    case Rule::AbsObj: return "absobj";
    case Rule::BackchainObj: return "backchain-obj";
    case Rule::BackchainFam: return "backchain-fam";
  }
  return "?";
}

std::size_t derivation_size(const Derivation& d) { return d.size; }

namespace {

void trace_into(const Derivation& d, std::ostringstream& out) {
  out << "(" << rule_name(d.rule) << " \"";
  const Judgment& j = d.conclusion;
  if (d.rule == Rule::KindCtx || d.rule == Rule::TypeCtx)
    out << d.head << " : " << pretty_print(j.classifier) << " ctx";
  else if (d.rule == Rule::NullCtx)
    out << ". ctx";
  else if (!j.classifier)
    out << pretty_print(j.subject) << " kind";
  else
    out << pretty_print(j.subject) << " : " << pretty_print(j.classifier);
  out << "\" (";
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    if (i) out << " ";
    trace_into(d.premises[i], out);
  }
  out << "))";
}

Derivation node(Rule r, Judgment j, std::vector<Derivation> premises) {
  Derivation d;
  d.rule = r;
  d.conclusion = std::move(j);
  d.premises = std::move(premises);
  d.size = 1;
  for (const auto& p : d.premises) d.size += p.size;
  return d;
}

class Kernel {
 public:
  explicit Kernel(Scope& scope) : scope_(scope), st_{1'000'000, nullptr} {}

  Derivation kind(const Expr& k) {
    if (k.is(ExprTag::Type)) return node(Rule::TypeKind, judge(k, {}), {});
    if (!k.is(ExprTag::Pi)) fail("check_kind", "kind expected, found " + pretty_print(k));
    Derivation dom = type(k.annot());
    ScopedParam p(scope_, k.name(), k.annot());
    Derivation body = kind(instantiate(k.body(), p.var()));
    return node(Rule::PiKind, judge(k, {}), {std::move(dom), std::move(body)});
  }

  Derivation type(const Expr& a) {
    if (a.is(ExprTag::Pi)) {
      Derivation dom = type(a.annot());
      ScopedParam p(scope_, a.name(), a.annot());
      Derivation body = type(instantiate(a.body(), p.var()));
      return node(Rule::PiFam, judge(a, Expr::type()), {std::move(dom), std::move(body)});
    }
    if (!is_spine(a)) fail("check_type", "type expected, found " + pretty_print(a));
    return backchain(a, Expr::type(), Rule::BackchainFam, "check_type");
  }

  Derivation family(const Expr& a, const Expr& k) {
    if (k.is(ExprTag::Type)) return type(a);
    if (!k.is(ExprTag::Pi)) fail("check_family", "kind expected, found " + pretty_print(k));
    if (!a.is(ExprTag::Lam)) fail("check_family", "family abstraction expected at " + pretty_print(k));
    if (!alpha_eq(a.annot(), k.annot()))
      fail("check_family", "annotation " + pretty_print(a.annot()) + " differs from " + pretty_print(k.annot()));
    Derivation dom = type(a.annot());
    ScopedParam p(scope_, a.name(), a.annot());
    Derivation body = family(instantiate(a.body(), p.var()), instantiate(k.body(), p.var()));
    return node(Rule::AbsFam, judge(a, k), {std::move(dom), std::move(body)});
  }

  Derivation object(const Expr& m, const Expr& a) {
    if (a.is(ExprTag::Pi)) {
      if (!m.is(ExprTag::Lam))
        fail("check_object", "application against Π-type: " + pretty_print(m) + " : " + pretty_print(a));
      if (!alpha_eq(m.annot(), a.annot()))
        fail("check_object", "annotation " + pretty_print(m.annot()) + " differs from " + pretty_print(a.annot()));
      ScopedParam p(scope_, m.name(), a.annot());
      Derivation body = object(instantiate(m.body(), p.var()), instantiate(a.body(), p.var()));
      return node(Rule::AbsObj, judge(m, a), {std::move(body)});
    }
    if (m.is(ExprTag::Lam))
      fail("check_object", "λ against base type: " + pretty_print(m) + " : " + pretty_print(a));
    if (!is_spine(m)) fail("check_object", "object expected, found " + pretty_print(m));
    return backchain(m, a, Rule::BackchainObj, "check_object");
  }

 private:
  static bool is_spine(const Expr& e) {
    Expr h = spine_of(e).head;
    return h.is(ExprTag::Const) || h.is(ExprTag::Meta) || h.is(ExprTag::BVar);
  }

  Judgment judge(const Expr& subject, const Expr& cls) const { return Judgment{scope_.fingerprint(), subject, cls}; }

  [[noreturn]] void fail(const char* rule, const std::string& msg) const { throw LfError(rule, msg); }

  // Shared by objects (expected: a base type) and families (expected: type).
  Derivation backchain(const Expr& subject, const Expr& expected, Rule rule, const char* where) {
    Spine sp = spine_of(subject);
    if (sp.head.is(ExprTag::Meta)) fail(where, "meta-variable " + sp.head.name() + " in kernel input");
    if (!sp.head.is(ExprTag::Const)) fail(where, "loose bound variable in " + pretty_print(subject));
    const std::string& y = sp.head.name();
    auto entry = scope_.lookup(y);
    if (!entry) fail(where, "unbound constant " + y);
    bool want_family = rule == Rule::BackchainFam;
    if (want_family && entry->sort != DeclSort::Kind) fail(where, y + " is not a type family");
    if (!want_family && entry->sort == DeclSort::Kind) fail(where, "type family " + y + " used as an object");

    Expr t = entry->classifier;
    std::vector<Derivation> premises;
    premises.reserve(sp.args.size());
    for (std::size_t i = 0; i < sp.args.size(); ++i) {
      if (!t.is(ExprTag::Pi))
        fail(where, "argument count of " + y + " exceeds its Π-arity in " + pretty_print(subject));
      Expr dom = normalize_in(scope_, t.annot(), Expr::type(), st_);
      try {
        premises.push_back(object(sp.args[i], dom));
      } catch (const LfError& e) {
        fail(where, "premise " + std::to_string(i + 1) + " of backchain on " + y + ": " + e.what());
      }
      t = instantiate(t.body(), sp.args[i]);
    }
    if (t.is(ExprTag::Pi))
      fail(where, "argument count of " + y + " is below its Π-arity in " + pretty_print(subject));
    Expr target = want_family ? t : normalize_in(scope_, t, Expr::type(), st_);
    if (!alpha_eq(target, expected))
      fail(where, "target type mismatch: " + pretty_print(subject) + " has type " + pretty_print(target) +
                      ", expected " + pretty_print(expected));
    Derivation d = node(rule, judge(subject, expected), std::move(premises));
    d.head = y;
    d.instantiation = sp.args;
    return d;
  }

  Scope& scope_;
  NormalizeState st_;
};

void reject_metas(const char* where, const Expr& e) {
  if (e && has_meta(e)) throw LfError(where, "meta-variable in kernel input: " + pretty_print(e));
}

}  // namespace

std::string derivation_trace(const Derivation& d) {
  std::ostringstream out;
  trace_into(d, out);
  return out.str();
}

Derivation check_context(const Signature& sig) {
  Signature canon;
  try {
    canon = canonicalize(sig);
  } catch (const LfError& e) {
    if (e.rule() == "check_context") throw;
    throw LfError("check_context", e.what());
  }
  NameSupply names;
  Derivation d = node(Rule::NullCtx, Judgment{0, {}, {}}, {});
  for (std::size_t i = 0; i < canon.size(); ++i) {
    const Decl& decl = canon.entries()[i];
    names.reserve_past(decl.classifier);
    Scope scope(canon, i, names);
    Kernel k(scope);
    Derivation prem;
    try {
      reject_metas("check_context", decl.classifier);
      prem = decl.sort == DeclSort::Kind ? k.kind(decl.classifier) : k.type(decl.classifier);
    } catch (const LfError& e) {
      throw LfError("check_context", "declaration " + decl.name + ": " + e.what());
    }
    Scope after(canon, i + 1, names);
    Derivation next = node(decl.sort == DeclSort::Kind ? Rule::KindCtx : Rule::TypeCtx,
                           Judgment{after.fingerprint(), Expr::constant(decl.name), decl.classifier},
                           {std::move(prem), std::move(d)});
    next.head = decl.name;
    d = std::move(next);
  }
  return d;
}

Derivation check_kind(const Signature& sig, const Expr& kind) {
  reject_metas("check_kind", kind);
  NameSupply names = NameSupply::avoiding(kind);
  Scope scope(sig, names);
  NormalizeState st{1'000'000, nullptr};
  Expr k = normalize_kind_in(scope, kind, st);
  return Kernel(scope).kind(k);
}

Derivation check_type(const Signature& sig, const Expr& type) {
  reject_metas("check_type", type);
  NameSupply names = NameSupply::avoiding(type);
  Scope scope(sig, names);
  NormalizeState st{1'000'000, nullptr};
  Expr a = normalize_in(scope, type, Expr::type(), st);
  return Kernel(scope).type(a);
}

Derivation check_family(const Signature& sig, const Expr& family, const Expr& kind) {
  reject_metas("check_family", family);
  reject_metas("check_family", kind);
  NameSupply names = NameSupply::avoiding(family, kind);
  Scope scope(sig, names);
  NormalizeState st{1'000'000, nullptr};
  Expr k = normalize_kind_in(scope, kind, st);
  Expr a = normalize_in(scope, family, k, st);
  Kernel kern(scope);
  kern.kind(k);
  return kern.family(a, k);
}

Derivation check_object(const Signature& sig, const Expr& object, const Expr& type) {
  reject_metas("check_object", object);
  reject_metas("check_object", type);
  NameSupply names = NameSupply::avoiding(object, type);
  Scope scope(sig, names);
  NormalizeState st{1'000'000, nullptr};
  Expr a = normalize_in(scope, type, Expr::type(), st);
  Expr m = normalize_in(scope, object, a, st);
  return Kernel(scope).object(m, a);
}

const Expr* QueryType::meta_type(std::string_view name) const {
  for (std::size_t i = 0; i < metas.size(); ++i)
    if (metas[i] == name) return &meta_types[i];
  return nullptr;
}

QueryType elaborate_query(const Signature& sig, const ParsedQuery& q) {
  MetaTyping typing;
  Expr type;
  try {
    type = normalize(sig, q.goal_type, Expr::type(), {}, &typing);
  } catch (const LfError& e) {
    throw LfError("query", e.what());
  }

  // Order metas so each classifier only mentions metas placed before it.
  std::vector<std::string> pending = q.metas;
  for (const auto& m : typing.order)
    if (std::find(pending.begin(), pending.end(), m) == pending.end()) pending.push_back(m);
  QueryType out;
  out.type = type;
  Signature ext = sig;
  Subst as_params;
  while (!pending.empty()) {
    auto ready = std::find_if(pending.begin(), pending.end(), [&](const std::string& m) {
      auto it = typing.types.find(m);
      if (it == typing.types.end()) return false;
      for (const auto& dep : meta_names(it->second))
        if (!as_params.count(dep)) return false;
      return true;
    });
    if (ready == pending.end()) throw LfError("query", "cannot order meta-variable classifiers");
    std::string m = *ready;
    pending.erase(ready);
    Expr mt = typing.types.at(m);
    Expr closed = substitute_metas(mt, as_params);
    try {
      check_type(ext, closed);
    } catch (const LfError& e) {
      throw LfError("query", "classifier of meta-variable " + m + ": " + e.what());
    }
    std::string param = "?" + m;
    ext.add(Decl{param, closed, DeclSort::Type});
    as_params.emplace(m, Expr::constant(param));
    out.metas.push_back(m);
    out.meta_types.push_back(mt);
  }
  try {
    check_type(ext, substitute_metas(type, as_params));
  } catch (const LfError& e) {
    throw LfError("query", e.what());
  }
  return out;
}

QueryType elaborate_query(const Signature& sig, std::string_view text) {
  return elaborate_query(sig, parse_query(text, sig));
}

}  // namespace lfhh
