#include "lfhh/hhf_translate.hpp"

#include "lfhh/rigidity.hpp"

namespace lfhh {

SimpleType erase_type(const Expr& classifier) {
  switch (classifier.tag()) {
    case ExprTag::Type: return SimpleType::ty();
    case ExprTag::Pi: return SimpleType::arrow(erase_type(classifier.annot()), erase_type(classifier.body()));
    default: return SimpleType::tm();
  }
}

std::map<std::string, SimpleType, std::less<>> constant_sorts(const Signature& sig) {
  std::map<std::string, SimpleType, std::less<>> out;
  for (const auto& d : sig.entries()) out.emplace(d.name, erase_type(d.classifier));
  return out;
}

Term encode_term(const Expr& e, const MetaMap* metas) {
  switch (e.tag()) {
    case ExprTag::Const: return Term::constant(e.name());
    case ExprTag::BVar: return Term::bvar(e.index());
    case ExprTag::Meta: {
      if (metas) {
        auto it = metas->find(e.name());
        if (it != metas->end()) return it->second;
      }
      throw LfError("encode_term", "unmapped meta-variable " + e.name());
    }
    case ExprTag::Lam: return Term::lam(e.name(), erase_type(e.annot()), encode_term(e.body(), metas));
    case ExprTag::App: {
      Spine sp = spine_of(e);
      std::vector<Term> args;
      args.reserve(sp.args.size());
      for (const auto& a : sp.args) args.push_back(encode_term(a, metas));
      return Term::app(encode_term(sp.head, metas), std::move(args));
    }
    case ExprTag::Type:
    case ExprTag::Pi: break;
  }
  throw LfError("encode_term", "cannot encode " + pretty_print(e));
}

namespace {

// Shared Π-walk. `guard(i, B', x)` builds the hypothesis for binder i, where
// B' is the domain seen from under the new quantifier and x the η-long
// bound variable.
template <typename Guard>
Formula walk(const Expr& type, const Term& subject, const MetaMap* metas, const Guard& guard, std::size_t i = 0) {
  if (!type.is(ExprTag::Pi)) return Formula::atom(subject, encode_term(type, metas));
  SimpleType dom = erase_type(type.annot());
  Term x = eta_expand(Term::bvar(0), dom);
  Formula hyp = guard(i, shift(type.annot(), 1), x);
  Term applied = Term::app(term_shift(subject, 1), {x});
  Formula rest = walk(type.body(), applied, metas, guard, i + 1);
  std::string hint = type.name().empty() || type.name() == "_" ? std::string("x") : type.name();
  return Formula::forall(hint, dom, Formula::implies(std::move(hyp), std::move(rest)));
}

}  // namespace

Formula naive_formula(const Expr& type, const Term& subject, const MetaMap* metas) {
  return walk(type, subject, metas,
              [metas](std::size_t, const Expr& dom, const Term& x) { return naive_formula(dom, x, metas); });
}

Formula positive_formula(const Expr& type, const Term& subject, const MetaMap* metas) {
  std::vector<bool> rigid = rigid_binders(type);
  return walk(type, subject, metas, [&](std::size_t i, const Expr& dom, const Term& x) {
    return rigid[i] ? Formula::top() : negative_formula(dom, x, metas);
  });
}

Formula negative_formula(const Expr& type, const Term& subject, const MetaMap* metas) {
  return walk(type, subject, metas,
              [metas](std::size_t, const Expr& dom, const Term& x) { return positive_formula(dom, x, metas); });
}

Formula translate_simple_decl(const Decl& decl) { return naive_formula(decl.classifier, Term::constant(decl.name)); }

Formula translate_optimized_decl(const Decl& decl) {
  return positive_formula(decl.classifier, Term::constant(decl.name));
}

namespace {

template <typename F>
ClauseSet translate_with(const Signature& sig, TranslationMode mode, const F& per_decl) {
  ClauseSet cs;
  cs.mode = mode;
  for (const auto& d : sig.entries())
    if (d.sort == DeclSort::Type) cs.clauses.push_back({d.name, per_decl(d)});
  return cs;
}

}  // namespace

ClauseSet translate_simple(const Signature& sig) {
  return translate_with(sig, TranslationMode::Naive, translate_simple_decl);
}

ClauseSet translate_optimized(const Signature& sig) {
  return translate_with(sig, TranslationMode::Optimized, translate_optimized_decl);
}

ClauseSet translate(const Signature& sig, TranslationMode mode) {
  return mode == TranslationMode::Naive ? translate_simple(sig) : translate_optimized(sig);
}

QueryGoal translate_query(const QueryType& q, TranslationMode mode) {
  QueryGoal g;
  g.mode = mode;
  g.proof = Term::meta(0, "proof", erase_type(q.type), 0);
  MetaMap map;
  std::uint32_t id = 1;
  for (std::size_t i = 0; i < q.metas.size(); ++i) {
    Term m = Term::meta(id++, q.metas[i], erase_type(q.meta_types[i]), 0);
    map.emplace(q.metas[i], m);
    g.names.push_back(q.metas[i]);
    g.metas.push_back(m);
  }
  g.next_id = id;
  g.goal = mode == TranslationMode::Naive ? naive_formula(q.type, g.proof, &map)
                                          : negative_formula(q.type, g.proof, &map);
  return g;
}

}  // namespace lfhh
