#include <algorithm>
#include <limits>

#include "lfhh/hhf_prover.hpp"

namespace lfhh {

Term BindingStore::fresh_meta(std::string hint, SimpleType type, std::uint32_t level) {
  return Term::meta(next_++, std::move(hint), std::move(type), level);
}

Term BindingStore::fresh_eigen(std::string hint, SimpleType type, std::uint32_t level) {
  return Term::eigen(next_++, std::move(hint), std::move(type), level);
}

const Term* BindingStore::binding(std::uint32_t id) const {
  if (id >= bindings_.size() || !bindings_[id]) return nullptr;
  return &bindings_[id];
}

void BindingStore::bind(std::uint32_t id, Term value) {
  if (id >= bindings_.size()) bindings_.resize(std::max<std::size_t>(id + 1, bindings_.size() * 2));
  bindings_[id] = std::move(value);
  trail_.push_back(id);
}

void BindingStore::undo(std::size_t mark) {
  while (trail_.size() > mark) {
    bindings_[trail_.back()] = Term();
    trail_.pop_back();
  }
}

Term BindingStore::head_normal(const Term& t) const {
  Term cur = t;
  for (;;) {
    const Term& h = term_head(cur);
    if (!h.is(TermTag::Meta)) return cur;
    const Term* b = binding(h.id());
    if (!b) return cur;
    cur = Term::app(*b, term_args(cur));
  }
}

Term BindingStore::resolve(const Term& t) const {
  switch (t.tag()) {
    case TermTag::Meta: {
      const Term* b = binding(t.id());
      return b ? resolve(*b) : t;
    }
    case TermTag::Lam: return Term::lam(t.name(), t.type(), resolve(t.body()));
    case TermTag::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(resolve(a));
      const Term& h = t.head();
      if (h.is(TermTag::Meta)) {
        if (const Term* b = binding(h.id())) return resolve(Term::app(*b, std::move(args)));
      }
      return Term::app(h, std::move(args));
    }
    default: return t;
  }
}

Formula BindingStore::resolve(const Formula& f) const {
  switch (f.tag()) {
    case FormulaTag::Top: return f;
    case FormulaTag::Atom: return Formula::atom(resolve(f.subject()), resolve(f.classifier()));
    case FormulaTag::Implies: return Formula::implies(resolve(f.lhs()), resolve(f.rhs()));
    case FormulaTag::Forall: return Formula::forall(f.hint(), f.type(), resolve(f.body()));
  }
  return f;
}

namespace {

constexpr std::uint32_t kLocalLevel = std::numeric_limits<std::uint32_t>::max();

struct Abort {
  UnifyResult result;
};

// Argument of a pattern spine: an eigenvariable or an index bound inside the
// term being inverted, possibly η-expanded.
std::optional<Term> pattern_atom(const Term& arg) {
  auto a = eta_contract_atom(arg);
  if (!a || !(a->is(TermTag::Eigen) || a->is(TermTag::BVar))) return std::nullopt;
  return a;
}

bool same_atom(const Term& a, const Term& b) { return a.tag() == b.tag() && a.id() == b.id(); }

std::vector<SimpleType> domains(const SimpleType& t, std::size_t n, SimpleType* codomain) {
  std::vector<SimpleType> out;
  SimpleType cur = t;
  for (std::size_t i = 0; i < n && cur.tag() == SortTag::Arrow; ++i) {
    out.push_back(cur.domain());
    SimpleType next = cur.codomain();
    cur = next;
  }
  *codomain = cur;
  return out;
}

Term lambdas(const std::vector<SimpleType>& doms, Term body) {
  for (std::size_t i = doms.size(); i-- > 0;) body = Term::lam("y", doms[i], std::move(body));
  return body;
}

SimpleType arrows(const std::vector<SimpleType>& doms, SimpleType cod) {
  for (std::size_t i = doms.size(); i-- > 0;) cod = SimpleType::arrow(doms[i], std::move(cod));
  return cod;
}

class Unifier {
 public:
  explicit Unifier(BindingStore& s) : store_(s) {}

  void unify(const Term& a0, const Term& b0) {
    Term a = store_.head_normal(a0);
    Term b = store_.head_normal(b0);
    if (a.is(TermTag::Lam) || b.is(TermTag::Lam)) {
      const SimpleType& ty = a.is(TermTag::Lam) ? a.type() : b.type();
      Term e = store_.fresh_eigen("u", ty, kLocalLevel);
      unify(open(a, e), open(b, e));
      return;
    }
    const Term& ha = term_head(a);
    const Term& hb = term_head(b);
    if (ha.is(TermTag::Meta) && hb.is(TermTag::Meta) && ha.id() == hb.id()) {
      flex_same(ha, term_args(a), term_args(b));
      return;
    }
    if (ha.is(TermTag::Meta)) {
      if (!hb.is(TermTag::Meta) || spine_is_pattern(ha, term_args(a))) {
        flex(ha, term_args(a), b);
        return;
      }
      flex(hb, term_args(b), a);
      return;
    }
    if (hb.is(TermTag::Meta)) {
      flex(hb, term_args(b), a);
      return;
    }
    const auto& xa = term_args(a);
    const auto& xb = term_args(b);
    if (!same_rigid(ha, hb) || xa.size() != xb.size()) throw Abort{UnifyResult::Fail};
    for (std::size_t i = 0; i < xa.size(); ++i) unify(xa[i], xb[i]);
  }

 private:
  static Term open(const Term& t, const Term& e) {
    return t.is(TermTag::Lam) ? term_instantiate(t.body(), e) : Term::app(t, {e});
  }

  static bool same_rigid(const Term& a, const Term& b) {
    if (a.tag() != b.tag()) return false;
    if (a.is(TermTag::Const)) return a.name() == b.name();
    return a.id() == b.id();
  }

  // Distinct eigenvariables the meta cannot already depend on.
  bool spine_is_pattern(const Term& meta, const std::vector<Term>& args) const {
    std::vector<Term> seen;
    for (const auto& arg : args) {
      auto a = eta_contract_atom(store_.resolve(arg));
      if (!a || !a->is(TermTag::Eigen) || a->level() <= meta.level()) return false;
      for (const auto& s : seen)
        if (s.id() == a->id()) return false;
      seen.push_back(*a);
    }
    return true;
  }

  std::vector<Term> pattern_spine(const Term& meta, const std::vector<Term>& args) const {
    if (!spine_is_pattern(meta, args)) throw Abort{UnifyResult::NonPattern};
    std::vector<Term> out;
    for (const auto& arg : args) out.push_back(*eta_contract_atom(store_.resolve(arg)));
    return out;
  }

  void flex_same(const Term& f, const std::vector<Term>& xa, const std::vector<Term>& xb) {
    bool identical = xa.size() == xb.size();
    for (std::size_t i = 0; identical && i < xa.size(); ++i)
      identical = term_eq(store_.resolve(xa[i]), store_.resolve(xb[i]));
    if (identical) return;
    auto xs = pattern_spine(f, xa);
    auto ys = pattern_spine(f, xb);
    SimpleType cod;
    auto doms = domains(f.type(), xs.size(), &cod);
    std::vector<SimpleType> kept_types;
    std::vector<Term> kept;
    auto n = static_cast<std::uint32_t>(xs.size());
    for (std::uint32_t i = 0; i < n; ++i) {
      if (!same_atom(xs[i], ys[i])) continue;
      kept_types.push_back(doms[i]);
      kept.push_back(eta_expand(Term::bvar(n - 1 - i), doms[i]));
    }
    Term g = store_.fresh_meta(f.name(), arrows(kept_types, cod), f.level());
    store_.bind(f.id(), lambdas(doms, Term::app(g, std::move(kept))));
  }

  void flex(const Term& f, const std::vector<Term>& args, const Term& t) {
    auto xs = pattern_spine(f, args);
    SimpleType cod;
    auto doms = domains(f.type(), xs.size(), &cod);
    Term body = invert(t, 0, f, xs);
    store_.bind(f.id(), lambdas(doms, std::move(body)));
  }

  // Express `t` over the spine `xs` of `f`, pruning other metas as needed.
  Term invert(const Term& t0, std::uint32_t depth, const Term& f, const std::vector<Term>& xs) {
    Term t = store_.head_normal(t0);
    if (t.is(TermTag::Lam)) return Term::lam(t.name(), t.type(), invert(t.body(), depth + 1, f, xs));
    const Term& h = term_head(t);
    const auto& args = term_args(t);
    if (h.is(TermTag::Meta)) return invert_meta(h, args, depth, f, xs);
    Term head = invert_atom(h, depth, f, xs);
    std::vector<Term> out;
    out.reserve(args.size());
    for (const auto& a : args) out.push_back(invert(a, depth, f, xs));
    return Term::app(std::move(head), std::move(out));
  }

  Term invert_atom(const Term& h, std::uint32_t depth, const Term& f, const std::vector<Term>& xs) {
    auto n = static_cast<std::uint32_t>(xs.size());
    switch (h.tag()) {
      case TermTag::Const: return h;
      case TermTag::BVar:
        if (h.id() < depth) return h;
        throw Abort{UnifyResult::Fail};
      case TermTag::Eigen:
        for (std::uint32_t i = 0; i < n; ++i)
          if (xs[i].id() == h.id()) return Term::bvar(depth + n - 1 - i);
        if (h.level() <= f.level()) return h;
        throw Abort{UnifyResult::Fail};
      default: throw Abort{UnifyResult::Fail};
    }
  }

  Term invert_meta(const Term& g, const std::vector<Term>& args, std::uint32_t depth, const Term& f,
                   const std::vector<Term>& xs) {
    if (g.id() == f.id()) throw Abort{UnifyResult::Fail};
    std::vector<Term> ys;
    for (const auto& arg : args) {
      auto a = pattern_atom(store_.resolve(arg));
      bool ok = a && (a->is(TermTag::BVar) ? a->id() < depth : a->level() > g.level());
      for (const auto& y : ys) ok = ok && !same_atom(y, *a);
      if (!ok) throw Abort{UnifyResult::NonPattern};
      ys.push_back(*a);
    }
    auto m = static_cast<std::uint32_t>(ys.size());
    SimpleType cod;
    auto doms = domains(g.type(), m, &cod);
    std::vector<std::uint32_t> keep;
    for (std::uint32_t i = 0; i < m; ++i) {
      const Term& y = ys[i];
      bool visible = y.is(TermTag::BVar) || y.level() <= f.level() ||
                     std::any_of(xs.begin(), xs.end(), [&](const Term& x) { return x.id() == y.id(); });
      if (visible) keep.push_back(i);
    }
    // Raising: spine eigens of f that g may mention but f's level cannot see.
    std::vector<Term> raised;
    for (const auto& x : xs)
      if (x.level() > f.level() && x.level() <= g.level()) raised.push_back(x);
    Term head = g;
    if (keep.size() != m || g.level() > f.level()) {
      std::vector<SimpleType> kept_types;
      std::vector<Term> kept_vars;
      for (const auto& r : raised) {
        kept_types.push_back(r.type());
        kept_vars.push_back(eta_expand(r, r.type()));
      }
      for (auto i : keep) {
        kept_types.push_back(doms[i]);
        kept_vars.push_back(eta_expand(Term::bvar(m - 1 - i), doms[i]));
      }
      head = store_.fresh_meta(g.name(), arrows(kept_types, cod), std::min(g.level(), f.level()));
      store_.bind(g.id(), lambdas(doms, Term::app(head, std::move(kept_vars))));
    }
    std::vector<Term> out;
    for (const auto& r : raised) out.push_back(eta_expand(invert_atom(r, depth, f, xs), r.type()));
    for (auto i : keep) {
      Term atom = invert_atom(ys[i], depth, f, xs);
      out.push_back(eta_expand(atom, doms[i]));
    }
    return Term::app(std::move(head), std::move(out));
  }

  BindingStore& store_;
};

}  // namespace

UnifyResult pattern_unify(const Term& a, const Term& b, BindingStore& store) {
  std::size_t mark = store.mark();
  try {
    Unifier(store).unify(a, b);
    return UnifyResult::Ok;
  } catch (const Abort& e) {
    store.undo(mark);
    return e.result;
  }
}

}  // namespace lfhh
