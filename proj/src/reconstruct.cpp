#include "lfhh/reconstruct.hpp"

#include "lfhh/lf_scope.hpp"

namespace lfhh {

namespace {

// Thrown by the decoder when it meets an open meta: its id and its LF type
// raised over the parameters it is applied to.
struct Residual {
  std::uint32_t id;
  Expr type;
  std::string hint;
};

[[noreturn]] void not_an_encoding(const std::string& msg) { throw LfError("decode_term", "not an encoding: " + msg); }

class Decoder {
 public:
  explicit Decoder(const Signature& sig, bool report_residuals)
      : scope_(sig, names_), st_{NormalizeOptions{}.step_budget, nullptr}, residuals_(report_residuals) {}

  Expr decode(const Term& t, const Expr& expected) {
    if (expected.is(ExprTag::Pi)) {
      ScopedParam p(scope_, expected.name(), expected.annot());
      Term c = Term::constant(p.name());
      Term body = t.is(TermTag::Lam) ? term_instantiate(t.body(), c) : Term::app(t, {c});
      Expr b = decode(body, instantiate(expected.body(), p.var()));
      return lam_over(p.name(), expected.annot(), b);
    }
    if (t.is(TermTag::Lam)) not_an_encoding("abstraction " + print_term(t) + " at base type " + pretty_print(expected));
    const Term& h = term_head(t);
    const auto& args = term_args(t);
    if (h.is(TermTag::Meta)) residual(h, args, expected);
    if (!h.is(TermTag::Const)) not_an_encoding("unexpected head in " + print_term(t));
    auto entry = scope_.lookup(h.name());
    if (!entry) not_an_encoding("unknown constant " + h.name());
    if (entry->sort == DeclSort::Kind) not_an_encoding("type family " + h.name() + " used as an object");
    Expr cur = entry->classifier;
    std::vector<Expr> out;
    out.reserve(args.size());
    for (const auto& a : args) {
      if (!cur.is(ExprTag::Pi)) not_an_encoding(h.name() + " applied to too many arguments");
      Expr v = decode(a, cur.annot());
      if (uses_bvar(cur.body())) {
        cur = normalize_in(scope_, instantiate(cur.body(), v), Expr::type(), st_);
      } else {
        cur = instantiate(cur.body(), v);
      }
      out.push_back(std::move(v));
    }
    if (cur.is(ExprTag::Pi)) not_an_encoding(h.name() + " is not fully applied");
    return lfhh::apply(Expr::constant(h.name()), out);
  }

 private:
  [[noreturn]] void residual(const Term& meta, const std::vector<Term>& args, const Expr& expected) {
    if (!residuals_) not_an_encoding("open meta-variable " + print_term(meta));
    std::vector<std::string> params;
    for (const auto& a : args) {
      auto atom = eta_contract_atom(a);
      if (!atom || !atom->is(TermTag::Const) || !scope_.lookup(atom->name()) || !scope_.lookup(atom->name())->local)
        throw LfError("finalize_metavars", "residual meta-variable applied to a non-parameter");
      params.push_back(atom->name());
    }
    Expr raised = expected;
    for (std::size_t i = params.size(); i-- > 0;) raised = pi_over(params[i], scope_.lookup(params[i])->classifier, raised);
    for (const auto& [name, type] : scope_.locals())
      if (occurs_free(raised, name))
        throw LfError("finalize_metavars", "residual meta-variable type depends on a bound variable");
    throw Residual{meta.id(), raised, meta.name()};
  }

  NameSupply names_;
  Scope scope_;
  NormalizeState st_;
  bool residuals_;
};

Finalized finalize_impl(const SolveContext& ctx, const QueryType& q, const Solution& s, int nesting) {
  if (nesting > 16) throw LfError("finalize_metavars", "residual search nested too deeply");
  BindingStore fill;
  Finalized out;
  Expr proof;
  for (;;) {
    try {
      out.meta_values.clear();
      Subst values;
      Decoder dec(ctx.sig, true);
      for (std::size_t i = 0; i < q.metas.size(); ++i) {
        Expr ty = normalize(ctx.sig, substitute_metas(q.meta_types[i], values), Expr::type());
        Expr v = dec.decode(fill.resolve(s.metas[i]), ty);
        values.emplace(q.metas[i], v);
        out.meta_values.push_back(v);
      }
      out.closed_type = normalize(ctx.sig, substitute_metas(q.type, values), Expr::type());
      out.closed_proof = fill.resolve(s.proof);
      proof = dec.decode(out.closed_proof, out.closed_type);
      break;
    } catch (const Residual& r) {
      ++out.residuals;
      QueryType aux;
      aux.type = r.type;
      QueryGoal goal = translate_query(aux, ctx.program.mode);
      auto sol = solve_first(ctx.program, goal, ctx.limits);
      if (!sol) throw LfError("finalize_metavars", "uninhabited residual type " + pretty_print(r.type));
      Finalized sub = finalize_impl(ctx, aux, *sol, nesting + 1);
      fill.bind(r.id, sub.closed_proof);
    }
  }
  for (std::size_t i = 0; i < q.metas.size(); ++i) {
    try {
      Subst earlier;
      for (std::size_t j = 0; j < i; ++j) earlier.emplace(q.metas[j], out.meta_values[j]);
      Expr ty = normalize(ctx.sig, substitute_metas(q.meta_types[i], earlier), Expr::type());
      check_object(ctx.sig, out.meta_values[i], ty);
    } catch (const LfError& e) {
      throw LfError("finalize_metavars", "ill-typed binding for " + q.metas[i] + ": " + e.what());
    }
  }
  check_type(ctx.sig, out.closed_type);
  out.closed_proof = encode_term(proof);
  return out;
}

}  // namespace

Expr decode_term(const Signature& sig, const Term& t, const Expr& expected) {
  return Decoder(sig, false).decode(t, expected);
}

Finalized finalize_metavars(const SolveContext& ctx, const QueryType& q, const QueryGoal& goal, const Solution& s) {
  if (goal.names != q.metas) throw LfError("finalize_metavars", "goal does not match the query");
  return finalize_impl(ctx, q, s, 0);
}

CertifiedAnswer certify(const SolveContext& ctx, const QueryType& q, const QueryGoal& goal, const Solution& s) {
  CertifiedAnswer a;
  a.meta_names = q.metas;
  a.counters = s.counters;
  a.trace = s.trace;
  try {
    Finalized f = finalize_metavars(ctx, q, goal, s);
    a.meta_values = f.meta_values;
    a.lf_type = f.closed_type;
    a.lf_proof = decode_term(ctx.sig, f.closed_proof, f.closed_type);
    check_type(ctx.sig, a.lf_type);
    a.kernel_derivation = check_object(ctx.sig, a.lf_proof, a.lf_type);
    a.status = CertStatus::Certified;
  } catch (const LfError& e) {
    a.status = CertStatus::Rejected;
    a.reason = e.what();
  }
  return a;
}

std::string format_answer(const CertifiedAnswer& a, bool with_derivation) {
  std::string out;
  if (a.status == CertStatus::Rejected) return "rejected: " + a.reason + "\n";
  for (std::size_t i = 0; i < a.meta_names.size() && i < a.meta_values.size(); ++i)
    out += a.meta_names[i] + " = " + pretty_print(a.meta_values[i]) + ".\n";
  out += "proof : " + pretty_print(a.lf_type) + "\n      = " + pretty_print(a.lf_proof) + ".\n";
  if (with_derivation) out += "% derivation " + derivation_trace(a.kernel_derivation) + "\n";
  return out;
}

}  // namespace lfhh
