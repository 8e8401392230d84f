#include "lfhh/rigidity.hpp"

#include <algorithm>

namespace lfhh {

namespace {

bool is_delta_var(const RigidCtx& ctx, const Expr& arg) {
  auto atom = eta_atom(arg);
  return atom && atom->is(ExprTag::Const) && ctx.delta.count(atom->name());
}

bool distinct_delta_vars(const RigidCtx& ctx, const std::vector<Expr>& args) {
  std::set<std::string, std::less<>> seen;
  for (const auto& a : args) {
    if (!is_delta_var(ctx, a)) return false;
    if (!seen.insert(eta_atom(a)->name()).second) return false;
  }
  return true;
}

bool rigid_object(RigidCtx& ctx, const std::string& x, const Expr& m, NameSupply& names) {
  if (m.is(ExprTag::Lam)) {
    std::string y = names.fresh(m.name());
    ctx.delta.insert(y);
    bool r = rigid_object(ctx, x, instantiate(m.body(), Expr::constant(y)), names);
    ctx.delta.erase(y);
    return r;
  }
  Spine sp = spine_of(m);
  const Expr& h = sp.head;
  if (h.is(ExprTag::Const) && h.name() == x && distinct_delta_vars(ctx, sp.args)) return true;
  bool head_fixed = (h.is(ExprTag::Const) && !ctx.gamma.count(h.name())) || h.is(ExprTag::BVar);
  if (!head_fixed) return false;
  return std::any_of(sp.args.begin(), sp.args.end(),
                     [&](const Expr& a) { return rigid_object(ctx, x, a, names); });
}

bool rigid_type(std::set<std::string, std::less<>>& cands, const std::string& x, const Expr& a, NameSupply& names) {
  if (a.is(ExprTag::Pi)) {
    std::string y = names.fresh(a.name());
    cands.insert(y);
    bool r = rigid_type(cands, x, instantiate(a.body(), Expr::constant(y)), names);
    cands.erase(y);
    return r;
  }
  Spine sp = spine_of(a);
  RigidCtx ctx{cands, {}};
  return std::any_of(sp.args.begin(), sp.args.end(),
                     [&](const Expr& m) { return rigid_object(ctx, x, m, names); });
}

}  // namespace

bool rigid_in_object(const RigidCtx& ctx, const std::string& x, const Expr& m) {
  RigidCtx local = ctx;
  NameSupply names = NameSupply::avoiding(m);
  return rigid_object(local, x, m, names);
}

bool rigid_in_type(const std::set<std::string, std::less<>>& candidates, const std::string& x, const Expr& a) {
  auto cands = candidates;
  NameSupply names = NameSupply::avoiding(a);
  return rigid_type(cands, x, a, names);
}

std::vector<bool> rigid_binders(const Expr& classifier) {
  NameSupply names = NameSupply::avoiding(classifier);
  std::set<std::string, std::less<>> cands;
  std::vector<bool> out;
  Expr cur = classifier;
  while (cur.is(ExprTag::Pi)) {
    std::string x = names.fresh(cur.name());
    cands.insert(x);
    cur = instantiate(cur.body(), Expr::constant(x));
    auto probe = cands;
    out.push_back(rigid_type(probe, x, cur, names));
  }
  return out;
}

GuardPlan guard_plan(const Decl& decl) {
  GuardPlan plan{decl.name, {}};
  std::vector<bool> flags = rigid_binders(decl.classifier);
  Expr cur = decl.classifier;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    std::string name = cur.name();
    if (name.empty() || name == "_") name = "arg" + std::to_string(i + 1);
    plan.binders.push_back({name, flags[i]});
    cur = cur.body();
  }
  return plan;
}

std::vector<GuardPlan> analyze_signature(const Signature& sig) {
  std::vector<GuardPlan> out;
  for (const auto& d : sig.entries())
    if (d.sort == DeclSort::Type) out.push_back(guard_plan(d));
  return out;
}

std::string format_guard_plan(const GuardPlan& plan) {
  std::string out = plan.decl_name + ":";
  for (std::size_t i = 0; i < plan.binders.size(); ++i) {
    out += i ? ", " : " ";
    out += plan.binders[i].binder + (plan.binders[i].rigid ? "=rigid" : "=guarded");
  }
  return out;
}

}  // namespace lfhh
