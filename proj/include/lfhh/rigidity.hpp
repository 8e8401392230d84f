#pragma once

#include <set>
#include <string>
#include <vector>

#include "lfhh/lf_syntax.hpp"

namespace lfhh {

/// Candidate variables (the Π-bound variables of the declaration under
/// analysis) and the locally bound variables crossed so far. Both hold names
/// of free `Const` nodes; the two sets are kept disjoint.
struct RigidCtx {
  std::set<std::string, std::less<>> gamma;
  std::set<std::string, std::less<>> delta;
};

/// Does `x` occur rigidly in the canonical object `m`?
///
/// Holds for `x y1..yk` with distinct `yi` from delta (k may be zero), for
/// `y M1..Mn` with `y` not a candidate when some `Mi` qualifies, and under
/// λ with delta extended by the bound variable. Loose de Bruijn heads are
/// treated as fixed constants.
bool rigid_in_object(const RigidCtx& ctx, const std::string& x, const Expr& m);

/// Does `x` occur rigidly in the canonical type `a`? Π-binders crossed on
/// the way to the base type join the candidate set; the base type qualifies
/// when one of its family's arguments does.
bool rigid_in_type(const std::set<std::string, std::less<>>& candidates, const std::string& x, const Expr& a);

/// Per outer binder of `Π x1:B1..xn:Bn. A`: whether `xi` occurs rigidly in
/// `Π x(i+1)..xn. A` with candidates `x1..xi`.
std::vector<bool> rigid_binders(const Expr& classifier);

struct GuardEntry {
  std::string binder;  // source name, or `argN` for anonymous binders
  bool rigid = false;
};

struct GuardPlan {
  std::string decl_name;
  std::vector<GuardEntry> binders;
};

GuardPlan guard_plan(const Decl& decl);
/// Plans for every object-level declaration, in signature order.
std::vector<GuardPlan> analyze_signature(const Signature& sig);
/// `name: X=rigid, arg2=guarded`
std::string format_guard_plan(const GuardPlan& plan);

}  // namespace lfhh
