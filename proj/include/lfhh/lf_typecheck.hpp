#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lfhh/lf_syntax.hpp"

namespace lfhh {

/// Rules of the canonical system. Backchaining replaces the application and
/// variable rules, for objects and for type families alike.
enum class Rule : std::uint8_t {
  NullCtx,
  KindCtx,
  TypeCtx,
  TypeKind,
  PiKind,
  PiFam,
  AbsFam,
  AbsObj,
  BackchainObj,
  BackchainFam,
};

std::string_view rule_name(Rule r);

struct Judgment {
  std::uint64_t context = 0;  // fingerprint of the visible context
  Expr subject;               // unset for `Γ ctx`
  Expr classifier;            // unset for `K kind` and `Γ ctx`
};

struct Derivation {
  Rule rule = Rule::NullCtx;
  Judgment conclusion;
  /// Backchain head, or the declared name for KindCtx/TypeCtx.
  std::string head;
  /// Backchain instantiation N1..Nn, one per Π-binder of the head.
  std::vector<Expr> instantiation;
  std::vector<Derivation> premises;
  std::size_t size = 1;
};

std::size_t derivation_size(const Derivation& d);
/// `(rule "conclusion" (premises...))`
std::string derivation_trace(const Derivation& d);

// The kernel never accepts meta-variables. All entry points except
// check_context expect a canonical signature; subjects and classifiers are
// normalized once on entry.

Derivation check_context(const Signature& sig);
Derivation check_kind(const Signature& sig, const Expr& kind);
Derivation check_type(const Signature& sig, const Expr& type);
Derivation check_family(const Signature& sig, const Expr& family, const Expr& kind);
Derivation check_object(const Signature& sig, const Expr& object, const Expr& type);

/// A query type in canonical form together with its meta-variables and
/// their classifiers, ordered so that each classifier mentions only earlier
/// metas.
struct QueryType {
  Expr type;
  std::vector<std::string> metas;
  std::vector<Expr> meta_types;

  const Expr* meta_type(std::string_view name) const;
};

/// Normalize a parsed query, infer meta classifiers from their occurrences
/// and check the result is a valid type with metas read as fresh parameters.
QueryType elaborate_query(const Signature& sig, const ParsedQuery& q);
QueryType elaborate_query(const Signature& sig, std::string_view text);

}  // namespace lfhh
