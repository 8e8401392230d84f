#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lfhh/hhf_term.hpp"
#include "lfhh/lf_syntax.hpp"
#include "lfhh/lf_typecheck.hpp"

namespace lfhh {

/// Π ↦ arrow, object-level base type ↦ tm, `type` ↦ ty.
SimpleType erase_type(const Expr& classifier);

/// Sorts of every signature constant, for well_sorted.
std::map<std::string, SimpleType, std::less<>> constant_sorts(const Signature& sig);

/// LF meta-variable name ↦ the target meta standing for it.
using MetaMap = std::map<std::string, Term, std::less<>>;

/// Structural encoding of a canonical LF object or base type; λ annotations
/// are dropped. Meta-variables must be present in `metas`.
Term encode_term(const Expr& e, const MetaMap* metas = nullptr);

/// Naive reading of `A` applied to the subject `m`:
/// `∀x. ⟦B⟧x ⊃ ⟦A'⟧(m x)` down to `hastype m ⟨A⟩`.
Formula naive_formula(const Expr& type, const Term& subject, const MetaMap* metas = nullptr);
/// Program-side optimized reading: guards of rigid binders become ⊤.
Formula positive_formula(const Expr& type, const Term& subject, const MetaMap* metas = nullptr);
/// Goal-side optimized reading: every guard kept, hypotheses use the
/// program-side reading.
Formula negative_formula(const Expr& type, const Term& subject, const MetaMap* metas = nullptr);

/// Clause for one object-level declaration.
Formula translate_simple_decl(const Decl& decl);
Formula translate_optimized_decl(const Decl& decl);

/// One clause per object-level declaration, in signature order.
ClauseSet translate_simple(const Signature& sig);
ClauseSet translate_optimized(const Signature& sig);
ClauseSet translate(const Signature& sig, TranslationMode mode);

/// A query type turned into a goal about a fresh proof meta.
struct QueryGoal {
  Formula goal;
  Term proof;                       // meta for the sought object, id 0
  std::vector<std::string> names;   // LF meta names, query order
  std::vector<Term> metas;          // matching target metas, ids 1..n
  TranslationMode mode = TranslationMode::Naive;
  std::uint32_t next_id = 0;        // first id free for search variables
};

QueryGoal translate_query(const QueryType& q, TranslationMode mode);

}  // namespace lfhh
