#pragma once

#include <map>
#include <string>
#include <vector>

#include "lfhh/hhf_prover.hpp"
#include "lfhh/lf_typecheck.hpp"

namespace lfhh {

/// What a reconstruction needs besides the answer: the canonical signature,
/// the program it was compiled to, and the limits for auxiliary searches.
struct SolveContext {
  const Signature& sig;
  const ClauseSet& program;
  Limits limits;
};

/// Decode a closed target term into a canonical LF object at `expected`,
/// restoring λ annotations from the expected type and from the declared
/// classifiers of heads. Throws LfError("decode_term", "not an encoding ...")
/// when the shapes cannot be aligned.
Expr decode_term(const Signature& sig, const Term& t, const Expr& expected);

struct Finalized {
  std::vector<Expr> meta_values;  // one per query meta, closed and canonical
  Expr closed_type;
  Term closed_proof;
  std::size_t residuals = 0;      // metas filled by auxiliary searches
};

/// Fill every meta left open by the search with the first inhabitant of its
/// type, then check each query meta binding and the instantiated type.
/// Errors: "uninhabited residual type", "ill-typed binding".
Finalized finalize_metavars(const SolveContext& ctx, const QueryType& q, const QueryGoal& goal,
                            const Solution& s);

enum class CertStatus : std::uint8_t { Certified, Rejected };

struct CertifiedAnswer {
  Expr lf_proof;
  Expr lf_type;
  std::vector<std::string> meta_names;
  std::vector<Expr> meta_values;
  Derivation kernel_derivation;
  Counters counters;
  CertStatus status = CertStatus::Rejected;
  std::string reason;  // set when rejected
  std::vector<std::string> trace;
};

/// Never throws; kernel and reconstruction errors become `rejected`.
CertifiedAnswer certify(const SolveContext& ctx, const QueryType& q, const QueryGoal& goal, const Solution& s);

/// Bindings and proof in `.lf` surface syntax, one per line, optionally
/// followed by the kernel derivation.
std::string format_answer(const CertifiedAnswer& a, bool with_derivation = false);

}  // namespace lfhh
