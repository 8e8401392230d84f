#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lfhh/hhf_prover.hpp"
#include "lfhh/hhf_translate.hpp"
#include "lfhh/lf_typecheck.hpp"
#include "lfhh/reconstruct.hpp"
#include "lfhh/rigidity.hpp"

namespace lfhh {

/// Parse, canonicalize and check a signature. Throws LfError.
Signature load_signature(std::string_view text);

/// A checked signature compiled to clauses in one mode.
struct Program {
  Signature sig;
  ClauseSet clauses;
  TranslationMode mode() const { return clauses.mode; }
};

Program compile(Signature sig, TranslationMode mode);

/// Query text is an LF type, optionally written `hastype M A` to name the
/// proof. Throws LfError.
struct QueryText {
  std::string proof_name = "proof";
  QueryType query;
};
QueryText parse_solve_query(const Signature& sig, std::string_view text);

struct QueryRun {
  QueryType query;
  QueryGoal goal;
  SearchOutcome outcome;
  std::vector<Solution> solutions;
  std::vector<CertifiedAnswer> answers;  // one per solution

  bool all_certified() const;
};

/// Search for up to `max_answers` solutions (0 = all) and certify each.
QueryRun run_query(const Program& p, const QueryType& q, const Limits& limits, std::size_t max_answers = 1);

struct ModeComparison {
  QueryRun naive, optimized;
  bool success_agrees = false;
  bool answers_agree = false;  // first certified answers α-equal
  bool both_certified = false;
  bool depth_ok = false;       // optimized first proof no deeper than naive
};

ModeComparison compare_modes(const Program& naive, const Program& optimized, const QueryType& q,
                             const Limits& limits);

/// The natural number and list signature with `append`.
std::string_view append_signature_text();

/// `append L1 L2 L3` with |L1| = |L2| = n; L3 is the concatenation, or a
/// meta when `search` is set. A zero seed uses `z` for the first list and
/// `s z` for the second; any other seed draws small numerals.
std::string append_query_text(std::size_t n, std::uint64_t seed, bool search = false);

struct BenchRow {
  std::size_t n = 0;
  TranslationMode mode = TranslationMode::Naive;
  std::uint64_t backchain_steps = 0;
  std::uint64_t unify_calls = 0;
  std::uint64_t top_steps = 0;
  std::uint64_t wall_ns = 0;
  bool certified = false;
};

std::vector<BenchRow> bench_append(const std::vector<std::size_t>& sizes, std::uint64_t seed, bool search,
                                   const Limits& limits);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace lfhh
