#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lfhh/hhf_term.hpp"
#include "lfhh/hhf_translate.hpp"

namespace lfhh {

/// Meta-variable bindings with an undo trail, plus the id supply shared by
/// metas and eigenvariables of one search.
class BindingStore {
 public:
  explicit BindingStore(std::uint32_t next_id = 0) : next_(next_id) {}

  Term fresh_meta(std::string hint, SimpleType type, std::uint32_t level);
  Term fresh_eigen(std::string hint, SimpleType type, std::uint32_t level);
  std::uint32_t next_id() const { return next_; }

  const Term* binding(std::uint32_t id) const;
  void bind(std::uint32_t id, Term value);
  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t mark);

  /// Substitute bound metas at the head until the head is not bound.
  Term head_normal(const Term& t) const;
  /// Substitute every bound meta, β-normalizing as it goes.
  Term resolve(const Term& t) const;
  Formula resolve(const Formula& f) const;

 private:
  std::vector<Term> bindings_;
  std::vector<std::uint32_t> trail_;
  std::uint32_t next_;
};

enum class UnifyResult : std::uint8_t { Ok, Fail, NonPattern };

/// Higher-order pattern unification of two β-normal, η-long terms of the
/// same simple type. Bindings are committed to `store`; on any outcome
/// other than Ok the store is left as it was.
UnifyResult pattern_unify(const Term& a, const Term& b, BindingStore& store);

struct Limits {
  std::uint32_t depth = 512;          // backchain nodes on one branch
  std::uint64_t budget = 10'000'000;  // unification calls
  // Retry with depth 1, 2, ... up to `depth`; answers come from the first
  // bound that has any.
  bool iterative_deepening = false;
  bool trace = false;
};

struct Counters {
  std::uint64_t backchain_steps = 0;
  std::uint64_t unify_calls = 0;
  std::uint64_t top_steps = 0;
};

enum class SearchStatus : std::uint8_t {
  Exhausted,       // no further solutions exist
  Stopped,         // the consumer asked to stop
  DepthExceeded,   // no further solutions within the depth limit
  BudgetExceeded,  // ran out of unification calls
};

std::string_view status_name(SearchStatus s);

struct Solution {
  Term proof;                // resolved binding of the proof meta
  std::vector<Term> metas;   // resolved bindings, in QueryGoal::names order
  bool open = false;         // some binding still mentions a meta
  std::uint32_t depth = 0;   // deepest backchain node of the proof
  Counters counters;         // snapshot when the solution was found
  std::vector<std::string> trace;
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::Exhausted;
  Counters counters;
  std::size_t solutions = 0;
  std::size_t non_pattern = 0;  // branches cut by non-pattern problems
  bool depth_hit = false;
  std::uint32_t depth_used = 0;  // limit of the last iteration
};

/// Depth-first search in clause order with chronological backtracking.
/// `on_solution` returns true to ask for the next solution.
SearchOutcome solve(const ClauseSet& program, const QueryGoal& query, const Limits& limits,
                    const std::function<bool(const Solution&)>& on_solution);

std::optional<Solution> solve_first(const ClauseSet& program, const QueryGoal& query, const Limits& limits,
                                    SearchOutcome* outcome = nullptr);

struct EquivalenceReport {
  bool a_success = false;
  bool b_success = false;
  bool success_agrees = false;
  bool bindings_agree = false;  // first solutions equal up to α (when both succeed)
  std::uint32_t a_depth = 0;    // backchain depth of the first solution
  std::uint32_t b_depth = 0;
  SearchOutcome a, b;
};

EquivalenceReport check_depth_equivalence(const ClauseSet& program_a, const QueryGoal& goal_a,
                                          const ClauseSet& program_b, const QueryGoal& goal_b,
                                          const Limits& limits);

}  // namespace lfhh
