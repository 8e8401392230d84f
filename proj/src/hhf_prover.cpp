#include "lfhh/hhf_prover.hpp"

#include <algorithm>
#include <memory>

namespace lfhh {

std::string_view status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::Exhausted: return "exhausted";
    case SearchStatus::Stopped: return "stopped";
    case SearchStatus::DepthExceeded: return "depth exceeded";
    case SearchStatus::BudgetExceeded: return "budget exceeded";
  }
  return "?";
}

namespace {

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;

// Clauses assumed by implication goals, newest first.
struct EnvNode {
  Formula clause;
  Env next;
  std::size_t size;
};

struct Frame {
  Formula goal;
  Env env;
  std::uint32_t universe = 0;
  std::uint32_t depth = 0;  // backchain nodes above this goal
};

struct GoalNode;
using Goals = std::shared_ptr<const GoalNode>;

struct GoalNode {
  Frame frame;
  Goals next;
};

Goals push(Frame f, Goals rest) { return std::make_shared<const GoalNode>(GoalNode{std::move(f), std::move(rest)}); }

struct ChoicePoint {
  Frame frame;
  Goals rest;
  std::size_t next_candidate;
  std::size_t trail_mark;
  std::size_t trace_size;
  std::uint32_t branch_depth;
};

// Head of the classifier, used to skip clauses about other families.
const Term* classifier_head(const Formula& clause) {
  const Formula* f = &clause;
  for (;;) {
    switch (f->tag()) {
      case FormulaTag::Forall: f = &f->body(); break;
      case FormulaTag::Implies: f = &f->rhs(); break;
      case FormulaTag::Atom: return &term_head(f->classifier());
      case FormulaTag::Top: return nullptr;
    }
  }
}

class Machine {
 public:
  Machine(const ClauseSet& program, const QueryGoal& query, const Limits& limits, std::uint32_t depth_limit,
          const std::function<bool(const Solution&)>& on_solution)
      : program_(program),
        query_(query),
        limits_(limits),
        depth_limit_(depth_limit),
        on_solution_(on_solution),
        store_(query.next_id) {
    for (const auto& c : program.clauses) program_heads_.push_back(classifier_head(c.formula));
  }

  SearchOutcome run(Counters& counters) {
    counters_ = &counters;
    Goals goals = push(Frame{query_.goal, nullptr, 0, 0}, nullptr);
    for (;;) {
      if (budget_out_) return finish(SearchStatus::BudgetExceeded);
      if (!goals) {
        if (!report()) return finish(SearchStatus::Stopped);
        if (!backtrack(goals)) return finish(exhausted_status());
        continue;
      }
      Frame frame = goals->frame;
      Goals rest = goals->next;
      switch (frame.goal.tag()) {
        case FormulaTag::Top:
          ++counters_->top_steps;
          if (limits_.trace) trace_.push_back("top");
          goals = rest;
          break;
        case FormulaTag::Implies: {
          Formula hyp = store_.resolve(frame.goal.lhs());
          if (limits_.trace) trace_.push_back("imp+ " + print_formula(hyp));
          std::size_t size = frame.env ? frame.env->size + 1 : 1;
          Env env = std::make_shared<const EnvNode>(EnvNode{hyp, frame.env, size});
          goals = push(Frame{frame.goal.rhs(), env, frame.universe, frame.depth}, rest);
          break;
        }
        case FormulaTag::Forall: {
          Term e = store_.fresh_eigen(frame.goal.hint(), frame.goal.type(), frame.universe + 1);
          if (limits_.trace) trace_.push_back("all " + print_term(e));
          goals = push(Frame{formula_instantiate(frame.goal.body(), e), frame.env, frame.universe + 1, frame.depth},
                       rest);
          break;
        }
        case FormulaTag::Atom:
          if (!backchain(frame, rest, 0, goals) && !backtrack(goals)) return finish(exhausted_status());
          break;
      }
    }
  }

 private:
  std::size_t candidate_count(const Frame& f) const {
    return (f.env ? f.env->size : 0) + program_.clauses.size();
  }

  // Candidate k: assumptions newest first, then the program in order.
  std::pair<const Formula*, std::string_view> candidate(const Frame& f, std::size_t k, const Term** head) const {
    std::size_t dyn = f.env ? f.env->size : 0;
    if (k < dyn) {
      const EnvNode* n = f.env.get();
      for (std::size_t i = 0; i < k; ++i) n = n->next.get();
      *head = classifier_head(n->clause);
      return {&n->clause, "hyp"};
    }
    const Clause& c = program_.clauses[k - dyn];
    *head = program_heads_[k - dyn];
    return {&c.formula, c.origin};
  }

  bool charge() {
    if (counters_->unify_calls >= limits_.budget) {
      budget_out_ = true;
      return false;
    }
    ++counters_->unify_calls;
    return true;
  }

  bool unify(const Term& a, const Term& b) {
    if (!charge()) return false;
    UnifyResult r = pattern_unify(a, b, store_);
    if (r == UnifyResult::NonPattern) ++non_pattern_;
    return r == UnifyResult::Ok;
  }

  // Try candidates from `start`; on success replace `goals` and leave a
  // choicepoint for the remaining ones.
  bool backchain(const Frame& frame, const Goals& rest, std::size_t start, Goals& goals) {
    if (frame.depth + 1 > depth_limit_) {
      depth_hit_ = true;
      return false;
    }
    Term goal_cls = store_.head_normal(frame.goal.classifier());
    const Term& goal_head = term_head(goal_cls);
    std::size_t count = candidate_count(frame);
    for (std::size_t k = start; k < count && !budget_out_; ++k) {
      const Term* head = nullptr;
      auto [clause, origin] = candidate(frame, k, &head);
      if (head && head->is(TermTag::Const) && goal_head.is(TermTag::Const) && head->name() != goal_head.name())
        continue;
      std::size_t mark = store_.mark();
      std::vector<Term> inst;
      std::vector<Formula> guards;
      Formula cur = *clause;
      while (!cur.is(FormulaTag::Atom)) {
        if (cur.is(FormulaTag::Forall)) {
          Term m = store_.fresh_meta(cur.hint(), cur.type(), frame.universe);
          inst.push_back(m);
          cur = formula_instantiate(cur.body(), m);
        } else if (cur.is(FormulaTag::Implies)) {
          guards.push_back(cur.lhs());
          cur = cur.rhs();
        } else {
          break;
        }
      }
      if (!cur.is(FormulaTag::Atom)) continue;
      if (!unify(cur.subject(), frame.goal.subject()) || !unify(cur.classifier(), frame.goal.classifier())) {
        store_.undo(mark);
        continue;
      }
      choices_.push_back(ChoicePoint{frame, rest, k + 1, mark, trace_.size(), branch_depth_});
      ++counters_->backchain_steps;
      branch_depth_ = std::max(branch_depth_, frame.depth + 1);
      if (limits_.trace) {
        std::string line = "bc " + std::string(origin);
        for (const auto& m : inst) line += " " + print_term_arg(store_.resolve(m));
        trace_.push_back(std::move(line));
      }
      Goals next = rest;
      for (std::size_t i = guards.size(); i-- > 0;)
        next = push(Frame{guards[i], frame.env, frame.universe, frame.depth + 1}, next);
      goals = next;
      return true;
    }
    return false;
  }

  static std::string print_term_arg(const Term& t) {
    std::string s = print_term(t);
    return t.is(TermTag::App) || t.is(TermTag::Lam) ? "(" + s + ")" : s;
  }

  bool backtrack(Goals& goals) {
    while (!choices_.empty() && !budget_out_) {
      ChoicePoint cp = std::move(choices_.back());
      choices_.pop_back();
      store_.undo(cp.trail_mark);
      trace_.resize(cp.trace_size);
      branch_depth_ = cp.branch_depth;
      if (backchain(cp.frame, cp.rest, cp.next_candidate, goals)) return true;
    }
    return false;
  }

  bool report() {
    ++solutions_;
    Solution s;
    s.proof = store_.resolve(query_.proof);
    s.open = term_has_meta(s.proof);
    for (const auto& m : query_.metas) {
      s.metas.push_back(store_.resolve(m));
      s.open = s.open || term_has_meta(s.metas.back());
    }
    s.depth = branch_depth_;
    s.counters = *counters_;
    s.trace = trace_;
    return on_solution_(s);
  }

  SearchStatus exhausted_status() const {
    if (budget_out_) return SearchStatus::BudgetExceeded;
    return depth_hit_ ? SearchStatus::DepthExceeded : SearchStatus::Exhausted;
  }

  SearchOutcome finish(SearchStatus st) {
    SearchOutcome out;
    out.status = st;
    out.counters = *counters_;
    out.solutions = solutions_;
    out.non_pattern = non_pattern_;
    out.depth_hit = depth_hit_;
    out.depth_used = depth_limit_;
    return out;
  }

  const ClauseSet& program_;
  const QueryGoal& query_;
  const Limits& limits_;
  std::uint32_t depth_limit_;
  const std::function<bool(const Solution&)>& on_solution_;
  BindingStore store_;
  std::vector<const Term*> program_heads_;
  std::vector<ChoicePoint> choices_;
  std::vector<std::string> trace_;
  Counters* counters_ = nullptr;
  std::uint32_t branch_depth_ = 0;
  std::size_t solutions_ = 0;
  std::size_t non_pattern_ = 0;
  bool depth_hit_ = false;
  bool budget_out_ = false;
};

}  // namespace

SearchOutcome solve(const ClauseSet& program, const QueryGoal& query, const Limits& limits,
                    const std::function<bool(const Solution&)>& on_solution) {
  Counters counters;
  if (!limits.iterative_deepening) return Machine(program, query, limits, limits.depth, on_solution).run(counters);
  SearchOutcome out;
  std::size_t non_pattern = 0;
  for (std::uint32_t d = 1;; ++d) {
    out = Machine(program, query, limits, d, on_solution).run(counters);
    non_pattern += out.non_pattern;
    out.non_pattern = non_pattern;
    bool done = out.solutions > 0 || out.status != SearchStatus::DepthExceeded || d >= limits.depth;
    if (done) return out;
  }
}

std::optional<Solution> solve_first(const ClauseSet& program, const QueryGoal& query, const Limits& limits,
                                    SearchOutcome* outcome) {
  std::optional<Solution> first;
  SearchOutcome out = solve(program, query, limits, [&](const Solution& s) {
    first = s;
    return false;
  });
  if (outcome) *outcome = out;
  return first;
}

EquivalenceReport check_depth_equivalence(const ClauseSet& program_a, const QueryGoal& goal_a,
                                          const ClauseSet& program_b, const QueryGoal& goal_b,
                                          const Limits& limits) {
  EquivalenceReport r;
  auto sa = solve_first(program_a, goal_a, limits, &r.a);
  auto sb = solve_first(program_b, goal_b, limits, &r.b);
  r.a_success = sa.has_value();
  r.b_success = sb.has_value();
  r.success_agrees = r.a_success == r.b_success;
  if (sa) r.a_depth = sa->depth;
  if (sb) r.b_depth = sb->depth;
  if (sa && sb) {
    r.bindings_agree = term_eq(sa->proof, sb->proof) && sa->metas.size() == sb->metas.size();
    for (std::size_t i = 0; r.bindings_agree && i < sa->metas.size(); ++i)
      r.bindings_agree = term_eq(sa->metas[i], sb->metas[i]);
  }
  return r;
}

}  // namespace lfhh
