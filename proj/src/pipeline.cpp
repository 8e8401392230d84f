#include "lfhh/pipeline.hpp"

#include <cctype>
#include <chrono>
#include <random>
#include <sstream>

namespace lfhh {

Signature load_signature(std::string_view text) {
  Signature canonical = canonicalize(parse_signature(text));
  check_context(canonical);
  return canonical;
}

Program compile(Signature sig, TranslationMode mode) {
  Program p{std::move(sig), {}};
  p.clauses = translate(p.sig, mode);
  return p;
}

QueryText parse_solve_query(const Signature& sig, std::string_view text) {
  QueryText out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  constexpr std::string_view kw = "hastype";
  if (text.substr(i, kw.size()) == kw && i + kw.size() < text.size() &&
      std::isspace(static_cast<unsigned char>(text[i + kw.size()]))) {
    i += kw.size();
    skip();
    std::size_t start = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
    if (start == i) throw LfError("parse", "expected a proof name after hastype");
    out.proof_name = std::string(text.substr(start, i - start));
    if (sig.find(out.proof_name)) throw LfError("parse", "proof name " + out.proof_name + " is a declared constant");
    text = text.substr(i);
  }
  out.query = elaborate_query(sig, text);
  for (const auto& m : out.query.metas)
    if (m == out.proof_name) throw LfError("parse", "proof name " + m + " also occurs in the type");
  return out;
}

bool QueryRun::all_certified() const {
  for (const auto& a : answers)
    if (a.status != CertStatus::Certified) return false;
  return true;
}

QueryRun run_query(const Program& p, const QueryType& q, const Limits& limits, std::size_t max_answers) {
  QueryRun run;
  run.query = q;
  run.goal = translate_query(q, p.mode());
  run.outcome = solve(p.clauses, run.goal, limits, [&](const Solution& s) {
    run.solutions.push_back(s);
    return max_answers == 0 || run.solutions.size() < max_answers;
  });
  SolveContext ctx{p.sig, p.clauses, limits};
  for (const auto& s : run.solutions) run.answers.push_back(certify(ctx, q, run.goal, s));
  return run;
}

ModeComparison compare_modes(const Program& naive, const Program& optimized, const QueryType& q,
                             const Limits& limits) {
  ModeComparison c;
  c.naive = run_query(naive, q, limits, 1);
  c.optimized = run_query(optimized, q, limits, 1);
  bool ns = !c.naive.answers.empty(), os = !c.optimized.answers.empty();
  c.success_agrees = ns == os;
  c.both_certified = c.naive.all_certified() && c.optimized.all_certified();
  c.answers_agree = c.success_agrees;
  if (ns && os) {
    const auto& a = c.naive.answers.front();
    const auto& b = c.optimized.answers.front();
    c.answers_agree = a.status == CertStatus::Certified && b.status == CertStatus::Certified &&
                      alpha_eq(a.lf_proof, b.lf_proof) && alpha_eq(a.lf_type, b.lf_type);
    c.depth_ok = c.optimized.solutions.front().depth <= c.naive.solutions.front().depth;
  } else {
    c.depth_ok = !ns || os;
  }
  return c;
}

std::string_view append_signature_text() {
  return "nat : type.\n"
         "z : nat.\n"
         "s : nat -> nat.\n"
         "list : type.\n"
         "nil : list.\n"
         "cons : nat -> list -> list.\n"
         "append : list -> list -> list -> type.\n"
         "appNil : {K:list} append nil K K.\n"
         "appCons : {X:nat} {L:list} {K:list} {M:list}\n"
         "          append L K M -> append (cons X L) K (cons X M).\n";
}

namespace {

std::string numeral(std::size_t k) {
  std::string s = "z";
  for (std::size_t i = 0; i < k; ++i) s = "(s " + s + ")";
  return s;
}

std::string list_text(const std::vector<std::string>& elems) {
  std::string s = "nil";
  for (std::size_t i = elems.size(); i-- > 0;) s = "(cons " + elems[i] + " " + s + ")";
  return s;
}

}  // namespace

std::string append_query_text(std::size_t n, std::uint64_t seed, bool search) {
  std::vector<std::string> a(n, "z"), b(n, "(s z)");
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, 3);
    for (auto& e : a) e = numeral(pick(rng));
    for (auto& e : b) e = numeral(pick(rng));
  }
  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  return "append " + list_text(a) + " " + list_text(b) + " " + (search ? std::string("Out") : list_text(ab));
}

std::vector<BenchRow> bench_append(const std::vector<std::size_t>& sizes, std::uint64_t seed, bool search,
                                   const Limits& limits) {
  Signature sig = load_signature(append_signature_text());
  Program naive = compile(sig, TranslationMode::Naive);
  Program optimized = compile(sig, TranslationMode::Optimized);
  std::vector<BenchRow> rows;
  for (std::size_t n : sizes) {
    QueryType q = elaborate_query(sig, append_query_text(n, seed, search));
    for (const Program* p : {&naive, &optimized}) {
      auto start = std::chrono::steady_clock::now();
      QueryRun run = run_query(*p, q, limits, 1);
      auto stop = std::chrono::steady_clock::now();
      BenchRow row;
      row.n = n;
      row.mode = p->mode();
      row.backchain_steps = run.outcome.counters.backchain_steps;
      row.unify_calls = run.outcome.counters.unify_calls;
      row.top_steps = run.outcome.counters.top_steps;
      row.wall_ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
      row.certified = !run.answers.empty() && run.all_certified();
      rows.push_back(row);
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "n,mode,backchain_steps,unify_calls,wall_ns\n";
  for (const auto& r : rows)
    out << r.n << ',' << mode_name(r.mode) << ',' << r.backchain_steps << ',' << r.unify_calls << ',' << r.wall_ns
        << '\n';
  return out.str();
}

}  // namespace lfhh
