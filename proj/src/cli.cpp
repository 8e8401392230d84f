#include "lfhh/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "lfhh/pipeline.hpp"

namespace lfhh {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Options {
  std::string file;
  std::string query;
  std::string mode = "optimized";
  std::string format = "text";
  std::uint32_t depth = 512;
  std::uint64_t budget = 10'000'000;
  std::uint64_t seed = 0;
  std::vector<std::size_t> sizes{8, 16, 32, 64};
  bool trace = false;
  bool all = false;
  bool search = false;
  bool deepening = false;
};

Limits limits_of(const Options& o) {
  Limits l;
  l.depth = o.depth;
  l.budget = o.budget;
  l.trace = o.trace;
  l.iterative_deepening = o.deepening;
  return l;
}

TranslationMode mode_of(const std::string& m) {
  return m == "naive" ? TranslationMode::Naive : TranslationMode::Optimized;
}

int cmd_check(const Options& o, std::ostream& out) {
  Signature sig = load_signature(read_file(o.file));
  out << "ok (" << sig.size() << " declarations)\n";
  return kExitOk;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  Signature sig = load_signature(read_file(o.file));
  std::vector<std::string> guarded;
  for (const auto& plan : analyze_signature(sig)) {
    out << format_guard_plan(plan) << "\n";
    for (const auto& b : plan.binders)
      if (!b.rigid) guarded.push_back(plan.decl_name + "." + b.binder);
  }
  out << "non-rigid:";
  for (const auto& g : guarded) out << " " << g;
  out << "\n";
  return kExitOk;
}

int cmd_translate(const Options& o, std::ostream& out) {
  Signature sig = load_signature(read_file(o.file));
  out << print_clauses(translate(sig, mode_of(o.mode)));
  return kExitOk;
}

nlohmann::json counters_json(const Counters& c) {
  return {{"backchain_steps", c.backchain_steps}, {"unify_calls", c.unify_calls}, {"top_steps", c.top_steps}};
}

std::string counters_text(const Counters& c) {
  return "backchain_steps=" + std::to_string(c.backchain_steps) + " unify_calls=" + std::to_string(c.unify_calls) +
         " top_steps=" + std::to_string(c.top_steps);
}

// Exit code for a finished run: certified answers win, then resource limits.
int run_status(const QueryRun& run) {
  if (!run.all_certified()) return kExitInvariant;
  if (!run.answers.empty()) {
    bool cut = run.outcome.status == SearchStatus::BudgetExceeded || run.outcome.status == SearchStatus::DepthExceeded;
    return cut ? kExitResource : kExitOk;
  }
  return run.outcome.status == SearchStatus::Exhausted ? kExitOk : kExitResource;
}

int cmd_solve(const Options& o, std::ostream& out) {
  Program p = compile(load_signature(read_file(o.file)), mode_of(o.mode));
  QueryText qt = parse_solve_query(p.sig, o.query);
  QueryRun run = run_query(p, qt.query, limits_of(o), o.all ? 0 : 1);
  int code = run_status(run);
  if (o.format == "json") {
    nlohmann::json j;
    j["mode"] = std::string(mode_name(p.mode()));
    j["status"] = std::string(status_name(run.outcome.status));
    j["counters"] = counters_json(run.outcome.counters);
    j["answers"] = nlohmann::json::array();
    for (const auto& a : run.answers) {
      nlohmann::json ja;
      ja["certified"] = a.status == CertStatus::Certified;
      if (a.status == CertStatus::Certified) {
        for (std::size_t i = 0; i < a.meta_names.size(); ++i) ja["bindings"][a.meta_names[i]] = pretty_print(a.meta_values[i]);
        ja[qt.proof_name] = pretty_print(a.lf_proof);
        ja["type"] = pretty_print(a.lf_type);
        ja["kernel_derivation_size"] = derivation_size(a.kernel_derivation);
      } else {
        ja["reason"] = a.reason;
      }
      ja["counters"] = counters_json(a.counters);
      if (o.trace) ja["trace"] = a.trace;
      j["answers"].push_back(ja);
    }
    out << j.dump(2) << "\n";
    return code;
  }
  for (const auto& a : run.answers) {
    if (o.trace)
      for (const auto& line : a.trace) out << "  " << line << "\n";
    if (a.status == CertStatus::Rejected) {
      out << "rejected: " << a.reason << "\n";
      continue;
    }
    out << "certified\n";
    for (std::size_t i = 0; i < a.meta_names.size(); ++i)
      out << a.meta_names[i] << " = " << pretty_print(a.meta_values[i]) << ".\n";
    out << qt.proof_name << " = " << pretty_print(a.lf_proof) << ".\n";
    out << "% " << counters_text(a.counters) << "\n";
  }
  if (run.answers.empty()) {
    out << "no solution within depth " << run.outcome.depth_used;
    if (run.outcome.status != SearchStatus::Exhausted) out << " (" << status_name(run.outcome.status) << ")";
    out << "\n";
  } else if (o.all) {
    out << "% " << run.answers.size() << " answers, search " << status_name(run.outcome.status) << "\n";
  }
  if (run.outcome.non_pattern) out << "% " << run.outcome.non_pattern << " branches cut by non-pattern unification\n";
  return code;
}

int cmd_bench(const Options& o, std::ostream& out) {
  auto rows = bench_append(o.sizes, o.seed, o.search, limits_of(o));
  if (o.mode != "both") {
    TranslationMode m = mode_of(o.mode);
    rows.erase(std::remove_if(rows.begin(), rows.end(), [m](const BenchRow& r) { return r.mode != m; }), rows.end());
  }
  if (o.format == "text") {
    for (const auto& r : rows)
      out << "n=" << r.n << " " << mode_name(r.mode) << " backchain_steps=" << r.backchain_steps
          << " unify_calls=" << r.unify_calls << " wall_ns=" << r.wall_ns << (r.certified ? "" : " uncertified") << "\n";
  } else {
    out << bench_csv(rows);
  }
  bool certified = std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.certified; });
  return certified ? kExitOk : (o.search ? kExitResource : kExitInvariant);
}

int cmd_compare(const Options& o, std::ostream& out) {
  Signature sig = load_signature(read_file(o.file));
  Program naive = compile(sig, TranslationMode::Naive);
  Program optimized = compile(sig, TranslationMode::Optimized);
  QueryText qt = parse_solve_query(sig, o.query);
  ModeComparison c = compare_modes(naive, optimized, qt.query, limits_of(o));
  auto line = [&](const char* name, const QueryRun& run) {
    out << name << ": " << (run.answers.empty() ? "no solution" : "solved") << " (" << status_name(run.outcome.status)
        << ") " << counters_text(run.outcome.counters);
    if (!run.solutions.empty()) out << " depth=" << run.solutions.front().depth;
    out << "\n";
    if (!run.answers.empty() && run.answers.front().status == CertStatus::Certified)
      out << "  " << qt.proof_name << " = " << pretty_print(run.answers.front().lf_proof) << "\n";
  };
  line("naive", c.naive);
  line("optimized", c.optimized);
  out << "success agrees: " << (c.success_agrees ? "yes" : "no") << "\n";
  out << "answers alpha-equal: " << (c.answers_agree ? "yes" : "no") << "\n";
  out << "all certified: " << (c.both_certified ? "yes" : "no") << "\n";
  out << "optimized depth within naive: " << (c.depth_ok ? "yes" : "no") << "\n";
  if (!c.both_certified || !c.success_agrees || !c.answers_agree) {
    bool cut = c.naive.outcome.status == SearchStatus::BudgetExceeded ||
               c.naive.outcome.status == SearchStatus::DepthExceeded ||
               c.optimized.outcome.status == SearchStatus::BudgetExceeded ||
               c.optimized.outcome.status == SearchStatus::DepthExceeded;
    return c.both_certified && cut ? kExitResource : kExitInvariant;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"LF signatures, their hereditary Harrop translations, and certified proof search", "lfhh"};
  app.require_subcommand(1);
  Options o;

  auto add_file = [&](CLI::App* c) { c->add_option("file", o.file, "LF signature (.lf)")->required(); };
  auto add_limits = [&](CLI::App* c) {
    c->add_option("--depth", o.depth, "Backchain depth limit")->check(CLI::Range(1u, 1u << 30));
    c->add_option("--budget", o.budget, "Unification call budget")->check(CLI::PositiveNumber);
    c->add_flag("--iterative-deepening", o.deepening, "Deepen the depth limit gradually");
  };
  const std::vector<std::string> modes{"naive", "optimized"};
  const std::vector<std::string> modes_both{"naive", "optimized", "both"};

  auto* check = app.add_subcommand("check", "Check a signature");
  add_file(check);
  auto* analyze = app.add_subcommand("analyze", "Report which binders occur rigidly");
  add_file(analyze);
  auto* translate_cmd = app.add_subcommand("translate", "Print the clauses of a signature");
  add_file(translate_cmd);
  translate_cmd->add_option("--mode", o.mode, "naive or optimized")->check(CLI::IsMember(modes));
  auto* solve_cmd = app.add_subcommand("solve", "Search for an inhabitant and certify it");
  add_file(solve_cmd);
  solve_cmd->add_option("query", o.query, "LF type, metas uppercase; `hastype M A` names the proof")->required();
  solve_cmd->add_option("--mode", o.mode, "naive or optimized")->check(CLI::IsMember(modes));
  add_limits(solve_cmd);
  solve_cmd->add_flag("--trace", o.trace, "Print the search trace");
  solve_cmd->add_flag("--all", o.all, "Enumerate every answer");
  solve_cmd->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  auto* bench = app.add_subcommand("bench", "Step counts for ground append checks");
  bench->add_option("--sizes", o.sizes, "List lengths")->delimiter(',');
  bench->add_option("--seed", o.seed, "Seed for element values (0 = fixed elements)");
  bench->add_option("--mode", o.mode, "naive, optimized or both")->check(CLI::IsMember(modes_both));
  bench->add_option("--format", o.format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
  bench->add_flag("--search", o.search, "Leave the output list as a meta-variable");
  add_limits(bench);
  auto* compare = app.add_subcommand("compare", "Run both modes and compare their first answers");
  add_file(compare);
  compare->add_option("query", o.query, "LF type")->required();
  add_limits(compare);

  bench->preparse_callback([&](std::size_t) {
    o.mode = "both";
    o.format = "csv";
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*check) return cmd_check(o, out);
    if (*analyze) return cmd_analyze(o, out);
    if (*translate_cmd) return cmd_translate(o, out);
    if (*solve_cmd) return cmd_solve(o, out);
    if (*bench) return cmd_bench(o, out);
    if (*compare) return cmd_compare(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const LfError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitInput;
}

}  // namespace lfhh
