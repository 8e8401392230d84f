#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lfhh/pipeline.hpp"

namespace py = pybind11;

namespace {

lfhh::TranslationMode mode_of(const std::string& m) {
  if (m == "naive") return lfhh::TranslationMode::Naive;
  if (m == "optimized") return lfhh::TranslationMode::Optimized;
  throw py::value_error("mode must be 'naive' or 'optimized', got '" + m + "'");
}

py::dict counters(const lfhh::Counters& c) {
  py::dict d;
  d["backchain_steps"] = c.backchain_steps;
  d["unify_calls"] = c.unify_calls;
  d["top_steps"] = c.top_steps;
  return d;
}

std::size_t check(const std::string& text) { return lfhh::load_signature(text).size(); }

py::list translate(const std::string& text, const std::string& mode) {
  py::list out;
  for (const auto& c : lfhh::translate(lfhh::load_signature(text), mode_of(mode)).clauses)
    out.append(py::make_tuple(c.origin, lfhh::print_formula(c.formula)));
  return out;
}

py::dict analyze(const std::string& text) {
  py::dict out;
  for (const auto& plan : lfhh::analyze_signature(lfhh::load_signature(text))) {
    py::dict binders;
    for (const auto& b : plan.binders) binders[py::str(b.binder)] = b.rigid;
    out[py::str(plan.decl_name)] = binders;
  }
  return out;
}

py::dict solve(const std::string& text, const std::string& query, const std::string& mode, std::uint32_t depth,
               std::uint64_t budget, bool deepen, std::size_t max_answers) {
  lfhh::Program p = lfhh::compile(lfhh::load_signature(text), mode_of(mode));
  lfhh::QueryText qt = lfhh::parse_solve_query(p.sig, query);
  lfhh::Limits lim;
  lim.depth = depth;
  lim.budget = budget;
  lim.iterative_deepening = deepen;
  lfhh::QueryRun run;
  {
    py::gil_scoped_release release;
    run = lfhh::run_query(p, qt.query, lim, max_answers);
  }
  py::list answers;
  for (const auto& a : run.answers) {
    py::dict ja;
    ja["certified"] = a.status == lfhh::CertStatus::Certified;
    if (a.status == lfhh::CertStatus::Certified) {
      py::dict bindings;
      for (std::size_t i = 0; i < a.meta_names.size(); ++i)
        bindings[py::str(a.meta_names[i])] = lfhh::pretty_print(a.meta_values[i]);
      ja["bindings"] = bindings;
      ja["proof"] = lfhh::pretty_print(a.lf_proof);
      ja["type"] = lfhh::pretty_print(a.lf_type);
      ja["kernel_derivation_size"] = lfhh::derivation_size(a.kernel_derivation);
    } else {
      ja["reason"] = a.reason;
    }
    ja["counters"] = counters(a.counters);
    answers.append(ja);
  }
  py::dict out;
  out["mode"] = std::string(lfhh::mode_name(p.mode()));
  out["status"] = std::string(lfhh::status_name(run.outcome.status));
  out["proof_name"] = qt.proof_name;
  out["counters"] = counters(run.outcome.counters);
  out["non_pattern"] = run.outcome.non_pattern;
  out["answers"] = answers;
  return out;
}

py::list bench(const std::vector<std::size_t>& sizes, std::uint64_t seed) {
  std::vector<lfhh::BenchRow> rows;
  {
    py::gil_scoped_release release;
    rows = lfhh::bench_append(sizes, seed, false, lfhh::Limits{});
  }
  py::list out;
  for (const auto& r : rows) {
    py::dict d;
    d["n"] = r.n;
    d["mode"] = std::string(lfhh::mode_name(r.mode));
    d["backchain_steps"] = r.backchain_steps;
    d["unify_calls"] = r.unify_calls;
    d["wall_ns"] = r.wall_ns;
    d["certified"] = r.certified;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_lfhh, m) {
  m.doc() = "LF signatures compiled to hereditary Harrop clauses, with certified proof search.";
  py::register_exception<lfhh::LfError>(m, "LfError", PyExc_ValueError);
  m.def("check", &check, py::arg("signature"), "Check a signature; returns the number of declarations.");
  m.def("translate", &translate, py::arg("signature"), py::arg("mode") = "optimized",
        "Clauses as (origin, text) pairs.");
  m.def("analyze", &analyze, py::arg("signature"), "Rigidity of each binder, per declaration.");
  m.def("solve", &solve, py::arg("signature"), py::arg("query"), py::arg("mode") = "optimized",
        py::arg("depth") = 512, py::arg("budget") = 10'000'000, py::arg("iterative_deepening") = false,
        py::arg("max_answers") = 1, "Search for proofs of a query type and certify each answer.");
  m.def("bench", &bench, py::arg("sizes"), py::arg("seed") = 0,
        "Backchaining counts for append queries in both modes.");
  m.def("append_signature", [] { return std::string(lfhh::append_signature_text()); });
}
