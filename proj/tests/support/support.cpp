#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lfhh/lf_scope.hpp"

#ifndef LFHH_GOLDEN_DIR
#error "LFHH_GOLDEN_DIR must be defined"
#endif

namespace lfhh::test {

std::string golden_path(std::string_view name) { return std::string(LFHH_GOLDEN_DIR) + "/" + std::string(name); }

std::string read_golden(std::string_view name) {
  std::ifstream in(golden_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing golden file " + std::string(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string numeral(std::size_t k) {
  std::string s = "z";
  for (std::size_t i = 0; i < k; ++i) s = "(s " + s + ")";
  return s;
}

std::string list_of(const std::vector<std::size_t>& elems) {
  std::string s = "nil";
  for (std::size_t i = elems.size(); i-- > 0;) s = "(cons " + numeral(elems[i]) + " " + s + ")";
  return s;
}

namespace {

std::size_t below(std::mt19937_64& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
bool coin(std::mt19937_64& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

std::vector<std::size_t> random_list(std::mt19937_64& rng, std::size_t max_len, std::size_t max_elem) {
  std::vector<std::size_t> v(below(rng, max_len + 1));
  for (auto& e : v) e = below(rng, max_elem + 1);
  return v;
}

std::vector<std::size_t> concat(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const std::vector<CorpusQuery>& fixed_queries() {
  static const std::vector<CorpusQuery> q{
      {"nat", false},
      {"list", false},
      {"{x:nat} nat", false},
      {"{l:list} list", false},
      {"nat -> list", false},
      {"{l:list} append nil l l", false},
      {"{x:nat} append (cons x nil) (cons x nil) (cons x (cons x nil))", false},
      {"{x:nat} {l:list} append (cons x nil) l (cons x l)", false},
      {"{x:nat} append (cons x nil) nil L", false},
      {"{x:nat} {y:nat} append (cons x nil) (cons y nil) (cons y (cons x nil))", false},
      {"append nil nil L", false},
      {"append (cons z nil) nil L", true},
  };
  return q;
}

}  // namespace

std::vector<CorpusQuery> append_corpus(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusQuery> out = fixed_queries();
  while (out.size() < count) {
    switch (below(rng, 5)) {
      case 0: {  // ground, holds
        auto a = random_list(rng, 5, 3), b = random_list(rng, 5, 3);
        out.push_back({"append " + list_of(a) + " " + list_of(b) + " " + list_of(concat(a, b)), false});
        break;
      }
      case 1: {  // ground, fails
        auto a = random_list(rng, 4, 3), b = random_list(rng, 4, 3);
        auto c = concat(a, b);
        if (!c.empty() && coin(rng)) {
          c[below(rng, c.size())] += 1;
        } else if (!c.empty() && coin(rng)) {
          c.pop_back();
        } else {
          c.push_back(below(rng, 3));
        }
        out.push_back({"append " + list_of(a) + " " + list_of(b) + " " + list_of(c), false});
        break;
      }
      case 2: {  // search for the concatenation
        auto a = random_list(rng, 2, 2), b = random_list(rng, 2, 2);
        out.push_back({"append " + list_of(a) + " " + list_of(b) + " Out", true});
        break;
      }
      case 3: {  // split: first answer takes the empty prefix
        auto c = random_list(rng, 5, 3);
        out.push_back({"append X Y " + list_of(c), false});
        break;
      }
      default: {  // suffix search
        auto a = random_list(rng, 2, 2), r = random_list(rng, 1, 1);
        out.push_back({"append " + list_of(a) + " Y " + list_of(concat(a, r)), true});
        break;
      }
    }
  }
  return out;
}

// --- random signatures ------------------------------------------------------

RandomSignature random_signature(std::mt19937_64& rng, bool finite) {
  std::ostringstream text;
  RandomSignature out;

  std::size_t data = 1 + below(rng, 2);
  std::vector<std::size_t> consts(data);
  for (std::size_t d = 0; d < data; ++d) {
    text << "d" << d << " : type.\n";
    consts[d] = 1 + below(rng, 3);
    for (std::size_t c = 0; c < consts[d]; ++c) text << "d" << d << "_c" << c << " : d" << d << ".\n";
    if (!finite) {
      text << "d" << d << "_s : d" << d << " -> d" << d << ".\n";
      if (coin(rng)) text << "d" << d << "_l : (d" << d << " -> d" << d << ") -> d" << d << ".\n";
    }
  }
  auto dname = [](std::size_t d) { return "d" + std::to_string(d); };
  auto cname = [&](std::size_t d) { return dname(d) + "_c" + std::to_string(below(rng, consts[d])); };

  std::size_t families = 2 + below(rng, 3);
  std::vector<std::vector<std::size_t>> index(families);
  for (std::size_t f = 0; f < families; ++f) {
    index[f].resize(below(rng, 3));
    text << "f" << f << " :";
    for (auto& s : index[f]) {
      s = below(rng, data);
      text << " {i:" << dname(s) << "}";
    }
    text << " type.\n";
  }

  struct Binder {
    std::string name;
    int kind;             // 0 data, 1 family, 2 HO family, 3 data function
    std::size_t from = 0, to = 0;
  };

  for (std::size_t f = 0; f < families; ++f) {
    std::size_t ctors = 1 + below(rng, 3);
    for (std::size_t k = 0; k < ctors; ++k) {
      text << "f" << f << "_k" << k << " :";
      std::vector<Binder> binders;
      std::size_t n = below(rng, 4);
      for (std::size_t i = 0; i < n; ++i) {
        Binder b{"y" + std::to_string(i), static_cast<int>(below(rng, 4))};
        if (f == 0 && (b.kind == 1 || b.kind == 2)) b.kind = 0;
        std::string cls;
        auto data_arg = [&](std::size_t sort) {
          std::vector<std::string> vars;
          for (const auto& e : binders)
            if (e.kind == 0 && e.to == sort) vars.push_back(e.name);
          if (!vars.empty() && coin(rng)) return vars[below(rng, vars.size())];
          return cname(sort);
        };
        if (b.kind == 0) {
          b.to = below(rng, data);
          cls = dname(b.to);
        } else if (b.kind == 1) {
          std::size_t l = below(rng, f);
          cls = "f" + std::to_string(l);
          for (auto s : index[l]) cls += " " + data_arg(s);
        } else if (b.kind == 2) {
          std::size_t l = below(rng, f);
          if (index[l].empty()) {
            std::size_t s = below(rng, data);
            cls = dname(s) + " -> f" + std::to_string(l);
          } else {
            cls = "{u:" + dname(index[l][0]) + "} f" + std::to_string(l) + " u";
            for (std::size_t j = 1; j < index[l].size(); ++j) cls += " " + data_arg(index[l][j]);
          }
        } else {
          b.from = below(rng, data);
          b.to = below(rng, data);
          cls = dname(b.from) + " -> " + dname(b.to);
        }
        text << " {" << b.name << ":" << cls << "}";
        binders.push_back(b);
      }
      text << " f" << f;
      for (auto s : index[f]) {
        std::vector<std::string> options{cname(s)};
        for (const auto& b : binders) {
          if (b.kind == 0 && b.to == s) {
            options.push_back(b.name);
            options.push_back(b.name);
            if (!finite) options.push_back("(" + dname(s) + "_s " + b.name + ")");
          }
          if (b.kind == 3 && b.to == s) options.push_back("(" + b.name + " " + cname(b.from) + ")");
        }
        text << " " << options[below(rng, options.size())];
      }
      text << ".\n";
    }
  }

  for (std::size_t f = 0; f < families; ++f) {
    for (int rep = 0; rep < 2; ++rep) {
      std::string q = "f" + std::to_string(f);
      for (auto s : index[f]) q += " " + cname(s);
      out.queries.push_back(q);
    }
    if (!index[f].empty()) {
      std::string q = "{u:" + dname(index[f][0]) + "} f" + std::to_string(f) + " u";
      for (std::size_t j = 1; j < index[f].size(); ++j) q += " " + cname(index[f][j]);
      out.queries.push_back(q);
    }
  }
  out.text = text.str();
  return out;
}

// --- object generation ------------------------------------------------------

std::string target_head(const Expr& classifier) {
  const Expr* e = &classifier;
  while (e->is(ExprTag::Pi)) e = &e->body();
  if (e->is(ExprTag::Type)) return {};
  Spine sp = spine_of(*e);
  return sp.head.is(ExprTag::Const) ? sp.head.name() : std::string{};
}

namespace {

bool has_loose(const Expr& e, std::uint32_t depth) {
  switch (e.tag()) {
    case ExprTag::BVar: return e.index() >= depth;
    case ExprTag::Pi:
    case ExprTag::Lam: return has_loose(e.annot(), depth) || has_loose(e.body(), depth + 1);
    case ExprTag::App: return has_loose(e.head(), depth) || has_loose(e.arg(), depth);
    default: return false;
  }
}

using PhSet = std::set<std::string, std::less<>>;

// First-order matching of a constructor target against the wanted type.
// Returns false on a definite clash; placeholders in applied position are
// left for generation.
bool match(const Expr& pat, const Expr& term, const PhSet& ph, Subst& m, std::uint32_t depth) {
  if (pat.is(ExprTag::Const) && ph.count(pat.name())) {
    auto it = m.find(pat.name());
    if (it != m.end()) return depth == 0 ? alpha_eq(it->second, term) : true;
    if (!has_loose(term, 0)) m.emplace(pat.name(), term);
    return true;
  }
  switch (pat.tag()) {
    case ExprTag::Const: return term.is(ExprTag::Const) && term.name() == pat.name();
    case ExprTag::BVar: return term.is(ExprTag::BVar) && term.index() == pat.index();
    case ExprTag::Lam: return !term.is(ExprTag::Lam) || match(pat.body(), term.body(), ph, m, depth + 1);
    case ExprTag::App: {
      Spine ps = spine_of(pat), ts = spine_of(term);
      if (ps.head.is(ExprTag::Const) && ph.count(ps.head.name())) return true;
      if (!match(ps.head, ts.head, ph, m, depth) || ps.args.size() != ts.args.size()) return false;
      for (std::size_t i = 0; i < ps.args.size(); ++i)
        if (!match(ps.args[i], ts.args[i], ph, m, depth)) return false;
      return true;
    }
    default: return true;
  }
}

}  // namespace

std::string ObjectGen::fresh(std::string_view hint) { return std::string(hint) + "_g" + std::to_string(++counter_); }

std::optional<Expr> ObjectGen::object(const Expr& type, int depth) {
  if (type.is(ExprTag::Pi)) {
    std::string name = fresh("v");
    locals.emplace_back(name, type.annot());
    auto body = object(instantiate(type.body(), Expr::constant(name)), depth);
    locals.pop_back();
    if (!body) return std::nullopt;
    return lam_over(name, type.annot(), *body);
  }
  return base_object(type, depth);
}

std::optional<Expr> ObjectGen::base_object(const Expr& type, int depth) {
  if (depth < 0) return std::nullopt;
  std::string family = spine_of(type).head.name();
  std::vector<std::pair<std::string, Expr>> from_locals, from_sig;
  for (const auto& [name, cls] : locals)
    if (target_head(cls) == family) from_locals.emplace_back(name, cls);
  for (const auto& d : sig_.entries())
    if (d.sort == DeclSort::Type && target_head(d.classifier) == family) from_sig.emplace_back(d.name, d.classifier);
  std::shuffle(from_locals.begin(), from_locals.end(), rng_);
  std::shuffle(from_sig.begin(), from_sig.end(), rng_);
  std::vector<std::pair<std::string, Expr>> order;
  bool locals_first = coin(rng_, prefer_locals);
  for (auto* part : locals_first ? std::vector{&from_locals, &from_sig} : std::vector{&from_sig, &from_locals})
    order.insert(order.end(), part->begin(), part->end());
  for (const auto& [name, cls] : order)
    if (auto r = try_head(name, cls, type, depth)) return r;
  return std::nullopt;
}

std::optional<Expr> ObjectGen::try_head(const std::string& head, const Expr& classifier, const Expr& type, int depth) {
  std::vector<std::string> ph;
  std::vector<Expr> binder_types;
  Expr cur = classifier;
  while (cur.is(ExprTag::Pi)) {
    ph.push_back(fresh("p"));
    binder_types.push_back(cur.annot());
    cur = instantiate(cur.body(), Expr::constant(ph.back()));
  }
  Spine want = spine_of(type), have = spine_of(cur);
  if (have.args.size() != want.args.size()) return std::nullopt;
  PhSet phs(ph.begin(), ph.end());
  Subst m;
  for (std::size_t j = 0; j < want.args.size(); ++j)
    if (!match(have.args[j], want.args[j], phs, m, 0)) return std::nullopt;

  NameSupply names;
  Signature sig_only = sig_;
  auto normal = [&](const Expr& e, const Expr& cls) {
    Scope scope(sig_only, names);
    for (const auto& [n, t] : locals) scope.push(n, t);
    NormalizeState st{100000};
    return normalize_in(scope, e, cls, st);
  };
  std::vector<Expr> args;
  Subst values;
  for (std::size_t i = 0; i < ph.size(); ++i) {
    Expr bt = normal(substitute(binder_types[i], values), Expr::type());
    auto it = m.find(ph[i]);
    std::optional<Expr> v;
    if (it != m.end()) {
      v = it->second;
    } else {
      v = object(bt, depth - 1);
    }
    if (!v) return std::nullopt;
    values[ph[i]] = *v;
    args.push_back(*v);
  }
  try {
    if (!alpha_eq(normal(substitute(cur, values), Expr::type()), type)) return std::nullopt;
  } catch (const LfError&) {
    return std::nullopt;
  }
  return lfhh::apply(Expr::constant(head), args);
}

std::optional<Expr> ObjectGen::type(int depth, double pi_prob) {
  if (coin(rng_, pi_prob)) {
    auto dom = type(depth, 0.0);
    if (!dom) return std::nullopt;
    std::string name = fresh("w");
    locals.emplace_back(name, *dom);
    auto body = type(depth, pi_prob / 2);
    locals.pop_back();
    if (!body) return std::nullopt;
    return pi_over(name, *dom, *body);
  }
  std::vector<const Decl*> families;
  for (const auto& d : sig_.entries())
    if (d.sort == DeclSort::Kind) families.push_back(&d);
  if (families.empty()) return std::nullopt;
  const Decl& fam = *families[below(rng_, families.size())];
  std::vector<Expr> args;
  Expr cur = fam.classifier;
  while (cur.is(ExprTag::Pi)) {
    auto v = object(cur.annot(), depth);
    if (!v) return std::nullopt;
    args.push_back(*v);
    cur = instantiate(cur.body(), *v);
  }
  return lfhh::apply(Expr::constant(fam.name), args);
}

std::optional<SubstInstance> substitution_instance(std::mt19937_64& rng, const Signature& gamma) {
  ObjectGen gen(gamma, rng);
  auto b = gen.type(2, 0.4);
  if (!b) return std::nullopt;
  auto n = gen.object(*b, 3);
  if (!n) return std::nullopt;
  const std::string x = "hx";
  gen.locals = {{x, *b}};
  auto a = gen.type(2, 0.3);
  if (!a) return std::nullopt;
  auto m = gen.object(*a, 3);
  if (!m || !occurs_free(*m, x)) return std::nullopt;
  return SubstInstance{gamma, x, *b, *n, *m, *a};
}

}  // namespace lfhh::test
