#include "lfhh/hhf_term.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

#include "lfhh/lf_syntax.hpp"

namespace lfhh {

// --- simple types ---------------------------------------------------------

SimpleType SimpleType::tm() {
  static const SimpleType t(std::make_shared<const Node>(Node{SortTag::Tm, nullptr, nullptr}));
  return t;
}
SimpleType SimpleType::ty() {
  static const SimpleType t(std::make_shared<const Node>(Node{SortTag::Ty, nullptr, nullptr}));
  return t;
}
SimpleType SimpleType::o() {
  static const SimpleType t(std::make_shared<const Node>(Node{SortTag::O, nullptr, nullptr}));
  return t;
}
SimpleType SimpleType::arrow(SimpleType from, SimpleType to) {
  return SimpleType(std::make_shared<const Node>(Node{SortTag::Arrow, std::make_shared<const SimpleType>(std::move(from)),
                                                      std::make_shared<const SimpleType>(std::move(to))}));
}

bool operator==(const SimpleType& a, const SimpleType& b) {
  if (a.node_ == b.node_) return true;
  if (a.tag() != b.tag()) return false;
  if (a.tag() != SortTag::Arrow) return true;
  return a.domain() == b.domain() && a.codomain() == b.codomain();
}

std::string SimpleType::str() const {
  switch (tag()) {
    case SortTag::Tm: return "tm";
    case SortTag::Ty: return "ty";
    case SortTag::O: return "o";
    case SortTag::Arrow: {
      std::string d = domain().str();
      if (domain().tag() == SortTag::Arrow) d = "(" + d + ")";
      return d + " -> " + codomain().str();
    }
  }
  return "?";
}

// --- terms ----------------------------------------------------------------

Term Term::constant(std::string name) {
  TermNode n;
  n.tag = TermTag::Const;
  n.name = std::move(name);
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

Term Term::bvar(std::uint32_t index) {
  TermNode n;
  n.tag = TermTag::BVar;
  n.id = index;
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

Term Term::eigen(std::uint32_t id, std::string hint, SimpleType type, std::uint32_t level) {
  TermNode n;
  n.tag = TermTag::Eigen;
  n.id = id;
  n.name = std::move(hint);
  n.type = std::move(type);
  n.level = level;
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

Term Term::meta(std::uint32_t id, std::string hint, SimpleType type, std::uint32_t level) {
  TermNode n;
  n.tag = TermTag::Meta;
  n.id = id;
  n.name = std::move(hint);
  n.type = std::move(type);
  n.level = level;
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

Term Term::lam(std::string hint, SimpleType type, Term body) {
  TermNode n;
  n.tag = TermTag::Lam;
  n.name = std::move(hint);
  n.type = std::move(type);
  n.body = std::move(body);
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

Term Term::app(Term head, std::vector<Term> args) {
  if (args.empty()) return head;
  if (head.is(TermTag::App)) {
    std::vector<Term> all = head.args();
    all.insert(all.end(), std::make_move_iterator(args.begin()), std::make_move_iterator(args.end()));
    return app(head.head(), std::move(all));
  }
  if (head.is(TermTag::Lam)) {
    Term reduced = term_instantiate(head.body(), args.front());
    args.erase(args.begin());
    return app(std::move(reduced), std::move(args));
  }
  TermNode n;
  n.tag = TermTag::App;
  n.body = std::move(head);
  n.args = std::move(args);
  return Term(std::make_shared<const TermNode>(std::move(n)));
}

TermTag Term::tag() const { return node_->tag; }
const std::string& Term::name() const { return node_->name; }
std::uint32_t Term::id() const { return node_->id; }
std::uint32_t Term::level() const { return node_->level; }
const SimpleType& Term::type() const { return node_->type; }
const Term& Term::body() const { return node_->body; }
const Term& Term::head() const { return node_->body; }
const std::vector<Term>& Term::args() const { return node_->args; }

namespace {

const std::vector<Term> kNoArgs;

}  // namespace

const Term& term_head(const Term& t) { return t.is(TermTag::App) ? t.head() : t; }
const std::vector<Term>& term_args(const Term& t) { return t.is(TermTag::App) ? t.args() : kNoArgs; }

bool term_eq(const Term& a, const Term& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case TermTag::Const: return a.name() == b.name();
    case TermTag::BVar:
    case TermTag::Eigen:
    case TermTag::Meta: return a.id() == b.id();
    case TermTag::Lam: return term_eq(a.body(), b.body());
    case TermTag::App: {
      if (a.args().size() != b.args().size() || !term_eq(a.head(), b.head())) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!term_eq(a.args()[i], b.args()[i])) return false;
      return true;
    }
  }
  return false;
}

Term term_shift(const Term& t, std::uint32_t by, std::uint32_t cutoff) {
  if (by == 0) return t;
  switch (t.tag()) {
    case TermTag::BVar: return t.id() >= cutoff ? Term::bvar(t.id() + by) : t;
    case TermTag::Lam: return Term::lam(t.name(), t.type(), term_shift(t.body(), by, cutoff + 1));
    case TermTag::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(term_shift(a, by, cutoff));
      return Term::app(term_shift(t.head(), by, cutoff), std::move(args));
    }
    default: return t;
  }
}

Term term_instantiate(const Term& body, const Term& value, std::uint32_t depth) {
  switch (body.tag()) {
    case TermTag::BVar:
      if (body.id() == depth) return term_shift(value, depth);
      if (body.id() > depth) return Term::bvar(body.id() - 1);
      return body;
    case TermTag::Lam: return Term::lam(body.name(), body.type(), term_instantiate(body.body(), value, depth + 1));
    case TermTag::App: {
      std::vector<Term> args;
      args.reserve(body.args().size());
      for (const auto& a : body.args()) args.push_back(term_instantiate(a, value, depth));
      return Term::app(term_instantiate(body.head(), value, depth), std::move(args));
    }
    default: return body;
  }
}

Term eta_expand(const Term& atom, const SimpleType& type) {
  std::vector<SimpleType> doms;
  const SimpleType* cur = &type;
  while (cur->tag() == SortTag::Arrow) {
    doms.push_back(cur->domain());
    cur = &cur->codomain();
  }
  if (doms.empty()) return atom;
  auto n = static_cast<std::uint32_t>(doms.size());
  std::vector<Term> args;
  args.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) args.push_back(eta_expand(Term::bvar(n - 1 - i), doms[i]));
  Term body = Term::app(term_shift(atom, n), std::move(args));
  for (std::uint32_t i = n; i-- > 0;) body = Term::lam("y", doms[i], std::move(body));
  return body;
}

std::optional<Term> eta_contract_atom(const Term& t) {
  std::uint32_t k = 0;
  const Term* cur = &t;
  while (cur->is(TermTag::Lam)) {
    ++k;
    cur = &cur->body();
  }
  const Term& h = term_head(*cur);
  const auto& args = term_args(*cur);
  if (h.is(TermTag::Lam) || args.size() != k) return std::nullopt;
  for (std::uint32_t i = 0; i < k; ++i) {
    auto a = eta_contract_atom(args[i]);
    if (!a || !a->is(TermTag::BVar) || a->id() != k - 1 - i) return std::nullopt;
  }
  if (h.is(TermTag::BVar)) {
    if (h.id() < k) return std::nullopt;
    return Term::bvar(h.id() - k);
  }
  return h;
}

namespace {

template <typename Pred>
bool any_node(const Term& t, const Pred& p) {
  if (p(t)) return true;
  switch (t.tag()) {
    case TermTag::Lam: return any_node(t.body(), p);
    case TermTag::App:
      if (any_node(t.head(), p)) return true;
      for (const auto& a : t.args())
        if (any_node(a, p)) return true;
      return false;
    default: return false;
  }
}

}  // namespace

bool term_has_meta(const Term& t) {
  return any_node(t, [](const Term& x) { return x.is(TermTag::Meta); });
}
bool term_has_eigen(const Term& t) {
  return any_node(t, [](const Term& x) { return x.is(TermTag::Eigen); });
}

// --- formulas -------------------------------------------------------------

Formula Formula::atom(Term subject, Term classifier) {
  FormulaNode n;
  n.tag = FormulaTag::Atom;
  n.subject = std::move(subject);
  n.classifier = std::move(classifier);
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Formula Formula::top() {
  static const Formula t(std::make_shared<const FormulaNode>(FormulaNode{}));
  return t;
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  FormulaNode n;
  n.tag = FormulaTag::Implies;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Formula Formula::forall(std::string hint, SimpleType type, Formula body) {
  FormulaNode n;
  n.tag = FormulaTag::Forall;
  n.hint = std::move(hint);
  n.type = std::move(type);
  n.rhs = std::move(body);
  return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

FormulaTag Formula::tag() const { return node_->tag; }
const Term& Formula::subject() const { return node_->subject; }
const Term& Formula::classifier() const { return node_->classifier; }
const Formula& Formula::lhs() const { return node_->lhs; }
const Formula& Formula::rhs() const { return node_->rhs; }
const std::string& Formula::hint() const { return node_->hint; }
const SimpleType& Formula::type() const { return node_->type; }
const Formula& Formula::body() const { return node_->rhs; }

bool formula_eq(const Formula& a, const Formula& b) {
  if (!a || !b || a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case FormulaTag::Top: return true;
    case FormulaTag::Atom: return term_eq(a.subject(), b.subject()) && term_eq(a.classifier(), b.classifier());
    case FormulaTag::Implies: return formula_eq(a.lhs(), b.lhs()) && formula_eq(a.rhs(), b.rhs());
    case FormulaTag::Forall: return a.type() == b.type() && formula_eq(a.body(), b.body());
  }
  return false;
}

Formula formula_instantiate(const Formula& body, const Term& value, std::uint32_t depth) {
  switch (body.tag()) {
    case FormulaTag::Top: return body;
    case FormulaTag::Atom:
      return Formula::atom(term_instantiate(body.subject(), value, depth),
                           term_instantiate(body.classifier(), value, depth));
    case FormulaTag::Implies:
      return Formula::implies(formula_instantiate(body.lhs(), value, depth),
                              formula_instantiate(body.rhs(), value, depth));
    case FormulaTag::Forall:
      return Formula::forall(body.hint(), body.type(), formula_instantiate(body.body(), value, depth + 1));
  }
  return body;
}

Formula formula_shift(const Formula& f, std::uint32_t by, std::uint32_t cutoff) {
  switch (f.tag()) {
    case FormulaTag::Top: return f;
    case FormulaTag::Atom:
      return Formula::atom(term_shift(f.subject(), by, cutoff), term_shift(f.classifier(), by, cutoff));
    case FormulaTag::Implies:
      return Formula::implies(formula_shift(f.lhs(), by, cutoff), formula_shift(f.rhs(), by, cutoff));
    case FormulaTag::Forall: return Formula::forall(f.hint(), f.type(), formula_shift(f.body(), by, cutoff + 1));
  }
  return f;
}

std::string_view mode_name(TranslationMode m) { return m == TranslationMode::Naive ? "naive" : "optimized"; }

// --- printing -------------------------------------------------------------

namespace {

void collect_constants(const Term& t, std::set<std::string, std::less<>>& out) {
  any_node(t, [&](const Term& x) {
    if (x.is(TermTag::Const)) out.insert(x.name());
    return false;
  });
}

void collect_constants(const Formula& f, std::set<std::string, std::less<>>& out) {
  switch (f.tag()) {
    case FormulaTag::Top: break;
    case FormulaTag::Atom:
      collect_constants(f.subject(), out);
      collect_constants(f.classifier(), out);
      break;
    case FormulaTag::Implies:
      collect_constants(f.lhs(), out);
      collect_constants(f.rhs(), out);
      break;
    case FormulaTag::Forall: collect_constants(f.body(), out); break;
  }
}

class Printer {
 public:
  explicit Printer(std::set<std::string, std::less<>> avoid) : avoid_(std::move(avoid)) {}

  std::string term(const Term& t, bool arg_pos) {
    switch (t.tag()) {
      case TermTag::Const: return t.name();
      case TermTag::BVar:
        if (t.id() < names_.size()) return names_[names_.size() - 1 - t.id()];
        return "#" + std::to_string(t.id() - names_.size());
      case TermTag::Eigen: return t.name() + "!" + std::to_string(t.id());
      case TermTag::Meta: return "?" + t.name() + "_" + std::to_string(t.id());
      case TermTag::Lam: {
        std::string x = bind();
        std::string s = x + "\\ " + term(t.body(), false);
        names_.pop_back();
        return arg_pos ? "(" + s + ")" : s;
      }
      case TermTag::App: {
        std::string s = term(t.head(), true);
        for (const auto& a : t.args()) s += " " + term(a, true);
        return arg_pos ? "(" + s + ")" : s;
      }
    }
    return "?";
  }

  std::string formula(const Formula& f) {
    switch (f.tag()) {
      case FormulaTag::Top: return "top";
      case FormulaTag::Atom: return "hastype " + term(f.subject(), true) + " " + term(f.classifier(), true);
      case FormulaTag::Implies: {
        std::string l = formula(f.lhs());
        if (f.lhs().is(FormulaTag::Implies) || f.lhs().is(FormulaTag::Forall)) l = "(" + l + ")";
        return l + " => " + formula(f.rhs());
      }
      case FormulaTag::Forall: {
        std::string x = bind();
        std::string ty = f.type().str();
        std::string s = "forall " + x + ":" + (f.type().tag() == SortTag::Arrow ? "(" + ty + ")" : ty) + ". " +
                        formula(f.body());
        names_.pop_back();
        return s;
      }
    }
    return "?";
  }

 private:
  std::string bind() {
    std::string x;
    do x = "x" + std::to_string(++counter_);
    while (avoid_.count(x));
    names_.push_back(x);
    return x;
  }

  std::set<std::string, std::less<>> avoid_;
  std::vector<std::string> names_;
  std::size_t counter_ = 0;
};

}  // namespace

std::string print_term(const Term& t) {
  std::set<std::string, std::less<>> avoid;
  collect_constants(t, avoid);
  return Printer(std::move(avoid)).term(t, false);
}

std::string print_formula(const Formula& f) {
  std::set<std::string, std::less<>> avoid;
  collect_constants(f, avoid);
  return Printer(std::move(avoid)).formula(f);
}

std::string print_clauses(const ClauseSet& cs) {
  std::string out;
  for (const auto& c : cs.clauses) out += print_formula(c.formula) + ".\n";
  return out;
}

// --- parsing --------------------------------------------------------------

namespace {

class ClauseParser {
 public:
  explicit ClauseParser(std::string_view text) : text_(text) {}

  std::vector<Formula> clauses() {
    std::vector<Formula> out;
    skip();
    while (pos_ < text_.size()) {
      out.push_back(formula());
      expect(".");
      skip();
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw LfError("parse_clauses", std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

  bool peek(std::string_view tok) {
    skip();
    return text_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  bool peek_ident() {
    skip();
    return pos_ < text_.size() && ident_char(text_[pos_]);
  }

  bool peek_keyword(std::string_view kw) {
    skip();
    if (text_.substr(pos_, kw.size()) != kw) return false;
    std::size_t end = pos_ + kw.size();
    return end >= text_.size() || !ident_char(text_[end]);
  }

  SimpleType stype() {
    SimpleType lhs;
    if (accept("(")) {
      lhs = stype();
      expect(")");
    } else {
      std::string s = ident();
      if (s == "tm") lhs = SimpleType::tm();
      else if (s == "ty") lhs = SimpleType::ty();
      else if (s == "o") lhs = SimpleType::o();
      else fail("unknown sort " + s);
    }
    if (accept("->")) return SimpleType::arrow(lhs, stype());
    return lhs;
  }

  Formula formula() {
    if (peek_keyword("forall")) {
      ident();
      std::string x = ident();
      expect(":");
      SimpleType ty = stype();
      expect(".");
      names_.push_back(x);
      Formula body = formula();
      names_.pop_back();
      return Formula::forall(x, ty, body);
    }
    Formula lhs = atomic();
    if (accept("=>")) return Formula::implies(lhs, formula());
    return lhs;
  }

  Formula atomic() {
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    if (peek_keyword("top")) {
      ident();
      return Formula::top();
    }
    if (!peek_keyword("hastype")) fail("expected formula");
    ident();
    Term s = term_arg();
    Term c = term_arg();
    return Formula::atom(s, c);
  }

  Term variable(const std::string& x) {
    for (std::size_t i = names_.size(); i-- > 0;)
      if (names_[i] == x) return Term::bvar(static_cast<std::uint32_t>(names_.size() - 1 - i));
    return Term::constant(x);
  }

  Term term_arg() {
    if (accept("(")) {
      Term t = term();
      expect(")");
      return t;
    }
    return variable(ident());
  }

  Term term() {
    if (peek_ident()) {
      std::size_t save = pos_;
      std::string x = ident();
      if (accept("\\")) {
        names_.push_back(x);
        Term body = term();
        names_.pop_back();
        return Term::lam(x, SimpleType::tm(), body);
      }
      pos_ = save;
    }
    Term head = term_arg();
    std::vector<Term> args;
    while (peek_ident() || peek("(")) {
      if (peek_keyword("hastype") || peek_keyword("top") || peek_keyword("forall")) break;
      args.push_back(term_arg());
    }
    return Term::app(head, std::move(args));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> names_;
};

}  // namespace

std::vector<Formula> parse_clauses(std::string_view text) { return ClauseParser(text).clauses(); }

// --- sort checking --------------------------------------------------------

namespace {

using ConstSorts = std::map<std::string, SimpleType, std::less<>>;

std::optional<SimpleType> infer(const Term& t, std::vector<SimpleType>& ctx, const ConstSorts& cs) {
  switch (t.tag()) {
    case TermTag::Const: {
      auto it = cs.find(t.name());
      if (it == cs.end()) return std::nullopt;
      return it->second;
    }
    case TermTag::BVar:
      if (t.id() >= ctx.size()) return std::nullopt;
      return ctx[ctx.size() - 1 - t.id()];
    case TermTag::Eigen:
    case TermTag::Meta: return t.type();
    case TermTag::Lam: {
      ctx.push_back(t.type());
      auto b = infer(t.body(), ctx, cs);
      ctx.pop_back();
      if (!b) return std::nullopt;
      return SimpleType::arrow(t.type(), *b);
    }
    case TermTag::App: {
      auto h = infer(t.head(), ctx, cs);
      if (!h) return std::nullopt;
      SimpleType cur = *h;
      for (const auto& a : t.args()) {
        if (cur.tag() != SortTag::Arrow) return std::nullopt;
        auto at = infer(a, ctx, cs);
        if (!at || !(*at == cur.domain())) return std::nullopt;
        SimpleType next = cur.codomain();
        cur = next;
      }
      return cur;
    }
  }
  return std::nullopt;
}

bool check(const Formula& f, std::vector<SimpleType>& ctx, const ConstSorts& cs) {
  switch (f.tag()) {
    case FormulaTag::Top: return true;
    case FormulaTag::Atom: {
      auto s = infer(f.subject(), ctx, cs);
      auto c = infer(f.classifier(), ctx, cs);
      return s && c && *s == SimpleType::tm() && *c == SimpleType::ty();
    }
    case FormulaTag::Implies: return check(f.lhs(), ctx, cs) && check(f.rhs(), ctx, cs);
    case FormulaTag::Forall: {
      ctx.push_back(f.type());
      bool ok = check(f.body(), ctx, cs);
      ctx.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool well_sorted(const Formula& f, const ConstSorts& constants) {
  std::vector<SimpleType> ctx;
  return check(f, ctx, constants);
}

}  // namespace lfhh
