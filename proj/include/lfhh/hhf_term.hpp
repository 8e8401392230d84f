#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lfhh {

enum class SortTag : std::uint8_t { Tm, Ty, O, Arrow };

/// Simple types of the target language: `tm` for encoded LF objects, `ty`
/// for encoded LF base types, `o` for formulas, and arrows.
class SimpleType {
 public:
  SimpleType() : SimpleType(tm()) {}
  static SimpleType tm();
  static SimpleType ty();
  static SimpleType o();
  static SimpleType arrow(SimpleType from, SimpleType to);

  SortTag tag() const { return node_->tag; }
  const SimpleType& domain() const { return *node_->from; }
  const SimpleType& codomain() const { return *node_->to; }
  std::string str() const;

  friend bool operator==(const SimpleType& a, const SimpleType& b);
  friend bool operator!=(const SimpleType& a, const SimpleType& b) { return !(a == b); }

 private:
  struct Node {
    SortTag tag;
    std::shared_ptr<const SimpleType> from, to;
  };
  explicit SimpleType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class TermTag : std::uint8_t { Const, BVar, Eigen, Meta, Lam, App };

struct TermNode;

/// Simply typed λ-terms, kept β-normal by the smart constructors.
///
/// Bound variables are de Bruijn indices shared with the enclosing formula
/// quantifiers. Eigenvariables and meta-variables carry their simple type
/// and the universe level they were created at.
class Term {
 public:
  Term() = default;
  static Term constant(std::string name);
  static Term bvar(std::uint32_t index);
  static Term eigen(std::uint32_t id, std::string hint, SimpleType type, std::uint32_t level);
  static Term meta(std::uint32_t id, std::string hint, SimpleType type, std::uint32_t level);
  static Term lam(std::string hint, SimpleType type, Term body);
  /// Application with hereditary β-reduction when the head is an abstraction.
  static Term app(Term head, std::vector<Term> args);

  TermTag tag() const;
  bool is(TermTag t) const { return node_ && tag() == t; }
  const std::string& name() const;
  std::uint32_t id() const;  // eigen/meta id, or de Bruijn index
  std::uint32_t level() const;
  const SimpleType& type() const;  // eigen/meta type, or λ binder type
  const Term& body() const;
  const Term& head() const;
  const std::vector<Term>& args() const;

  explicit operator bool() const { return static_cast<bool>(node_); }
  const TermNode* get() const { return node_.get(); }

 private:
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermTag tag = TermTag::Const;
  std::string name;
  std::uint32_t id = 0;
  std::uint32_t level = 0;
  SimpleType type;
  Term body;  // Lam body, or App head
  std::vector<Term> args;
};

/// Head of a term viewed as a spine (the term itself when not an App).
const Term& term_head(const Term& t);
const std::vector<Term>& term_args(const Term& t);

/// Structural equality ignoring binder hints and binder types.
bool term_eq(const Term& a, const Term& b);
Term term_shift(const Term& t, std::uint32_t by, std::uint32_t cutoff = 0);
/// Replace loose index `depth` (default 0) by `value`, β-normalizing.
Term term_instantiate(const Term& body, const Term& value, std::uint32_t depth = 0);
/// η-long form of an atom (index, eigen, meta or constant) at `type`.
Term eta_expand(const Term& atom, const SimpleType& type);
/// If `t` is the η-expansion of an atom, return that atom.
std::optional<Term> eta_contract_atom(const Term& t);
bool term_has_meta(const Term& t);
bool term_has_eigen(const Term& t);

enum class FormulaTag : std::uint8_t { Atom, Top, Implies, Forall };

struct FormulaNode;

/// Hereditary Harrop formulas over the single predicate `hastype`.
class Formula {
 public:
  Formula() = default;
  static Formula atom(Term subject, Term classifier);
  static Formula top();
  static Formula implies(Formula lhs, Formula rhs);
  static Formula forall(std::string hint, SimpleType type, Formula body);

  FormulaTag tag() const;
  bool is(FormulaTag t) const { return node_ && tag() == t; }
  const Term& subject() const;
  const Term& classifier() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  const std::string& hint() const;
  const SimpleType& type() const;
  const Formula& body() const;

  explicit operator bool() const { return static_cast<bool>(node_); }

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  FormulaTag tag = FormulaTag::Top;
  Term subject, classifier;
  Formula lhs, rhs;  // rhs doubles as the Forall body
  std::string hint;
  SimpleType type;
};

bool formula_eq(const Formula& a, const Formula& b);
Formula formula_instantiate(const Formula& body, const Term& value, std::uint32_t depth = 0);
Formula formula_shift(const Formula& f, std::uint32_t by, std::uint32_t cutoff = 0);

enum class TranslationMode : std::uint8_t { Naive, Optimized };
std::string_view mode_name(TranslationMode m);

struct Clause {
  std::string origin;  // LF declaration the clause came from
  Formula formula;
};

struct ClauseSet {
  std::vector<Clause> clauses;
  TranslationMode mode = TranslationMode::Naive;
};

/// Clause text: `forall x1:tm. hastype x1 nat => hastype (s x1) nat.`
/// Bound variables are named x1, x2, ... in order of appearance.
std::string print_term(const Term& t);
std::string print_formula(const Formula& f);
std::string print_clauses(const ClauseSet& cs);

/// Parse clause text back into closed formulas. λ-binders are read as
/// `x\ t` and get sort `tm`, which term_eq ignores.
std::vector<Formula> parse_clauses(std::string_view text);

/// Sort-check a closed formula at `o` given the sorts of constants.
bool well_sorted(const Formula& f, const std::map<std::string, SimpleType, std::less<>>& constants);

}  // namespace lfhh
