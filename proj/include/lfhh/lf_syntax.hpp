#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lfhh {

/// Error raised by any LF-level operation. `rule()` names the judgment form
/// or pipeline stage that failed ("parse", "normalize", "check_object", ...).
class LfError : public std::runtime_error {
 public:
  LfError(std::string rule, const std::string& message)
      : std::runtime_error(rule + ": " + message), rule_(std::move(rule)) {}

  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string rule_;
};

enum class ExprTag : std::uint8_t { Type, Pi, Lam, App, BVar, Const, Meta };

struct ExprNode;

/// Kinds, type families and objects of LF share one immutable tree.
///
/// Binders are locally nameless: occurrences bound inside the expression are
/// de Bruijn indices, free variables (signature constants and opened
/// parameters) are named `Const` nodes, and query meta-variables are `Meta`
/// nodes. Binder names survive only as printing hints, so structural
/// equality is α-equality.
class Expr {
 public:
  Expr() = default;

  static Expr type();
  static Expr pi(std::string hint, Expr annot, Expr body);
  static Expr lam(std::string hint, Expr annot, Expr body);
  static Expr app(Expr head, Expr arg);
  static Expr bvar(std::uint32_t index);
  static Expr constant(std::string name);
  static Expr meta(std::string name);

  ExprTag tag() const;
  bool is(ExprTag t) const { return node_ && tag() == t; }
  /// Binder hint for Pi/Lam, identifier for Const/Meta.
  const std::string& name() const;
  std::uint32_t index() const;
  const Expr& annot() const;
  const Expr& body() const;
  const Expr& head() const;
  const Expr& arg() const;

  explicit operator bool() const { return static_cast<bool>(node_); }
  const ExprNode* get() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  ExprTag tag = ExprTag::Type;
  std::string name;
  std::uint32_t index = 0;
  Expr left;   // annot (Pi/Lam) or head (App)
  Expr right;  // body (Pi/Lam) or arg (App)
};

/// Head and arguments of an application spine `h M1 ... Mn`.
struct Spine {
  Expr head;
  std::vector<Expr> args;
};

Spine spine_of(const Expr& e);
Expr apply(Expr head, const std::vector<Expr>& args);

/// Structural equality, i.e. α-equivalence.
bool alpha_eq(const Expr& a, const Expr& b);

/// Replace the loose index 0 of `body` by `value`.
Expr instantiate(const Expr& body, const Expr& value);
/// Turn free occurrences of the named variable into the loose index 0.
Expr abstract(const Expr& e, std::string_view name);
Expr shift(const Expr& e, std::uint32_t by, std::uint32_t cutoff = 0);
/// Does the loose index `index` occur in `e`?
bool uses_bvar(const Expr& e, std::uint32_t index = 0);
bool occurs_free(const Expr& e, std::string_view name);
bool has_meta(const Expr& e);
std::vector<std::string> free_names(const Expr& e);
std::vector<std::string> meta_names(const Expr& e);

/// Pi/Lam whose body mentions the named free variable.
Expr pi_over(const std::string& name, Expr annot, const Expr& body);
Expr lam_over(const std::string& name, Expr annot, const Expr& body);

/// Simultaneous, capture-avoiding substitution for free variables.
using Subst = std::map<std::string, Expr, std::less<>>;
Expr substitute(const Expr& e, const Subst& s);
/// Same, for meta-variables.
Expr substitute_metas(const Expr& e, const Subst& s);

/// If `e` is the η-expansion of an atom (constant or index), return it.
std::optional<Expr> eta_atom(const Expr& e);

/// Fresh parameter names `hint#N`. `#` cannot appear in parsed identifiers,
/// so these never collide with source names. Each task owns its supply.
class NameSupply {
 public:
  NameSupply() = default;
  /// Start past any `#N` suffix already present in the given expressions.
  template <typename... Es>
  static NameSupply avoiding(const Es&... es) {
    NameSupply s;
    (s.reserve_past(es), ...);
    return s;
  }
  void reserve_past(const Expr& e);
  std::string fresh(std::string_view hint);

 private:
  std::uint64_t next_ = 1;
};

enum class DeclSort : std::uint8_t { Kind, Type };

struct Decl {
  std::string name;
  Expr classifier;
  DeclSort sort = DeclSort::Type;
  int line = 0;  // source position of the name, 0 when not parsed
  int col = 0;
};

/// Ordered typed constant declarations; also serves as the LF context.
class Signature {
 public:
  /// Throws LfError on a duplicate name.
  void add(Decl d);
  const std::vector<Decl>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Decl* find(std::string_view name) const;
  std::optional<std::size_t> index_of(std::string_view name) const;
  Signature prefix(std::size_t n) const;

 private:
  std::vector<Decl> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A classifier is a kind when its Π-spine ends in `type`.
DeclSort sort_of_classifier(const Expr& classifier);

// --- concrete syntax ------------------------------------------------------

Signature parse_signature(std::string_view text);

struct ParsedQuery {
  Expr goal_type;
  std::vector<std::string> metas;  // first-occurrence order
};

/// Uppercase-initial identifiers that are neither bound nor declared in `sig`
/// become meta-variables.
ParsedQuery parse_query(std::string_view text, const Signature& sig);

/// Parse a single expression; unknown identifiers become free constants.
Expr parse_expr(std::string_view text);

std::string pretty_print(const Expr& e);
std::string print_signature(const Signature& sig);

// --- normalization --------------------------------------------------------

struct NormalizeOptions {
  std::uint64_t step_budget = 1'000'000;
};

/// Meta-variable classifiers discovered while normalizing a query.
struct MetaTyping {
  std::map<std::string, Expr, std::less<>> types;
  std::vector<std::string> order;
};

/// βη-long form of `e` at `classifier`. The classifier is `type` for types,
/// a kind for type families, or a type for objects. Heads are looked up in
/// `sig`. Meta-variables are accepted only when `metas` is given; their
/// classifiers are recorded at first (bare) occurrence.
Expr normalize(const Signature& sig, const Expr& e, const Expr& classifier,
               const NormalizeOptions& opts = {}, MetaTyping* metas = nullptr);
Expr normalize_kind(const Signature& sig, const Expr& kind,
                    const NormalizeOptions& opts = {});

/// Canonical form of every classifier, each under its preceding prefix.
Signature canonicalize(const Signature& sig, const NormalizeOptions& opts = {});

}  // namespace lfhh
