#include <algorithm>
#include <charconv>
#include <functional>
#include <set>

#include "lfhh/lf_scope.hpp"
#include "lfhh/lf_syntax.hpp"

namespace lfhh {

// --- construction ----------------------------------------------------------

Expr Expr::type() {
  static const Expr t{std::make_shared<const ExprNode>(ExprNode{ExprTag::Type, "type", 0, {}, {}})};
  return t;
}

Expr Expr::pi(std::string hint, Expr annot, Expr body) {
  return Expr{std::make_shared<const ExprNode>(
      ExprNode{ExprTag::Pi, std::move(hint), 0, std::move(annot), std::move(body)})};
}

Expr Expr::lam(std::string hint, Expr annot, Expr body) {
  return Expr{std::make_shared<const ExprNode>(
      ExprNode{ExprTag::Lam, std::move(hint), 0, std::move(annot), std::move(body)})};
}

Expr Expr::app(Expr head, Expr arg) {
  return Expr{std::make_shared<const ExprNode>(
      ExprNode{ExprTag::App, {}, 0, std::move(head), std::move(arg)})};
}

Expr Expr::bvar(std::uint32_t index) {
  return Expr{std::make_shared<const ExprNode>(ExprNode{ExprTag::BVar, {}, index, {}, {}})};
}

Expr Expr::constant(std::string name) {
  return Expr{std::make_shared<const ExprNode>(ExprNode{ExprTag::Const, std::move(name), 0, {}, {}})};
}

Expr Expr::meta(std::string name) {
  return Expr{std::make_shared<const ExprNode>(ExprNode{ExprTag::Meta, std::move(name), 0, {}, {}})};
}

ExprTag Expr::tag() const { return node_->tag; }
const std::string& Expr::name() const { return node_->name; }
std::uint32_t Expr::index() const { return node_->index; }
const Expr& Expr::annot() const { return node_->left; }
const Expr& Expr::body() const { return node_->right; }
const Expr& Expr::head() const { return node_->left; }
const Expr& Expr::arg() const { return node_->right; }

// --- spines ----------------------------------------------------------------

Spine spine_of(const Expr& e) {
  Spine s;
  Expr cur = e;
  while (cur.is(ExprTag::App)) {
    s.args.push_back(cur.arg());
    cur = cur.head();
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = cur;
  return s;
}

Expr apply(Expr head, const std::vector<Expr>& args) {
  for (const auto& a : args) head = Expr::app(std::move(head), a);
  return head;
}

// --- structural operations ------------------------------------------------

bool alpha_eq(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case ExprTag::Type:
      return true;
    case ExprTag::BVar:
      return a.index() == b.index();
    case ExprTag::Const:
    case ExprTag::Meta:
      return a.name() == b.name();
    case ExprTag::Pi:
    case ExprTag::Lam:
      return alpha_eq(a.annot(), b.annot()) && alpha_eq(a.body(), b.body());
    case ExprTag::App:
      return alpha_eq(a.head(), b.head()) && alpha_eq(a.arg(), b.arg());
  }
  return false;
}

namespace {

// Generic bottom-up rebuild that preserves sharing when nothing changes.
template <typename Leaf>
Expr rebuild(const Expr& e, std::uint32_t depth, const Leaf& leaf) {
  switch (e.tag()) {
    case ExprTag::Type:
      return e;
    case ExprTag::BVar:
    case ExprTag::Const:
    case ExprTag::Meta:
      return leaf(e, depth);
    case ExprTag::Pi:
    case ExprTag::Lam: {
      Expr a = rebuild(e.annot(), depth, leaf);
      Expr b = rebuild(e.body(), depth + 1, leaf);
      if (a.get() == e.annot().get() && b.get() == e.body().get()) return e;
      return e.tag() == ExprTag::Pi ? Expr::pi(e.name(), a, b) : Expr::lam(e.name(), a, b);
    }
    case ExprTag::App: {
      Expr h = rebuild(e.head(), depth, leaf);
      Expr x = rebuild(e.arg(), depth, leaf);
      if (h.get() == e.head().get() && x.get() == e.arg().get()) return e;
      return Expr::app(h, x);
    }
  }
  return e;
}

}  // namespace

Expr shift(const Expr& e, std::uint32_t by, std::uint32_t cutoff) {
  if (by == 0) return e;
  return rebuild(e, cutoff, [by](const Expr& leaf, std::uint32_t depth) {
    if (leaf.tag() == ExprTag::BVar && leaf.index() >= depth) return Expr::bvar(leaf.index() + by);
    return leaf;
  });
}

Expr instantiate(const Expr& body, const Expr& value) {
  return rebuild(body, 0, [&value](const Expr& leaf, std::uint32_t depth) {
    if (leaf.tag() != ExprTag::BVar) return leaf;
    if (leaf.index() == depth) return shift(value, depth);
    if (leaf.index() > depth) return Expr::bvar(leaf.index() - 1);
    return leaf;
  });
}

Expr abstract(const Expr& e, std::string_view name) {
  return rebuild(e, 0, [name](const Expr& leaf, std::uint32_t depth) {
    if (leaf.tag() == ExprTag::Const && leaf.name() == name) return Expr::bvar(depth);
    if (leaf.tag() == ExprTag::BVar && leaf.index() >= depth) return Expr::bvar(leaf.index() + 1);
    return leaf;
  });
}

// Opened parameters carry a `#N` suffix; the binder keeps the source hint.
Expr pi_over(const std::string& name, Expr annot, const Expr& body) {
  return Expr::pi(name.substr(0, name.find('#')), std::move(annot), abstract(body, name));
}

Expr lam_over(const std::string& name, Expr annot, const Expr& body) {
  return Expr::lam(name.substr(0, name.find('#')), std::move(annot), abstract(body, name));
}

namespace {

template <typename Pred>
bool any_leaf(const Expr& e, std::uint32_t depth, const Pred& pred) {
  switch (e.tag()) {
    case ExprTag::Type:
      return false;
    case ExprTag::BVar:
    case ExprTag::Const:
    case ExprTag::Meta:
      return pred(e, depth);
    case ExprTag::Pi:
    case ExprTag::Lam:
      return any_leaf(e.annot(), depth, pred) || any_leaf(e.body(), depth + 1, pred);
    case ExprTag::App:
      return any_leaf(e.head(), depth, pred) || any_leaf(e.arg(), depth, pred);
  }
  return false;
}

template <typename Fn>
void each_leaf(const Expr& e, const Fn& fn) {
  any_leaf(e, 0, [&fn](const Expr& leaf, std::uint32_t) {
    fn(leaf);
    return false;
  });
}

}  // namespace

bool uses_bvar(const Expr& e, std::uint32_t index) {
  return any_leaf(e, 0, [index](const Expr& leaf, std::uint32_t depth) {
    return leaf.tag() == ExprTag::BVar && leaf.index() == index + depth;
  });
}

bool occurs_free(const Expr& e, std::string_view name) {
  return any_leaf(e, 0, [name](const Expr& leaf, std::uint32_t) {
    return leaf.tag() == ExprTag::Const && leaf.name() == name;
  });
}

bool has_meta(const Expr& e) {
  return any_leaf(e, 0, [](const Expr& leaf, std::uint32_t) { return leaf.tag() == ExprTag::Meta; });
}

std::vector<std::string> free_names(const Expr& e) {
  std::vector<std::string> out;
  each_leaf(e, [&out](const Expr& leaf) {
    if (leaf.tag() == ExprTag::Const && std::find(out.begin(), out.end(), leaf.name()) == out.end())
      out.push_back(leaf.name());
  });
  return out;
}

std::vector<std::string> meta_names(const Expr& e) {
  std::vector<std::string> out;
  each_leaf(e, [&out](const Expr& leaf) {
    if (leaf.tag() == ExprTag::Meta && std::find(out.begin(), out.end(), leaf.name()) == out.end())
      out.push_back(leaf.name());
  });
  return out;
}

Expr substitute(const Expr& e, const Subst& s) {
  if (s.empty()) return e;
  return rebuild(e, 0, [&s](const Expr& leaf, std::uint32_t depth) {
    if (leaf.tag() == ExprTag::Const) {
      auto it = s.find(leaf.name());
      if (it != s.end()) return shift(it->second, depth);
    }
    return leaf;
  });
}

Expr substitute_metas(const Expr& e, const Subst& s) {
  if (s.empty()) return e;
  return rebuild(e, 0, [&s](const Expr& leaf, std::uint32_t depth) {
    if (leaf.tag() == ExprTag::Meta) {
      auto it = s.find(leaf.name());
      if (it != s.end()) return shift(it->second, depth);
    }
    return leaf;
  });
}

std::optional<Expr> eta_atom(const Expr& e) {
  std::uint32_t k = 0;
  Expr body = e;
  while (body.is(ExprTag::Lam)) {
    body = body.body();
    ++k;
  }
  Spine sp = spine_of(body);
  if (sp.args.size() != k) return std::nullopt;
  for (std::uint32_t j = 0; j < k; ++j) {
    auto a = eta_atom(sp.args[j]);
    if (!a || !a->is(ExprTag::BVar) || a->index() != k - 1 - j) return std::nullopt;
  }
  if (sp.head.is(ExprTag::Const) || sp.head.is(ExprTag::Meta)) return sp.head;
  if (sp.head.is(ExprTag::BVar)) {
    if (sp.head.index() < k) return std::nullopt;
    return Expr::bvar(sp.head.index() - k);
  }
  return std::nullopt;
}

// --- names -------------------------------------------------------------------

void NameSupply::reserve_past(const Expr& e) {
  if (!e) return;
  each_leaf(e, [this](const Expr& leaf) {
    if (leaf.tag() != ExprTag::Const) return;
    auto pos = leaf.name().rfind('#');
    if (pos == std::string::npos) return;
    std::uint64_t n = 0;
    const char* first = leaf.name().data() + pos + 1;
    const char* last = leaf.name().data() + leaf.name().size();
    if (std::from_chars(first, last, n).ec == std::errc{} && n >= next_) next_ = n + 1;
  });
}

std::string NameSupply::fresh(std::string_view hint) {
  std::string base{hint.substr(0, hint.find('#'))};
  if (base.empty() || base == "_") base = "x";
  return base + "#" + std::to_string(next_++);
}

std::uint64_t Scope::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull ^ limit_;
  auto mix = [&h](std::string_view s) {
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  for (const auto& [name, _] : locals_) mix(name);
  return h;
}

// --- signatures -------------------------------------------------------------

void Signature::add(Decl d) {
  if (index_.count(d.name)) throw LfError("signature", "duplicate declaration of " + d.name);
  index_.emplace(d.name, entries_.size());
  entries_.push_back(std::move(d));
}

const Decl* Signature::find(std::string_view name) const {
  auto idx = index_of(name);
  return idx ? &entries_[*idx] : nullptr;
}

std::optional<std::size_t> Signature::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Signature Signature::prefix(std::size_t n) const {
  Signature s;
  for (std::size_t i = 0; i < n && i < entries_.size(); ++i) s.add(entries_[i]);
  return s;
}

DeclSort sort_of_classifier(const Expr& classifier) {
  Expr cur = classifier;
  while (cur.is(ExprTag::Pi)) cur = cur.body();
  return cur.is(ExprTag::Type) ? DeclSort::Kind : DeclSort::Type;
}

}  // namespace lfhh
