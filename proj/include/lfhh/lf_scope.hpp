#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lfhh/lf_syntax.hpp"

namespace lfhh {

/// Lookup view used while descending under binders: a visible prefix of a
/// signature plus a stack of opened parameters, sharing one name supply.
class Scope {
 public:
  Scope(const Signature& sig, NameSupply& names)
      : sig_(&sig), limit_(sig.size()), names_(&names) {}
  Scope(const Signature& sig, std::size_t limit, NameSupply& names)
      : sig_(&sig), limit_(limit), names_(&names) {}

  struct Entry {
    Expr classifier;
    DeclSort sort;
    bool local;
  };

  std::optional<Entry> lookup(std::string_view name) const {
    for (auto it = locals_.rbegin(); it != locals_.rend(); ++it)
      if (it->first == name) return Entry{it->second, DeclSort::Type, true};
    auto idx = sig_->index_of(name);
    if (idx && *idx < limit_) {
      const Decl& d = sig_->entries()[*idx];
      return Entry{d.classifier, d.sort, false};
    }
    return std::nullopt;
  }

  bool declared(std::string_view name) const { return lookup(name).has_value(); }

  /// Open a binder: returns the fresh parameter name, already pushed.
  std::string open(std::string_view hint, Expr type) {
    std::string p = names_->fresh(hint);
    locals_.emplace_back(p, std::move(type));
    return p;
  }
  void push(std::string name, Expr type) { locals_.emplace_back(std::move(name), std::move(type)); }
  void pop() { locals_.pop_back(); }

  const std::vector<std::pair<std::string, Expr>>& locals() const { return locals_; }
  const Signature& signature() const { return *sig_; }
  std::size_t limit() const { return limit_; }
  NameSupply& names() { return *names_; }

  std::uint64_t fingerprint() const;

 private:
  const Signature* sig_;
  std::size_t limit_;
  NameSupply* names_;
  std::vector<std::pair<std::string, Expr>> locals_;
};

/// Pops on destruction.
class ScopedParam {
 public:
  ScopedParam(Scope& s, std::string_view hint, Expr type) : s_(s), name_(s.open(hint, std::move(type))) {}
  ~ScopedParam() { s_.pop(); }
  ScopedParam(const ScopedParam&) = delete;
  ScopedParam& operator=(const ScopedParam&) = delete;
  const std::string& name() const { return name_; }
  Expr var() const { return Expr::constant(name_); }

 private:
  Scope& s_;
  std::string name_;
};

struct NormalizeState {
  std::uint64_t budget;
  MetaTyping* metas = nullptr;
};

Expr normalize_in(Scope& scope, const Expr& e, const Expr& classifier, NormalizeState& st);
Expr normalize_kind_in(Scope& scope, const Expr& kind, NormalizeState& st);
/// β-reduce the head of `e` until it is not a redex.
Expr whnf(const Expr& e, NormalizeState& st);

}  // namespace lfhh
