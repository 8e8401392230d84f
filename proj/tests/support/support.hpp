#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lfhh/lf_syntax.hpp"

namespace lfhh::test {

std::string golden_path(std::string_view name);
std::string read_golden(std::string_view name);

std::string numeral(std::size_t k);
std::string list_of(const std::vector<std::size_t>& elems);

/// A query against the append signature. `deepen` marks queries whose
/// output list must be found by search; the naive program only reaches those
/// under iterative deepening.
struct CorpusQuery {
  std::string text;
  bool deepen = false;
};

/// Ground checks (true and false), searches for the concatenation, splits,
/// inhabitation and parametric queries, drawn from a seeded stream.
std::vector<CorpusQuery> append_corpus(std::uint64_t seed, std::size_t count);

/// Small acyclic signature: enumerated data sorts, data-indexed families,
/// constructors with dependent and higher-order premises. With `finite`
/// the data sorts have no recursive constructors, so search is finite.
struct RandomSignature {
  std::string text;
  std::vector<std::string> queries;  // closed base types, some with Π prefixes
};

RandomSignature random_signature(std::mt19937_64& rng, bool finite);

/// Type-directed generator of canonical objects. Locals are opened
/// parameters (free constants) with canonical classifiers.
class ObjectGen {
 public:
  ObjectGen(const Signature& sig, std::mt19937_64& rng) : sig_(sig), rng_(rng) {}

  std::optional<Expr> object(const Expr& type, int depth);
  /// A random canonical base type, or with probability `pi_prob` a Π-type.
  std::optional<Expr> type(int depth, double pi_prob = 0.3);

  std::vector<std::pair<std::string, Expr>> locals;
  /// Probability of trying locals before signature constants.
  double prefer_locals = 0.6;

 private:
  std::optional<Expr> base_object(const Expr& type, int depth);
  std::optional<Expr> try_head(const std::string& head, const Expr& classifier, const Expr& type, int depth);
  std::string fresh(std::string_view hint);

  const Signature& sig_;
  std::mt19937_64& rng_;
  std::uint64_t counter_ = 0;
};

/// One instance of the substitution property: Γ ⊢ N : B and Γ, x:B ⊢ M : A,
/// where Γ is the signature and x occurs free in M.
struct SubstInstance {
  Signature gamma;
  std::string x;
  Expr b, n, m, a;
};

/// Draw one instance; nullopt when the generator gives up on this draw.
std::optional<SubstInstance> substitution_instance(std::mt19937_64& rng, const Signature& gamma);

/// Target family of a type or kind-level classifier, skipping Π-binders.
std::string target_head(const Expr& classifier);

}  // namespace lfhh::test
