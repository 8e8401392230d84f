#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "lfhh/pipeline.hpp"
#include "support.hpp"

namespace lfhh {
namespace {

Expr E(std::string_view s) { return parse_expr(s); }

class Kernel : public ::testing::Test {
 protected:
  Signature sig = load_signature(test::read_golden("append.lf"));
};

// Independent count of rule nodes.
std::size_t count_nodes(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += count_nodes(p);
  return n;
}

TEST(CheckContext, AppendAndEmpty) {
  EXPECT_NO_THROW(check_context(canonicalize(parse_signature(test::read_golden("append.lf")))));
  Derivation d = check_context(Signature{});
  EXPECT_EQ(d.rule, Rule::NullCtx);
}

TEST(CheckContext, UnboundConstant) {
  try {
    load_signature("c : d.");
    FAIL() << "accepted";
  } catch (const LfError& e) {
    EXPECT_NE(std::string(e.what()).find("unbound constant d"), std::string::npos) << e.what();
  }
}

TEST(CheckContext, IllTypedDeclaration) {
  EXPECT_THROW(load_signature("nat : type. z : nat. bad : nat z."), LfError);
  EXPECT_THROW(load_signature("nat : type. list : type. nil : list. v : nat -> type. w : v nil."), LfError);
}

TEST_F(Kernel, CheckKind) {
  EXPECT_EQ(check_kind(sig, Expr::type()).rule, Rule::TypeKind);
  EXPECT_EQ(check_kind(sig, E("{n:nat} type")).rule, Rule::PiKind);
  try {
    check_kind(sig, E("{n:nat} nat"));
    FAIL() << "accepted";
  } catch (const LfError& e) {
    EXPECT_NE(std::string(e.what()).find("kind expected"), std::string::npos) << e.what();
  }
}

TEST_F(Kernel, CheckType) {
  Derivation d = check_type(sig, E("append nil nil nil"));
  EXPECT_EQ(d.rule, Rule::BackchainFam);
  EXPECT_EQ(d.premises.size(), 3u);
  EXPECT_EQ(check_type(sig, E("{K:list} append nil K K")).rule, Rule::PiFam);
  try {
    check_type(sig, E("append z nil nil"));
    FAIL() << "accepted";
  } catch (const LfError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("premise 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("expected list"), std::string::npos) << msg;
  }
}

TEST_F(Kernel, CheckTypeArityAndUnbound) {
  EXPECT_THROW(check_type(sig, E("append nil nil")), LfError);
  EXPECT_THROW(check_type(sig, E("frob nil")), LfError);
}

TEST_F(Kernel, AppNilDerivationSize) {
  // Backchain on appNil with one premise for nil.
  Derivation d = check_object(sig, E("appNil nil"), E("append nil nil nil"));
  EXPECT_EQ(d.rule, Rule::BackchainObj);
  EXPECT_EQ(d.head, "appNil");
  EXPECT_EQ(derivation_size(d), 2u);
  EXPECT_EQ(count_nodes(d), 2u);
  EXPECT_EQ(derivation_trace(d), "(backchain-obj \"appNil nil : append nil nil nil\" ((backchain-obj \"nil : list\" ())))");
}

TEST_F(Kernel, IdentityViaAbsObj) {
  Derivation d = check_object(sig, E("[x:nat] x"), E("{x:nat} nat"));
  EXPECT_EQ(d.rule, Rule::AbsObj);
  EXPECT_EQ(derivation_size(d), 2u);
  EXPECT_EQ(count_nodes(d), 2u);
}

TEST_F(Kernel, QueryInhabitant) {
  Expr proof = E("appCons z nil (cons (s z) nil) (cons (s z) nil) (appNil (cons (s z) nil))");
  Derivation d = check_object(sig, proof, E("append (cons z nil) (cons (s z) nil) (cons z (cons (s z) nil))"));
  EXPECT_EQ(d.head, "appCons");
  EXPECT_EQ(d.premises.size(), 5u);
  // appCons; z; nil; cons (s z) nil (3) twice; appNil with its list (4).
  EXPECT_EQ(derivation_size(d), 16u);
  EXPECT_EQ(count_nodes(d), 16u);
}

TEST_F(Kernel, RejectsWrongObjects) {
  EXPECT_THROW(check_object(sig, E("appNil nil"), E("append nil nil (cons z nil)")), LfError);
  EXPECT_THROW(check_object(sig, E("[x:nat] x"), E("nat")), LfError);
  EXPECT_THROW(check_object(sig, E("z"), E("{x:nat} nat")), LfError);
  try {
    check_object(sig, E("appCons z nil nil nil (appNil z)"), E("append (cons z nil) nil (cons z nil)"));
    FAIL() << "accepted";
  } catch (const LfError& e) {
    EXPECT_NE(std::string(e.what()).find("premise 5"), std::string::npos) << e.what();
  }
}

TEST_F(Kernel, RejectsMetaVariables) {
  EXPECT_THROW(check_object(sig, Expr::meta("M"), E("nat")), LfError);
  EXPECT_THROW(check_type(sig, Expr::app(Expr::constant("append"), Expr::meta("L"))), LfError);
}

TEST_F(Kernel, NormalizesAtTheBoundary) {
  EXPECT_NO_THROW(check_object(sig, E("s"), E("nat -> nat")));
  EXPECT_NO_THROW(check_object(sig, E("([x:nat] s x) z"), E("nat")));
}

TEST_F(Kernel, Deterministic) {
  Expr proof = E("appCons z nil nil nil (appNil nil)");
  Expr type = E("append (cons z nil) nil (cons z nil)");
  EXPECT_EQ(derivation_trace(check_object(sig, proof, type)), derivation_trace(check_object(sig, proof, type)));
}

// Every subject in an accepted derivation is already canonical.
void expect_canonical_subjects(const Signature& sig, const Derivation& d) {
  // Judgments under opened parameters are skipped.
  if (d.rule == Rule::BackchainObj) {
    bool closed = true;
    for (const auto& n : free_names(d.conclusion.subject)) closed = closed && sig.find(n);
    for (const auto& n : free_names(d.conclusion.classifier)) closed = closed && sig.find(n);
    if (closed) {
      Expr again = normalize(sig, d.conclusion.subject, d.conclusion.classifier);
      EXPECT_TRUE(alpha_eq(again, d.conclusion.subject)) << pretty_print(d.conclusion.subject);
    }
  }
  for (const auto& p : d.premises) expect_canonical_subjects(sig, p);
}

TEST_F(Kernel, SubjectsAreCanonical) {
  Derivation d = check_object(sig, E("appCons z nil (cons (s z) nil) (cons (s z) nil) (appNil (cons (s z) nil))"),
                              E("append (cons z nil) (cons (s z) nil) (cons z (cons (s z) nil))"));
  expect_canonical_subjects(sig, d);
}

// Randomized kernel properties.

class KernelGenerated : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(KernelGenerated, WeakeningAndDeterminism) {
  std::mt19937_64 rng(GetParam());
  auto rs = test::random_signature(rng, false);
  Signature sig = load_signature(rs.text);
  Signature wider = load_signature(rs.text + "fresh_t : type.\nfresh_c : fresh_t -> d0.\n");
  test::ObjectGen gen(sig, rng);
  int checked = 0;
  for (int k = 0; k < 10; ++k) {
    auto a = gen.type(2);
    if (!a) continue;
    auto m = gen.object(*a, 3);
    if (!m) continue;
    Derivation d = check_object(sig, *m, *a);
    Derivation w = check_object(wider, *m, *a);
    EXPECT_EQ(derivation_size(d), derivation_size(w));
    EXPECT_EQ(derivation_trace(d), derivation_trace(check_object(sig, *m, *a)));
    expect_canonical_subjects(sig, d);
    ++checked;
  }
  EXPECT_GT(checked, 0) << rs.text;
}

INSTANTIATE_TEST_SUITE_P(Seeds, KernelGenerated, ::testing::Range<std::uint64_t>(1, 31));

}  // namespace
}  // namespace lfhh
