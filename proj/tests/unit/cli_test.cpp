#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lfhh/cli.hpp"
#include "lfhh/hhf_term.hpp"
#include "support.hpp"

namespace lfhh {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("lfhh_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                       "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string write(const std::string& name, const std::string& text) {
    fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir;
  std::string append = test::golden_path("append.lf");
  std::string remark = test::golden_path("remark.lf");
};

TEST_F(Cli, Check) {
  Result r = run({"check", append});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "ok (9 declarations)\n");
  EXPECT_EQ(run({"check", write("empty.lf", "")}).out, "ok (0 declarations)\n");
}

TEST_F(Cli, CheckReportsLocation) {
  Result r = run({"check", write("bad.lf", "nat : type.\n  c : d.\n")});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find("2:3"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("unbound constant d"), std::string::npos) << r.err;
}

TEST_F(Cli, InputErrors) {
  EXPECT_EQ(run({"check", (dir / "missing.lf").string()}).code, kExitInput);
  EXPECT_EQ(run({"check", write("syntax.lf", "nat : : type.")}).code, kExitInput);
  EXPECT_EQ(run({"frobnicate"}).code, kExitInput);
  EXPECT_EQ(run({"solve", append, "nat", "--mode", "clever"}).code, kExitInput);
  EXPECT_EQ(run({"solve", append, "append z"}).code, kExitInput);
  EXPECT_EQ(run({}).code, kExitInput);
}

TEST_F(Cli, Help) { EXPECT_EQ(run({"--help"}).code, kExitOk); }

TEST_F(Cli, Analyze) {
  Result r = run({"analyze", append});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("appNil: K=rigid\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("s: arg1=guarded\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("non-rigid: s.arg1 cons.arg1 cons.arg2 appCons.arg5\n"), std::string::npos) << r.out;
  Result c = run({"analyze", remark});
  EXPECT_NE(c.out.find("c: x=guarded"), std::string::npos) << c.out;
  EXPECT_NE(c.out.find("non-rigid: c.x\n"), std::string::npos) << c.out;
}

TEST_F(Cli, TranslateMatchesGoldens) {
  for (auto [mode, golden] : {std::pair{"naive", "append_naive.hh"}, std::pair{"optimized", "append_optimized.hh"}}) {
    Result r = run({"translate", append, "--mode", mode});
    ASSERT_EQ(r.code, kExitOk);
    auto got = parse_clauses(r.out);
    auto want = parse_clauses(test::read_golden(golden));
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_TRUE(formula_eq(got[i], want[i])) << mode << " " << i;
  }
  EXPECT_EQ(run({"translate", write("empty.lf", "")}).out, "");
}

TEST_F(Cli, SolveAppendQuery) {
  Result r = run({"solve", append, "append (cons z nil) (cons (s z) nil) L"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("certified\n"), std::string::npos);
  EXPECT_NE(r.out.find("L = cons z (cons (s z) nil).\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("proof = appCons z nil (cons (s z) nil) (cons (s z) nil) (appNil (cons (s z) nil)).\n"),
            std::string::npos)
      << r.out;
  Result n = run({"solve", append, "append (cons z nil) (cons (s z) nil) L", "--mode", "naive",
                  "--iterative-deepening"});
  EXPECT_EQ(n.code, kExitOk);
  EXPECT_NE(n.out.find("L = cons z (cons (s z) nil).\n"), std::string::npos) << n.out;
}

TEST_F(Cli, SolveNamedProofAndNat) {
  Result r = run({"solve", append, "hastype M nat"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("M = z.\n"), std::string::npos) << r.out;
}

TEST_F(Cli, SolveNoSolution) {
  Result r = run({"solve", append, "append nil nil (cons z nil)", "--depth", "8"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "no solution within depth 8\n");
}

TEST_F(Cli, SolveResourceExhaustion) {
  Result r = run({"solve", append, "append (cons z nil) (cons (s z) nil) L", "--mode", "naive", "--budget", "1000"});
  EXPECT_EQ(r.code, kExitResource);
  EXPECT_NE(r.out.find("budget exceeded"), std::string::npos) << r.out;
}

TEST_F(Cli, SolveAllAndTrace) {
  Result r = run({"solve", append, "append X Y (cons z nil)", "--all"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("% 2 answers, search exhausted"), std::string::npos) << r.out;
  Result t = run({"solve", append, "append (cons z nil) (cons (s z) nil) L", "--trace"});
  EXPECT_NE(t.out.find("  bc appNil (cons (s z) nil)\n"), std::string::npos) << t.out;
}

TEST_F(Cli, SolveJson) {
  Result r = run({"solve", append, "append (cons z nil) (cons (s z) nil) L", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["mode"], "optimized");
  ASSERT_EQ(j["answers"].size(), 1u);
  EXPECT_EQ(j["answers"][0]["certified"], true);
  EXPECT_EQ(j["answers"][0]["bindings"]["L"], "cons z (cons (s z) nil)");
  EXPECT_EQ(j["answers"][0]["kernel_derivation_size"], 16);
  EXPECT_EQ(j["counters"]["backchain_steps"], 2);
}

TEST_F(Cli, SolveIsDeterministic) {
  std::vector<std::string> args{"solve", append, "append X Y (cons z (cons z nil))", "--all", "--format", "json"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST_F(Cli, NonRigidControlSolve) {
  Result r = run({"solve", remark, "p (num_n z)"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("no solution within depth 512"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1 branches cut by non-pattern unification"), std::string::npos) << r.out;
}

TEST_F(Cli, BenchCsv) {
  Result r = run({"bench", "--sizes", "0,4", "--mode", "optimized"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string header, row0, row4;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row4);
  EXPECT_EQ(header, "n,mode,backchain_steps,unify_calls,wall_ns");
  EXPECT_EQ(row0.rfind("0,optimized,1,", 0), 0u) << row0;
  EXPECT_EQ(row4.rfind("4,optimized,5,", 0), 0u) << row4;
}

TEST_F(Cli, BenchBothModes) {
  Result r = run({"bench", "--sizes", "0,3", "--format", "text"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("n=0 naive backchain_steps=2 "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("n=0 optimized backchain_steps=1 "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("n=3 naive backchain_steps=92 "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("n=3 optimized backchain_steps=4 "), std::string::npos) << r.out;
}

TEST_F(Cli, Compare) {
  Result r = run({"compare", append, "append (cons z nil) nil (cons z nil)"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("success agrees: yes"), std::string::npos);
  EXPECT_NE(r.out.find("answers alpha-equal: yes"), std::string::npos);
}

}  // namespace
}  // namespace lfhh
