#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded unless redirected.
Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " CQSJ_BIN " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& rel) { return std::string(CQSJ_DATA_DIR) + "/" + rel; }

std::size_t lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST(Cli, ClassifyRev) {
  const auto r = run("classify --query " + data("queries/q_rev.cq"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("first-solution: conditionally hard (sHyperclique; Thm 3.5)"), std::string::npos);
}

TEST(Cli, ClassifyJson) {
  const auto r = run("classify --json --query " + data("queries/spike_q3.cq"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"verdicts\""), std::string::npos);
}

TEST(Cli, EnumerateMirrorOnEncodedDiamond) {
  const auto r = run("enumerate --engine mirror --query " + data("queries/q_diamond.cq") + " --db " +
                     data("encoded_diamond.facts"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), 4u);
}

TEST(Cli, EnumerateLimit) {
  const auto r = run("enumerate --engine oracle --limit 1 --query " + data("queries/q_path2f.cq") + " --db " +
                     data("path.facts"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), 1u);
}

TEST(Cli, InapplicableEngineExitCode) {
  EXPECT_EQ(run("enumerate --engine untangle --query " + data("queries/ex48.cq") + " --db " + data("path.facts")).code,
            3);
}

TEST(Cli, InputErrorExitCodes) {
  EXPECT_EQ(run("classify --query /nonexistent.cq").code, 2);
  EXPECT_EQ(run("classify").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
  EXPECT_EQ(run("gadget utd-spike-q4 --input " + data("utd_noparts.graph")).code, 2);
}

TEST(Cli, VerifyPassesAndDetectsCorruption) {
  const std::string args = "verify --query " + data("queries/q_diamond.cq") + " --db " + data("encoded_diamond.facts");
  const auto ok = run(args);
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out.rfind("PASS", 0), 0u);
  const auto bad = run(args, "CQSJ_CORRUPT_ENGINE=1");
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.out.rfind("FAIL", 0), 0u);
}

TEST(Cli, VerifyEmptyDatabase) {
  EXPECT_EQ(run("verify --query " + data("queries/q_fig1.cq") + " --db " + data("empty.facts")).code, 0);
}

TEST(Cli, BenchDelayReportsClass) {
  const auto r = run("bench-delay --engine acyclic --sizes 200,400 --query " + data("queries/q_path2f.cq"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("class: CONSTANT"), std::string::npos);
}

TEST(Cli, GadgetWritesFacts) {
  const auto out = std::filesystem::temp_directory_path() / "cqsj_cli_gadget.facts";
  const auto r = run("gadget triangle-untangle2 --input " + data("triangle.graph") + " --out " + out.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("19 facts"), std::string::npos);
  std::ifstream in(out);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(lines(text), 19u);
  std::filesystem::remove(out);
}

TEST(Cli, EncodingTrickFromColoredFacts) {
  const auto r = run("gadget encoding-trick --query " + data("queries/q_diamond.cq") + " --input " +
                     data("colored_diamond.facts"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out), 4u);
  EXPECT_NE(r.out.find("R(pair(a,x),pair(b,u))."), std::string::npos);
}
