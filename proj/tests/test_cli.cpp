#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "support.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args, const std::string& input = "") {
  std::string cmd = std::string("WHITTEMORE_NO_COLOR=1 \"") + WHITTEMORE_BIN + "\" " + args + " 2>&1";
  if (!input.empty()) {
    const auto path = std::filesystem::temp_directory_path() / "whittemore_cli_stdin.wt";
    std::ofstream(path) << input;
    cmd += " < \"" + path.string() + "\"";
  } else {
    cmd += " < /dev/null";
  }
  Run r{0, ""};
  FILE* pipe = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0;) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string script(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("whittemore_cli_" + name);
  std::ofstream(path) << text;
  return "\"" + path.string() + "\"";
}

std::string sample(const std::string& name) { return std::string("\"") + WHITTEMORE_SAMPLES + "/" + name + "\""; }

}  // namespace

TEST(Cli, RunSimpson) {
  auto r = run("run " + sample("simpson.wt"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\n0.78\n0.8257142857142857\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\n0.8325462173856037\n0.778875\n"), std::string::npos);
}

TEST(Cli, RunIsDeterministic) {
  for (const char* name : {"front-door.wt", "concomitant.wt", "smoking.wt", "distribution.wt"}) {
    auto a = run("run " + sample(name));
    EXPECT_EQ(a.code, 0) << name << "\n" << a.out;
    EXPECT_EQ(a.out, run("run " + sample(name)).out);
  }
}

TEST(Cli, EmptyFile) {
  auto r = run("run " + script("empty.wt", ""));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "");
}

TEST(Cli, ScriptErrorsExitOne) {
  auto r = run("run " + script("unbound.wt", "(define a 1)\n  missing-name\n"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find(":2:3: error: unbound symbol 'missing-name'"), std::string::npos) << r.out;
  EXPECT_EQ(run("run " + script("syntax.wt", "(model")).code, 1);
  EXPECT_EQ(run("run /nonexistent/x.wt").code, 1);
}

TEST(Cli, OutputBeforeAnErrorIsKept) {
  auto r = run("run " + script("partial.wt", "1\n(frobnicate)\n2\n"));
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("1\n", 0), 0u);
  EXPECT_EQ(r.out.find("\n2\n"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("--bogus").code, 2);
  EXPECT_EQ(run("run").code, 2);
  EXPECT_EQ(run("--emit png " + sample("front-door.wt")).code, 2);
  EXPECT_EQ(run("run a.wt b.wt").code, 2);
}

TEST(Cli, VersionAndHelp) {
  auto v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, "whittemore 0.3.0\n");
  auto h = run("--help");
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("repl"), std::string::npos);
  EXPECT_NE(h.out.find("--emit"), std::string::npos);
}

TEST(Cli, EmitDot) {
  auto r = run("--emit dot " + script("emit_dot.wt", fixtures::front_door_text + std::string("\nfront-door\n")));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out, whittemore::to_dot(fixtures::front_door()));
}

TEST(Cli, EmitLatex) {
  auto r = run("--emit latex " +
               script("emit_latex.wt", fixtures::front_door_text + std::string("\n(identify front-door (q [:y] :do {:x 0}))\n")));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out, "\\sum_{z} \\left[ \\sum_{x} P(y \\mid x, z) P(x) \\right] P(z \\mid x)\n\\text{where: } x=0\n");
  EXPECT_EQ(run("--emit latex " + script("emit_bad.wt", "1")).code, 1);
}

TEST(Cli, ReplTranscriptMatchesScript) {
  const std::string text = std::string(fixtures::front_door_text) +
                           "\n(identify front-door\n  (q [:y] :do {:x 0}))\n(dot front-door)\n(q [:y])\n";
  auto as_script = run("run " + script("transcript.wt", text));
  auto as_repl = run("repl", text);
  EXPECT_EQ(as_script.code, 0);
  EXPECT_EQ(as_repl.code, 0);
  EXPECT_EQ(as_repl.out, as_script.out);
}

TEST(Cli, ReplReportsFailures) {
  auto r = run("repl", "(define a 1)\nb\na\n");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("unbound symbol 'b'"), std::string::npos);
  EXPECT_NE(r.out.find("\n1\n"), std::string::npos);
}
