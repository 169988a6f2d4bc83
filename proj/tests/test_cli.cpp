#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string("\"") + PERMREG_CLI_PATH + "\" " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json parse(const CliRun& r) { return nlohmann::json::parse(r.out); }

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("permreg_cli_test_" + name);
}

}  // namespace

TEST(Cli, Gen) {
  const CliRun r = run("gen --kind reverse --n 5");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "4 3 2 1 0\n");
  EXPECT_EQ(run("gen --kind random --n 50 --seed 3").out, run("gen --kind random --n 50 --seed 3").out);
  EXPECT_EQ(run("gen --kind sideways --n 5").code, 1);
}

TEST(Cli, CountExact) {
  const CliRun r = run("count --gen identity --n 100 --tau \"0 1\"");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(parse(r)["exact"], 4950);
  EXPECT_EQ(run("count --gen identity --n 100 --tau \"0 0\"").code, 1);
}

TEST(Cli, CountBoth) {
  const CliRun r = run("count --gen random --n 200 --seed 1 --tau \"0 2 1\" --both");
  ASSERT_EQ(r.code, 0);
  const auto j = parse(r);
  EXPECT_TRUE(j["within_bound"].get<bool>());
  EXPECT_GE(j["k"].get<int>(), 20);
}

TEST(Cli, InputFileAndOutputFile) {
  const auto in = scratch("in.txt");
  const auto out = scratch("out.json");
  {
    std::ofstream f(in);
    f << "2 0 3 1\n";
  }
  const CliRun r = run("--output \"" + out.string() + "\" count --input \"" + in.string() + "\" --tau \"1 0\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(out);
  const auto j = nlohmann::json::parse(f);
  EXPECT_EQ(j["exact"], 3);
  EXPECT_EQ(run("count --input \"" + scratch("missing.txt").string() + "\" --tau \"1 0\"").code, 1);
  std::filesystem::remove(in);
  std::filesystem::remove(out);
}

TEST(Cli, PartitionDeterministic) {
  const std::string args = "partition --gen random --n 1024 --seed 7 --eps 0.25";
  const CliRun a = run(args);
  const CliRun b = run("--threads 1 " + args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(parse(a)["status"], "success");
}

TEST(Cli, PartitionExhaustedExitsTwo) {
  const CliRun r = run("partition --gen random --n 256 --eps 0.25 --max-parts 2");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(parse(r)["status"], "exhausted");
}

TEST(Cli, PartitionUniform) {
  const CliRun r = run("partition --gen random --n 512 --seed 2 --eps 0.25 --mode uniform");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(parse(r)["verification"]["uniform"].get<bool>());
  EXPECT_EQ(run("partition --gen random --n 512 --eps 0.6 --mode uniform").code, 1);
}

TEST(Cli, Destroy) {
  const CliRun r = run("destroy --gen interleave --n 200 --tau \"1 0\" --eps 0.02");
  ASSERT_EQ(r.code, 0);
  const auto j = parse(r);
  EXPECT_TRUE(j["verified"].get<bool>());
  EXPECT_EQ(j["audit"]["total"], j["pairs"].size());
  EXPECT_FALSE(parse(run("destroy --gen interleave --n 50 --tau \"1 0\" --eps 0.02 --no-verify")).contains("verified"));
}

TEST(Cli, Qr) {
  const CliRun r = run("qr --gen random --n 256 --seed 4 --kmax 8");
  ASSERT_EQ(r.code, 0);
  const auto j = parse(r);
  EXPECT_EQ(j["n"], 256);
  EXPECT_EQ(j["eigenvalue_profile"].size(), 8u);
  for (const char* key : {"D_star", "D", "SP", "two_subseq", "m_subseq", "translation", "near_identity"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Cli, ThreadsFromEnvironment) {
  const std::string args = "qr --gen random --n 200 --seed 9";
  EXPECT_EQ(run("--threads 1 " + args).out, run(args).out);
  const CliRun env = run("");
  EXPECT_EQ(env.code, 1);
  setenv("PERMREG_THREADS", "2", 1);
  EXPECT_EQ(run(args).out, run("--threads 1 " + args).out);
  setenv("PERMREG_THREADS", "lots", 1);
  EXPECT_EQ(run(args).code, 1);
  unsetenv("PERMREG_THREADS");
}
