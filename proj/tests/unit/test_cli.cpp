#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "dpplimits/cli.hpp"
#include "test_helpers.hpp"

namespace dpplimits {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto path = testing::scratch(name);
  std::ofstream(path) << text;
  return path.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

const char* kSmallUsvt = "seed = 3\n[usvt]\nn_grid = [20, 40]\nreplicates = 3\nrho = 0.5\n";
const char* kSmallCoreset =
    "seed = 1\n[coreset]\nn = 40\nm_grid = [2, 4]\nrealizations = 3\ndraws = 10\nthetas = 5\n";
const char* kSmallSphere = "seed = 2\n[sphere]\nn = 80\nm_grid = [1, 4]\ndraws = 20\n";

TEST(Cli, UsvtWritesCsvToStdout) {
  const auto r = cli({"usvt", "--config", write_config("usvt.toml", kSmallUsvt), "--quiet"});
  ASSERT_EQ(r.code, kExitSuccess) << r.err;
  EXPECT_EQ(r.out.rfind("experiment,param,method,replicates,metric,value,seed,config_hash\n", 0), 0u);
  EXPECT_NE(r.out.find("usvt,40,usvt,3,frobenius_error,"), std::string::npos);
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, SeedOverrideAndOutFile) {
  const auto cfg = write_config("usvt_seed.toml", kSmallUsvt);
  const auto out = testing::scratch("usvt_out.csv").string();
  const auto r = cli({"usvt", "--config", cfg, "--seed", "77", "--out", out, "--quiet"});
  ASSERT_EQ(r.code, kExitSuccess) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto csv = read_file(out);
  EXPECT_NE(csv.find(",77,"), std::string::npos);
  const auto base = cli({"usvt", "--config", cfg, "--quiet"});
  EXPECT_NE(csv, base.out);
}

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(cli({"usvt", "--config", write_config("bad.toml", "rho = 0\n")}).code, kExitConfigError);
  EXPECT_EQ(cli({"usvt", "--config", "/nonexistent.toml"}).code, kExitConfigError);
  EXPECT_EQ(cli({"usvt"}).code, kExitConfigError);
  EXPECT_EQ(cli({"frobnicate", "--config", "x"}).code, kExitConfigError);
  EXPECT_EQ(cli({}).code, kExitConfigError);
  const auto r = cli({"coreset", "--config", write_config("bad2.toml", "n = 10\nm_grid = [20]\n")});
  EXPECT_EQ(r.code, kExitConfigError);
  EXPECT_NE(r.err.find(":2: m_grid"), std::string::npos) << r.err;
}

TEST(Cli, CorruptedKernelCheckExitsOne) {
  const auto cfg = write_config("corrupt.toml", "[checks]\nchecks = [kernel_validation]\ninject_corrupted = true\n");
  const auto r = cli({"checks", "--config", cfg, "--quiet"});
  EXPECT_EQ(r.code, kExitCheckFailure);
  EXPECT_NE(r.out.find("checks,kernel_validation,check,"), std::string::npos);
  const auto ok = write_config("clean.toml", "[checks]\nchecks = [kernel_validation]\n");
  EXPECT_EQ(cli({"checks", "--config", ok, "--quiet"}).code, kExitSuccess);
}

TEST(Cli, EmptyCheckListSucceeds) {
  const auto r = cli({"checks", "--config", write_config("none.toml", "checks = []\n"), "--quiet"});
  EXPECT_EQ(r.code, kExitSuccess) << r.err;
}

TEST(Cli, LogsStreamsUnlessQuiet) {
  const auto r = cli({"usvt", "--config", write_config("usvt_log.toml", kSmallUsvt)});
  ASSERT_EQ(r.code, kExitSuccess);
  EXPECT_NE(r.err.find("[usvt]"), std::string::npos) << r.err;
}

// Streams are derived per replicate, so the table must not depend on threads.
class ThreadInvariance : public ::testing::TestWithParam<std::pair<const char*, const char*>> {};

TEST_P(ThreadInvariance, IdenticalCsv) {
  const auto [kind, text] = GetParam();
  const auto cfg = write_config(std::string(kind) + "_threads.toml", text);
  const auto one = cli({kind, "--config", cfg, "--threads", "1", "--quiet"});
  const auto three = cli({kind, "--config", cfg, "--threads", "3", "--quiet"});
  ASSERT_EQ(one.code, kExitSuccess) << one.err;
  ASSERT_EQ(three.code, kExitSuccess) << three.err;
  EXPECT_EQ(one.out, three.out);
}

INSTANTIATE_TEST_SUITE_P(Experiments, ThreadInvariance,
                         ::testing::Values(std::pair{"usvt", kSmallUsvt}, std::pair{"coreset", kSmallCoreset},
                                           std::pair{"sphere", kSmallSphere}),
                         [](const auto& info) { return std::string(info.param.first); });

}  // namespace
}  // namespace dpplimits
