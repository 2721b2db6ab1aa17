#include <gtest/gtest.h>

#include <sstream>

#include "dpplimits/config.hpp"
#include "dpplimits/error.hpp"
#include "dpplimits/result_table.hpp"

namespace dpplimits {
namespace {

ConfigError config_error(std::string_view text, ExperimentKind kind) {
  try {
    parse_config(text, kind);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return ConfigError(0, "", "");
}

TEST(Config, ParsesSectionsListsAndComments) {
  const auto cfg = parse_config(
      "# comment\nseed = 7\n[coreset]\nn = 50  # trailing\nm_grid = [2, 4,8]\nquantile = 0.75\n"
      "[usvt]\nn = 9999\n",
      ExperimentKind::coreset);
  EXPECT_EQ(cfg.kind, ExperimentKind::coreset);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.n, 50u);
  EXPECT_EQ(cfg.m_grid, (std::vector<std::size_t>{2, 4, 8}));
  EXPECT_DOUBLE_EQ(cfg.quantile, 0.75);
  EXPECT_EQ(cfg.checks, known_checks());
  EXPECT_FALSE(cfg.h1.has_value());
}

TEST(Config, OptionalBandwidths) {
  const auto cfg = parse_config("h1 = 0.5\nh2 = auto\nn = 300\n", ExperimentKind::sphere);
  EXPECT_DOUBLE_EQ(cfg.h1.value(), 0.5);
  EXPECT_FALSE(cfg.h2.has_value());
}

TEST(Config, ErrorsNameLineAndField) {
  struct Case {
    const char* text;
    ExperimentKind kind;
    std::size_t line;
    const char* field;
  };
  const Case cases[] = {
      {"seed = 1\nbogus = 3\n", ExperimentKind::usvt, 2, "bogus"},
      {"n = -4\n", ExperimentKind::coreset, 1, "n"},
      {"\n\nquantile = 1.5\n", ExperimentKind::coreset, 3, "quantile"},
      {"n = 10\nm_grid = [4, 20]\n", ExperimentKind::coreset, 2, "m_grid"},
      {"alpha = 0\n", ExperimentKind::usvt, 1, "alpha"},
      {"c = 2\n", ExperimentKind::usvt, 1, "c"},
      {"rho = -1\n", ExperimentKind::usvt, 1, "rho"},
      {"n_grid = [1, 10]\n", ExperimentKind::usvt, 1, "n_grid"},
      {"d_manifold = 3\n", ExperimentKind::sphere, 1, "d_manifold"},
      {"checks = [sampler_tv, nonsense]\n", ExperimentKind::checks, 1, "checks"},
      {"inject_corrupted = maybe\n", ExperimentKind::checks, 1, "inject_corrupted"},
      {"seed = 1\n[nowhere]\n", ExperimentKind::checks, 2, "section"},
      {"just words\n", ExperimentKind::checks, 1, "just words"},
  };
  for (const auto& c : cases) {
    const auto e = config_error(c.text, c.kind);
    EXPECT_EQ(e.line(), c.line) << c.text;
    EXPECT_EQ(e.field(), c.field) << c.text;
  }
}

TEST(Config, MissingFileIsConfigError) {
  EXPECT_THROW(load_config("/nonexistent/dir/cfg.toml", ExperimentKind::checks), ConfigError);
}

TEST(Config, HashIgnoresThreadsAndOutput) {
  auto a = parse_config("n = 300\n", ExperimentKind::coreset);
  auto b = a;
  b.threads = 8;
  b.output = "elsewhere.csv";
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.n = 101;
  EXPECT_NE(config_hash(a), config_hash(b));
  b = a;
  b.kind = ExperimentKind::sphere;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(ExperimentKind, RoundTrip) {
  for (const auto k : {ExperimentKind::coreset, ExperimentKind::sphere, ExperimentKind::usvt, ExperimentKind::checks})
    EXPECT_EQ(parse_experiment_kind(to_string(k)), k);
  EXPECT_FALSE(parse_experiment_kind("other").has_value());
}

TEST(ResultTable, CsvLayoutAndDuplicateRows) {
  ResultTable t(5, "abc");
  t.add({"usvt", "200", "usvt", 10, "rank", 3.0});
  t.add({"usvt", "200", "usvt", 10, "trace_error", 0.125});
  EXPECT_THROW(t.add({"usvt", "200", "usvt", 10, "rank", 4.0}), InvalidArgument);
  EXPECT_EQ(t.find("200", "usvt", "trace_error"), 0.125);
  EXPECT_FALSE(t.find("400", "usvt", "rank").has_value());
  std::ostringstream out;
  t.write_csv(out);
  EXPECT_EQ(out.str(),
            "experiment,param,method,replicates,metric,value,seed,config_hash\n"
            "usvt,200,usvt,10,rank,3,5,abc\n"
            "usvt,200,usvt,10,trace_error,0.125,5,abc\n");
}

}  // namespace
}  // namespace dpplimits
