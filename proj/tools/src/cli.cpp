#include "dpplimits/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <ostream>

#include "dpplimits/config.hpp"
#include "dpplimits/error.hpp"
#include "dpplimits/experiments.hpp"

namespace dpplimits {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete DPP kernels: experiments and verification checks", "dpp-limits"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string output;
  bool quiet = false;

  for (const auto kind : {ExperimentKind::coreset, ExperimentKind::sphere, ExperimentKind::usvt,
                          ExperimentKind::checks}) {
    auto* sub = app.add_subcommand(std::string(to_string(kind)));
    sub->add_option("--config", config_path, "Configuration file")->required();
    sub->add_option("--seed", seed, "Override the configured seed");
    sub->add_option("--out", output, "CSV output path (default: stdout)");
    sub->add_option("--threads", threads, "Worker threads, 0 for all cores");
    sub->add_flag("--quiet", quiet, "Suppress progress logging");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "dpp-limits: " << e.what() << '\n';
    return kExitConfigError;
  }

  const auto kind = *parse_experiment_kind(app.get_subcommands().front()->get_name());
  ExperimentConfig config;
  try {
    config = load_config(config_path, kind);
  } catch (const ConfigError& e) {
    err << "dpp-limits: " << config_path << ':' << e.line() << ": " << e.field() << ": " << e.what() << '\n';
    return kExitConfigError;
  }
  if (seed) config.seed = *seed;
  if (threads) config.threads = *threads;
  if (!output.empty()) config.output = output;

  ResultTable table(config.seed, config_hash(config));
  try {
    table = run_experiment(config, quiet ? nullptr : &err);
  } catch (const InvalidArgument& e) {
    err << "dpp-limits: invalid parameters: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << "dpp-limits: " << e.what() << '\n';
    return kExitCheckFailure;
  }

  if (config.output.empty()) {
    table.write_csv(out);
  } else {
    std::ofstream file(config.output);
    if (!file) {
      err << "dpp-limits: cannot write '" << config.output << "'\n";
      return kExitConfigError;
    }
    table.write_csv(file);
  }
  if (kind == ExperimentKind::checks && !all_checks_passed(table)) {
    err << "dpp-limits: one or more checks failed\n";
    return kExitCheckFailure;
  }
  return kExitSuccess;
}

}  // namespace dpplimits
