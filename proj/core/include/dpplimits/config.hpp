#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dpplimits {

enum class ExperimentKind { coreset, sphere, usvt, checks };

std::string_view to_string(ExperimentKind kind) noexcept;
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) noexcept;

/// Parameters of one CLI run. Defaults are desk-scale; the shipped files
/// under configs/ note the reference settings next to them.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::checks;

  std::size_t n = 1000;
  std::size_t d = 2;
  std::vector<std::size_t> m_grid{1, 2, 4, 8, 16, 32, 64, 128, 256};
  std::vector<std::size_t> n_grid{200, 400, 800, 1600};
  std::size_t realizations = 1;  ///< independent clouds X_n
  std::size_t draws = 100;       ///< subsamples per (cloud, m, method)
  std::size_t thetas = 100;      ///< random theta values (coreset)
  std::size_t replicates = 10;   ///< graphs per n (usvt)
  double quantile = 0.9;

  std::optional<double> h1;  ///< unset: (log n / n)^(1/16)
  std::optional<double> h2;  ///< unset: (log n / n)^(1/4)
  std::size_t d_manifold = 2;

  double alpha = 1.0;
  double c = 1.0;
  double rho = 1.0;
  double length_scale = 0.5;

  std::vector<std::string> checks;  ///< parse_config fills in every known check when unset
  bool inject_corrupted = false;
  std::size_t trials = 1000;
  std::size_t check_draws = 100000;
  std::string bounds_csv;

  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string output;
};

/// Names accepted in `checks = ...`.
const std::vector<std::string>& known_checks();

/// Parses a flat key-value file: `key = value` lines, `#` comments, and
/// optional `[coreset]`-style section headers. Top-level keys and keys of the
/// section named after `kind` apply; other sections are ignored. Throws
/// ConfigError naming line and field.
ExperimentConfig parse_config(std::string_view text, ExperimentKind kind);
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentKind kind);

/// Hex FNV-1a hash of the canonical parameter listing (thread count and
/// output path excluded).
std::string config_hash(const ExperimentConfig& config);

}  // namespace dpplimits
