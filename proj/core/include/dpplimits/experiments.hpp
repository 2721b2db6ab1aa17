#pragma once

#include <iosfwd>

#include "dpplimits/config.hpp"
#include "dpplimits/result_table.hpp"

namespace dpplimits {

/// The integrand f(x, y, z) = z^2 and its exact integral over S^2.
inline constexpr double kSphereReference = 4.0 * 3.14159265358979323846 / 3.0;

// Every runner derives one RNG stream per (replicate, phase) before any work
// is dispatched and reduces replicates in index order, so the table does not
// depend on config.threads. Progress and per-phase timings go to `log`.

/// Rows: param = m, method iid|dpp, metric quantile_rel_error.
ResultTable run_coreset(const ExperimentConfig& config, std::ostream* log = nullptr);
/// Rows: param = m, method iid|dpp, metric mean_rel_error.
ResultTable run_sphere(const ExperimentConfig& config, std::ostream* log = nullptr);
/// Rows: param = n, method usvt, metrics frobenius_error, trace_error, rank.
ResultTable run_usvt(const ExperimentConfig& config, std::ostream* log = nullptr);
/// Rows: param = check name, method check, metrics pass (0/1) and slack.
ResultTable run_checks(const ExperimentConfig& config, std::ostream* log = nullptr);

ResultTable run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// False when any `pass` row is 0.
bool all_checks_passed(const ResultTable& table);

}  // namespace dpplimits
