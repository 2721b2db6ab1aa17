#include "dpplimits/experiments.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cstdio>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>

#include "dpplimits/checks.hpp"
#include "dpplimits/dpp.hpp"
#include "dpplimits/error.hpp"
#include "dpplimits/estimators.hpp"
#include "dpplimits/kernel_builders.hpp"
#include "dpplimits/parallel.hpp"
#include "dpplimits/point_cloud.hpp"
#include "dpplimits/statistics.hpp"

namespace dpplimits {
namespace {

enum ExperimentTag : std::uint64_t { kCoresetTag = 1, kSphereTag, kUsvtTag, kChecksTag };

// Thread-safe phase logger; a null stream disables it.
class Log {
 public:
  explicit Log(std::ostream* out, std::string_view experiment) : out_(out), experiment_(experiment) {}

  template <typename... Args>
  void line(const Args&... args) {
    if (!out_) return;
    std::lock_guard lock(mutex_);
    *out_ << '[' << experiment_ << "] ";
    (*out_ << ... << args);
    *out_ << '\n';
  }

 private:
  std::ostream* out_;
  std::string experiment_;
  std::mutex mutex_;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string hex(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

SeededRng make_rng(const ExperimentConfig& config, std::initializer_list<std::uint64_t> tags) {
  return SeededRng(config.seed, derive_stream(tags));
}

double mean(std::span<const double> values) {
  return values.empty() ? 0.0 : pairwise_sum(values) / static_cast<double>(values.size());
}

std::size_t max_order(const ExperimentConfig& config) {
  return *std::max_element(config.m_grid.begin(), config.m_grid.end());
}

ResultTable empty_table(const ExperimentConfig& config) {
  return ResultTable(config.seed, config_hash(config));
}

// Per-(m, method) results of one replicate, laid out [m index][method].
using ReplicateGrid = std::vector<std::array<double, 2>>;

void add_grid_rows(ResultTable& table, const ExperimentConfig& config, std::string_view metric,
                   const std::vector<ReplicateGrid>& replicates) {
  const char* methods[] = {"iid", "dpp"};
  for (std::size_t mi = 0; mi < config.m_grid.size(); ++mi) {
    for (std::size_t method = 0; method < 2; ++method) {
      std::vector<double> values;
      for (const auto& grid : replicates) values.push_back(grid[mi][method]);
      table.add({std::string(to_string(config.kind)), std::to_string(config.m_grid[mi]), methods[method],
                 replicates.size(), std::string(metric), mean(values)});
    }
  }
}

}  // namespace

ResultTable run_coreset(const ExperimentConfig& config, std::ostream* log_stream) {
  Log log(log_stream, "coreset");
  const std::size_t m_max = max_order(config);
  if (m_max > config.n) {
    throw InfeasibleError(static_cast<double>(m_max), "run_coreset: m exceeds n");
  }
  const auto d = static_cast<Eigen::Index>(config.d);
  std::vector<ReplicateGrid> results(config.realizations);
  Stopwatch total;

  parallel_for(config.realizations, config.threads, [&](std::size_t r) {
    Stopwatch clock;
    auto cloud_rng = make_rng(config, {kCoresetTag, r, 0});
    auto theta_rng = make_rng(config, {kCoresetTag, r, 1});
    const auto cloud = sample_uniform_cube(config.n, config.d, cloud_rng);

    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(
        static_cast<Eigen::Index>(config.thetas), d);
    for (Eigen::Index t = 0; t < rows.rows(); ++t) {
      for (Eigen::Index k = 0; k < d; ++k) rows(t, k) = theta_rng.uniform(-1.0, 1.0);
    }
    auto theta_row = [&](Eigen::Index t) {
      return std::span<const double>(rows.data() + t * d, config.d);
    };

    std::vector<double> losses(config.thetas);
    for (std::size_t t = 0; t < config.thetas; ++t) losses[t] = true_loss(cloud, theta_row(static_cast<Eigen::Index>(t)));
    const auto scores = sensitivity_scores(cloud);
    const Eigen::MatrixXd basis = ope_basis(cloud, m_max);
    log.line("realization ", r, ": cloud stream ", hex(cloud_rng.stream_id()), ", theta stream ",
             hex(theta_rng.stream_id()), ", basis of order ", m_max, " in ", clock.seconds(), " s");

    auto worst_error = [&](const WeightedEstimate& est) {
      double worst = 0.0;
      for (std::size_t t = 0; t < config.thetas; ++t) {
        const double value = weighted_loss(cloud, est, theta_row(static_cast<Eigen::Index>(t)));
        worst = std::max(worst, std::abs(value - losses[t]) / losses[t]);
      }
      return worst;
    };

    ReplicateGrid grid(config.m_grid.size());
    for (std::size_t mi = 0; mi < config.m_grid.size(); ++mi) {
      Stopwatch phase;
      const std::size_t m = config.m_grid[mi];
      std::vector<double> errors(config.draws);

      auto iid_rng = make_rng(config, {kCoresetTag, r, 2, m});
      for (auto& e : errors) e = worst_error(coreset_estimate_iid(cloud, theta_row(0), m, scores, iid_rng));
      grid[mi][0] = quantile_relative_error(errors, config.quantile);

      const Eigen::MatrixXd factor = basis.leftCols(static_cast<Eigen::Index>(m));
      const auto dpp = validate_factored(factored_kernel(factor), factor);
      auto dpp_rng = make_rng(config, {kCoresetTag, r, 3, m});
      for (auto& e : errors) e = worst_error(coreset_estimate_dpp(cloud, theta_row(0), dpp, dpp_rng));
      grid[mi][1] = quantile_relative_error(errors, config.quantile);
      log.line("realization ", r, " m=", m, ": iid stream ", hex(iid_rng.stream_id()), ", dpp stream ",
               hex(dpp_rng.stream_id()), ", ", phase.seconds(), " s");
    }
    results[r] = std::move(grid);
  });

  auto table = empty_table(config);
  add_grid_rows(table, config, "quantile_rel_error", results);
  log.line("done in ", total.seconds(), " s");
  return table;
}

ResultTable run_sphere(const ExperimentConfig& config, std::ostream* log_stream) {
  Log log(log_stream, "sphere");
  const std::size_t m_max = max_order(config);
  if (m_max > config.n) throw InfeasibleError(static_cast<double>(m_max), "run_sphere: m exceeds n");

  auto options = default_harmonic_options(config.n, config.d_manifold);
  if (config.h1) options.h1 = *config.h1;
  if (config.h2) options.h2 = *config.h2;
  log.line("n=", config.n, " h1=", options.h1, " h2=", options.h2, " reference I=", kSphereReference);

  const ScalarFunction f = [](PointRef x) { return x[2] * x[2]; };
  std::vector<ReplicateGrid> results(config.realizations);
  std::vector<double> discrete(config.realizations);
  Stopwatch total;

  parallel_for(config.realizations, config.threads, [&](std::size_t r) {
    Stopwatch clock;
    auto cloud_rng = make_rng(config, {kSphereTag, r, 0});
    const auto cloud = sample_uniform_sphere(config.n, cloud_rng);
    HarmonicBasis basis;
    try {
      basis = harmonic_basis(cloud, m_max, options);
    } catch (const NumericalError& e) {
      throw NumericalError(e.index(), std::string("run_sphere: realization ") + std::to_string(r) +
                                          ": " + e.what());
    }
    const std::span<const double> density(basis.density.data(), config.n);
    discrete[r] = discrete_integral(cloud, f, density);
    log.line("realization ", r, ": cloud stream ", hex(cloud_rng.stream_id()), ", harmonic basis in ",
             clock.seconds(), " s, I_n=", discrete[r]);

    ReplicateGrid grid(config.m_grid.size());
    for (std::size_t mi = 0; mi < config.m_grid.size(); ++mi) {
      Stopwatch phase;
      const std::size_t m = config.m_grid[mi];
      std::vector<double> errors(config.draws);

      auto iid_rng = make_rng(config, {kSphereTag, r, 2, m});
      for (auto& e : errors) {
        e = std::abs(sphere_integral_iid(cloud, f, m, density, iid_rng).value - kSphereReference) /
            kSphereReference;
      }
      grid[mi][0] = mean(errors);

      const auto hk = harmonic_kernel_from_basis(basis, m);
      const auto dpp = validate_factored(hk.kernel, hk.factor);
      auto dpp_rng = make_rng(config, {kSphereTag, r, 3, m});
      for (auto& e : errors) {
        e = std::abs(sphere_integral_dpp(cloud, f, dpp, density, dpp_rng).value - kSphereReference) /
            kSphereReference;
      }
      grid[mi][1] = mean(errors);
      log.line("realization ", r, " m=", m, ": iid stream ", hex(iid_rng.stream_id()), ", dpp stream ",
               hex(dpp_rng.stream_id()), ", rescale ", hk.rescale, ", ", phase.seconds(), " s");
    }
    results[r] = std::move(grid);
  });

  auto table = empty_table(config);
  add_grid_rows(table, config, "mean_rel_error", results);
  table.add({"sphere", std::to_string(config.n), "discrete", config.realizations, "discrete_rel_error",
             std::abs(mean(discrete) - kSphereReference) / kSphereReference});
  log.line("done in ", total.seconds(), " s");
  return table;
}

ResultTable run_usvt(const ExperimentConfig& config, std::ostream* log_stream) {
  Log log(log_stream, "usvt");
  const auto latent = gaussian_kernel(config.c, config.length_scale);
  auto table = empty_table(config);
  Stopwatch total;

  for (const auto n : config.n_grid) {
    Stopwatch phase;
    struct Outcome {
      double frobenius = 0.0;
      double trace = 0.0;
      double rank = 0.0;
    };
    std::vector<Outcome> outcomes(config.replicates);
    parallel_for(config.replicates, config.threads, [&](std::size_t j) {
      auto cloud_rng = make_rng(config, {kUsvtTag, n, j, 0});
      auto graph_rng = make_rng(config, {kUsvtTag, n, j, 1});
      const auto cloud = sample_uniform_cube(n, config.d, cloud_rng);
      const auto graph = latent_graph(cloud, latent, config.alpha, graph_rng);
      const auto est = usvt_estimate(graph, config.alpha, config.c, config.rho);
      const auto gram = gram_kernel(latent, cloud);
      const auto nd = static_cast<double>(n);
      outcomes[j].frobenius = (est.kernel.matrix() - gram.matrix()).norm() / nd;
      outcomes[j].trace = std::abs(est.kernel.trace() / nd - config.c);
      outcomes[j].rank = static_cast<double>(est.rank);
    });
    std::vector<double> frob;
    std::vector<double> trace;
    std::vector<double> rank;
    for (const auto& o : outcomes) {
      frob.push_back(o.frobenius);
      trace.push_back(o.trace);
      rank.push_back(o.rank);
    }
    const auto param = std::to_string(n);
    table.add({"usvt", param, "usvt", config.replicates, "frobenius_error", mean(frob)});
    table.add({"usvt", param, "usvt", config.replicates, "trace_error", mean(trace)});
    table.add({"usvt", param, "usvt", config.replicates, "rank", mean(rank)});
    log.line("n=", n, ": ", config.replicates, " replicates, streams ",
             hex(derive_stream({kUsvtTag, n, 0, 0})), ".., ", phase.seconds(), " s");
  }
  log.line("done in ", total.seconds(), " s");
  return table;
}

ResultTable run_checks(const ExperimentConfig& config, std::ostream* log_stream) {
  Log log(log_stream, "checks");
  auto table = empty_table(config);
  std::vector<BoundTrial> bound_trials;
  const std::uint64_t seed = config.seed;

  for (const auto& name : config.checks) {
    Stopwatch clock;
    CheckResult result;
    if (name == "sampler_tv") {
      SamplerCheckOptions options;
      options.draws = config.check_draws;
      result = check_sampler_tv(seed, options);
    } else if (name == "ope_structure") {
      result = check_ope_structure(seed);
    } else if (name == "kernel_validation") {
      result = check_kernel_validation(seed, config.inject_corrupted);
    } else if (name == "oracle_triangle") {
      result = check_oracle_triangle(seed);
    } else if (name == "det_bound_max") {
      result = check_det_bound_max(seed, config.trials, 12, &bound_trials);
    } else if (name == "det_bound_frobenius") {
      result = check_det_bound_frobenius(seed, config.trials, 10, &bound_trials);
    } else if (name == "usvt_spectrum") {
      result = check_usvt_spectrum(seed);
    } else if (name == "harmonic_structure") {
      result = check_harmonic_structure(seed);
    } else {
      throw InvalidArgument("run_checks: unknown check '" + name + "'");
    }
    table.add({"checks", name, "check", result.cases, "pass", result.pass ? 1.0 : 0.0});
    table.add({"checks", name, "check", result.cases, "slack", result.slack});
    for (const auto& [metric, value] : result.metrics) {
      table.add({"checks", name, "check", result.cases, metric, value});
    }
    log.line(name, ": ", result.pass ? "pass" : "FAIL", " over ", result.cases, " cases, slack ",
             result.slack, ", ", clock.seconds(), " s", result.detail.empty() ? "" : "; ", result.detail);
  }

  if (!config.bounds_csv.empty()) {
    std::ofstream out(config.bounds_csv);
    if (!out) throw InvalidArgument("run_checks: cannot write '" + config.bounds_csv + "'");
    write_bound_csv(out, bound_trials);
  }
  return table;
}

ResultTable run_experiment(const ExperimentConfig& config, std::ostream* log) {
  switch (config.kind) {
    case ExperimentKind::coreset:
      return run_coreset(config, log);
    case ExperimentKind::sphere:
      return run_sphere(config, log);
    case ExperimentKind::usvt:
      return run_usvt(config, log);
    case ExperimentKind::checks:
      return run_checks(config, log);
  }
  throw InvalidArgument("run_experiment: unknown experiment kind");
}

bool all_checks_passed(const ResultTable& table) {
  return std::none_of(table.rows().begin(), table.rows().end(),
                      [](const ResultRow& r) { return r.metric == "pass" && r.value != 1.0; });
}

}  // namespace dpplimits
