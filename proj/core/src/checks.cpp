#include "dpplimits/checks.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "dpplimits/dpp.hpp"
#include "dpplimits/error.hpp"
#include "dpplimits/kernel_builders.hpp"
#include "dpplimits/point_cloud.hpp"

namespace dpplimits {
namespace {

enum CheckTag : std::uint64_t {
  kSamplerTag = 101,
  kOpeTag,
  kValidationTag,
  kOracleTag,
  kMaxBoundTag,
  kFrobeniusBoundTag,
  kUsvtTag,
  kHarmonicTag,
};

SeededRng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  return SeededRng(seed, derive_stream(tags));
}

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, SeededRng& rng) {
  Eigen::MatrixXd g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = rng.normal();
  }
  return g;
}

// QR of a Gaussian matrix with the signs of R's diagonal moved into Q.
Eigen::MatrixXd haar_orthogonal(std::size_t n, SeededRng& rng) {
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(N, N, rng));
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(N, N);
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < N; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

std::string describe(const std::string& what, std::size_t index, double value) {
  std::ostringstream os;
  os << what << " (case " << index << "): " << value;
  return os.str();
}

// Collects the worst slack and the first failure message.
class Tally {
 public:
  explicit Tally(std::string name) { result_.name = std::move(name); result_.slack = std::numeric_limits<double>::infinity(); }

  void record(double slack, const std::string& failure_detail) {
    ++result_.cases;
    result_.slack = std::min(result_.slack, slack);
    if (!(slack >= 0.0)) fail(failure_detail);
  }
  void fail(const std::string& detail) {
    if (result_.pass) result_.detail = detail;
    result_.pass = false;
  }
  void metric(std::string name, double value) { result_.metrics.emplace_back(std::move(name), value); }
  CheckResult finish() {
    if (result_.cases == 0) result_.slack = 0.0;
    return std::move(result_);
  }

 private:
  CheckResult result_;
};

}  // namespace

KernelMatrix random_valid_kernel(std::size_t n, SeededRng& rng) {
  const auto N = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXd g = gaussian_matrix(N, N, rng);
  const Eigen::MatrixXd l = g * g.transpose() / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(l);
  const Eigen::VectorXd lambda =
      static_cast<double>(n) * eig.eigenvalues().array().max(0.0) / (1.0 + eig.eigenvalues().array().max(0.0));
  return KernelMatrix(eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose());
}

KernelMatrix random_spectrum_kernel(std::size_t n, SeededRng& rng) {
  const Eigen::MatrixXd v = haar_orthogonal(n, rng);
  Eigen::VectorXd lambda(static_cast<Eigen::Index>(n));
  for (auto& l : lambda) l = rng.uniform() * static_cast<double>(n);
  return KernelMatrix(v * lambda.asDiagonal() * v.transpose());
}

KernelMatrix random_projection_kernel(std::size_t n, std::size_t rank, SeededRng& rng) {
  if (rank > n) throw InvalidArgument("random_projection_kernel: rank exceeds n");
  const Eigen::MatrixXd v = haar_orthogonal(n, rng).leftCols(static_cast<Eigen::Index>(rank));
  return factored_kernel(std::sqrt(static_cast<double>(n)) * v);
}

CheckResult check_sampler_tv(std::uint64_t seed, const SamplerCheckOptions& o) {
  Tally tally("sampler_tv");
  const std::size_t n = o.n;
  const auto draws = static_cast<double>(o.draws);
  double max_tv = 0.0;
  double max_z = 0.0;
  std::size_t violations = 0;

  for (std::size_t k = 0; k < o.kernels; ++k) {
    auto krng = stream(seed, {kSamplerTag, k, 0});
    const auto dpp = validate_kernel(random_valid_kernel(n, krng));
    const auto pmf = enumerate_pmf(dpp);

    std::vector<double> counts(std::size_t{1} << n, 0.0);
    auto srng = stream(seed, {kSamplerTag, k, 1});
    for (std::size_t t = 0; t < o.draws; ++t) counts[subset_mask(sample_dpp(dpp, srng).indices)] += 1.0;

    double tv = 0.0;
    for (std::size_t mask = 0; mask < counts.size(); ++mask) tv += std::abs(counts[mask] / draws - pmf[mask]);
    tv *= 0.5;
    max_tv = std::max(max_tv, tv);
    tally.record(o.tv_tolerance - tv, describe("total variation", k, tv));

    auto band = [&](std::uint64_t want, std::span<const std::size_t> subset) {
      double hits = 0.0;
      for (std::size_t mask = 0; mask < counts.size(); ++mask) {
        if ((mask & want) == want) hits += counts[mask];
      }
      const double p = inclusion_probability(dpp.kernel(), subset);
      const double sigma = std::sqrt(std::max(p * (1.0 - p), 0.0) / draws);
      const double dev = std::abs(hits / draws - p);
      if (sigma > 0.0) max_z = std::max(max_z, dev / sigma);
      if (dev > o.band_sigmas * sigma) {
        ++violations;
        tally.fail(describe("inclusion frequency outside band", k, dev));
      }
    };
    for (std::size_t i = 0; i < n; ++i) {
      const std::array<std::size_t, 1> s{i};
      band(subset_mask(s), s);
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::array<std::size_t, 2> pair{i, j};
        band(subset_mask(pair), pair);
      }
    }
  }
  tally.metric("max_tv", max_tv);
  tally.metric("max_band_z", max_z);
  tally.metric("band_violations", static_cast<double>(violations));
  return tally.finish();
}

CheckResult check_ope_structure(std::uint64_t seed, const OpeCheckOptions& o) {
  Tally tally("ope_structure");
  double worst_trace = 0.0;
  double worst_spectrum = 0.0;
  std::size_t bad_draws = 0;
  std::size_t case_index = 0;
  for (const auto d : o.dims) {
    for (const auto n : o.sizes) {
      auto crng = stream(seed, {kOpeTag, d, n, 0});
      const auto cloud = sample_uniform_cube(n, d, crng);
      for (const auto m : o.orders) {
        const auto nd = static_cast<double>(n);
        const Eigen::MatrixXd basis = ope_basis(cloud, m);
        const auto kernel = ope_kernel(cloud, m);

        const double trace_err = std::abs(kernel.trace() / nd - static_cast<double>(m));
        worst_trace = std::max(worst_trace, trace_err);
        tally.record(o.trace_tolerance - trace_err, describe("trace deviation", case_index, trace_err));

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(kernel.matrix() / nd, Eigen::EigenvaluesOnly);
        double spec_err = 0.0;
        for (const double l : eig.eigenvalues()) spec_err = std::max(spec_err, std::min(std::abs(l), std::abs(l - 1.0)));
        worst_spectrum = std::max(worst_spectrum, spec_err);
        tally.record(o.spectrum_tolerance - spec_err, describe("eigenvalue off {0,1}", case_index, spec_err));

        const auto dpp = validate_factored(kernel, basis);
        auto srng = stream(seed, {kOpeTag, d, n, m});
        for (std::size_t t = 0; t < o.draws; ++t) {
          const auto size = sample_dpp(dpp, srng).size();
          if (size != m) {
            ++bad_draws;
            tally.fail(describe("draw cardinality", case_index, static_cast<double>(size)));
          }
        }
        ++case_index;
      }
    }
  }
  tally.metric("max_trace_error", worst_trace);
  tally.metric("max_spectrum_error", worst_spectrum);
  tally.metric("bad_cardinality_draws", static_cast<double>(bad_draws));
  return tally.finish();
}

CheckResult check_kernel_validation(std::uint64_t seed, bool inject_corrupted) {
  Tally tally("kernel_validation");
  std::vector<KernelMatrix> batch;
  batch.emplace_back(Eigen::MatrixXd::Zero(6, 6));
  batch.emplace_back(5.0 * Eigen::MatrixXd::Identity(5, 5));
  for (std::size_t k = 0; k < 5; ++k) {
    auto rng = stream(seed, {kValidationTag, k});
    batch.push_back(random_valid_kernel(12, rng));
  }
  auto prng = stream(seed, {kValidationTag, 99});
  batch.push_back(random_projection_kernel(12, 4, prng));
  if (inject_corrupted) {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(6, 6);
    bad(0, 0) = 7.0;
    batch.emplace_back(bad);
  }
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const auto n = static_cast<double>(batch[k].size());
    try {
      const auto dpp = validate_kernel(batch[k]);
      const double top = dpp.eigenvalues().size() > 0 ? dpp.eigenvalues().maxCoeff() : 0.0;
      tally.record((n - top) / n, describe("largest eigenvalue", k, top));
    } catch (const KernelValidationError& e) {
      const double slack = e.value() > n ? (n - e.value()) / n : e.value() / n;
      tally.record(std::min(slack, -std::numeric_limits<double>::min()),
                   describe(std::string("rejected: ") + e.what(), k, e.value()));
    }
  }
  return tally.finish();
}

CheckResult check_oracle_triangle(std::uint64_t seed, std::size_t trials) {
  constexpr double kTolerance = 1e-8;
  Tally tally("oracle_triangle");
  const auto phi = one_point_function([](PointRef x) { return x[0] + x[1] * x[1]; }, 2.0);
  double worst_mean = 0.0;
  double worst_var = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 2 + t % 9;  // 2..10
    auto rng = stream(seed, {kOracleTag, t});
    const auto cloud = sample_uniform_cube(n, 2, rng);
    const bool projection = t % 2 == 1;
    const std::size_t rank = 1 + rng.below(n);
    const auto kernel = projection ? random_projection_kernel(n, rank, rng) : random_valid_kernel(n, rng);
    const auto pmf = enumerate_pmf(validate_kernel(kernel));

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = phi.eval(std::array<PointRef, 1>{cloud.point(i)});
    double mean = 0.0;
    double second = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      double lambda = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1u) lambda += values[i];
      }
      mean += pmf[mask] * lambda;
      second += pmf[mask] * lambda * lambda;
    }
    const double err = std::abs(expected_linear_statistic(kernel, cloud, phi) - mean);
    worst_mean = std::max(worst_mean, err);
    tally.record(kTolerance - err, describe("expectation mismatch", t, err));

    if (projection) {
      const auto nd = static_cast<double>(n);
      double identity = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        identity += values[i] * values[i] * kernel(i, i) / nd;
        for (std::size_t j = 0; j < n; ++j) identity -= values[i] * values[j] * kernel(i, j) * kernel(i, j) / (nd * nd);
      }
      const double verr = std::abs((second - mean * mean) - identity);
      worst_var = std::max(worst_var, verr);
      tally.record(kTolerance - verr, describe("variance identity mismatch", t, verr));
    }
  }
  tally.metric("max_mean_error", worst_mean);
  tally.metric("max_variance_error", worst_var);
  return tally.finish();
}

CheckResult check_det_bound_max(std::uint64_t seed, std::size_t trials, std::size_t n,
                                std::vector<BoundTrial>* report) {
  Tally tally("det_bound_max");
  const auto N = static_cast<Eigen::Index>(n);
  double worst_ratio = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = stream(seed, {kMaxBoundTag, t});
    const std::size_t r = 1 + t % 3;
    const Eigen::MatrixXd a = gaussian_matrix(N, N, rng);
    const double scale = std::pow(10.0, rng.uniform(-3.0, 0.0));
    const Eigen::MatrixXd b = a + scale * gaussian_matrix(N, N, rng);
    const auto bound = det_bound_max(a, b, r, derive_stream({kMaxBoundTag, t, 1}));
    const double ratio = bound.lhs_max / bound.rhs;
    worst_ratio = std::max(worst_ratio, ratio);
    tally.record(bound.rhs - bound.lhs_max, describe("lhs exceeds rhs, ratio", t, ratio));
    if (report) report->push_back({t, "max", n, r, bound.lhs_max, bound.rhs});
  }
  tally.metric("max_ratio", worst_ratio);
  return tally.finish();
}

CheckResult check_det_bound_frobenius(std::uint64_t seed, std::size_t trials, std::size_t n,
                                      std::vector<BoundTrial>* report) {
  Tally tally("det_bound_frobenius");
  const auto N = static_cast<Eigen::Index>(n);
  double worst_signed = 0.0;
  double worst_abs = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = stream(seed, {kFrobeniusBoundTag, t});
    const std::size_t r = 1 + t % 3;
    const Eigen::MatrixXd g = gaussian_matrix(N, N, rng);
    const double scale = std::pow(10.0, rng.uniform(-3.0, 0.0));
    const Eigen::MatrixXd h = g + scale * gaussian_matrix(N, N, rng);
    const Eigen::MatrixXd a = g * g.transpose() / static_cast<double>(n);
    const Eigen::MatrixXd b = h * h.transpose() / static_cast<double>(n);
    const auto bound = det_bound_frobenius(a, b, r);
    // At r = 1 the bound can hold with equality (lhs = |tr A - tr B|). The two
    // sides then cancel the traces in a different order, so allow rounding
    // at the scale of the minors themselves, each at most M^r in magnitude.
    const double big_m = std::max({a.norm(), b.norm(), a.trace(), b.trace()});
    const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * binomial(n, r) *
                            std::pow(big_m, static_cast<double>(r));
    const double ratio = bound.lhs_signed / bound.rhs;
    worst_signed = std::max(worst_signed, ratio);
    worst_abs = std::max(worst_abs, bound.lhs_abs / bound.rhs);
    tally.record(bound.rhs + rounding - bound.lhs_signed, describe("signed lhs exceeds rhs, ratio", t, ratio));
    if (report) {
      report->push_back({t, "frobenius_signed", n, r, bound.lhs_signed, bound.rhs});
      report->push_back({t, "frobenius_abs", n, r, bound.lhs_abs, bound.rhs});
    }
  }
  tally.metric("max_signed_ratio", worst_signed);
  tally.metric("max_abs_ratio", worst_abs);
  return tally.finish();
}

CheckResult check_usvt_spectrum(std::uint64_t seed) {
  Tally tally("usvt_spectrum");
  const double alphas[] = {1.0, 0.5, 0.25};
  const double rhos[] = {0.25, 0.5, 1.0, 2.0, 4.0};
  for (std::size_t t = 0; t < 6; ++t) {
    auto rng = stream(seed, {kUsvtTag, t});
    const std::size_t n = 300;
    const auto nd = static_cast<double>(n);
    const double alpha = alphas[t % 3];
    const auto cloud = sample_uniform_cube(n, 2, rng);
    const auto graph = latent_graph(cloud, gaussian_kernel(1.0, 0.5), alpha, rng);

    std::size_t previous_rank = n + 1;
    for (const double rho : rhos) {
      const auto est = usvt_estimate(graph, alpha, 1.0, rho);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(est.kernel.matrix(), Eigen::EigenvaluesOnly);
      const double lo = eig.eigenvalues().minCoeff();
      const double hi = eig.eigenvalues().maxCoeff();
      tally.record(std::min(lo + 1e-10 * nd, nd * (1.0 + 1e-10) - hi) / nd, describe("kernel spectrum outside [0, n]", t, lo < 0 ? lo : hi));
      const double corrected_trace = est.kernel.trace() / est.scale / nd;
      tally.record(corrected_trace - (1.0 - 1e-12), describe("corrected trace below c", t, corrected_trace));
      if (est.rank > previous_rank) tally.fail(describe("rank grew with rho", t, static_cast<double>(est.rank)));
      previous_rank = est.rank;
    }
  }
  // A constant kernel whose Gram eigenvalue c n sits below the threshold: the
  // thresholded part vanishes and the diagonal correction restores c exactly.
  {
    auto rng = stream(seed, {kUsvtTag, 100});
    const std::size_t n = 50;
    const double c = 0.3;
    const auto cloud = sample_uniform_cube(n, 2, rng);
    const auto graph = latent_graph(cloud, constant_kernel(c), 1.0, rng);
    const auto est = usvt_estimate(graph, 1.0, c, 2.0);
    const double corrected = est.kernel.trace() / est.scale / static_cast<double>(n);
    if (est.rank != 0) tally.fail(describe("constant kernel kept eigenvalues", 100, static_cast<double>(est.rank)));
    tally.record(1e-10 - std::abs(corrected - c), describe("diagonal correction error", 100, corrected - c));
    tally.metric("constant_kernel_trace_error", std::abs(est.kernel.trace() / static_cast<double>(n) - c));
  }
  return tally.finish();
}

CheckResult check_harmonic_structure(std::uint64_t seed) {
  Tally tally("harmonic_structure");
  const std::size_t n = 400;
  const std::size_t orders[] = {1, 4, 16};
  auto rng = stream(seed, {kHarmonicTag, 0});
  const auto cloud = sample_uniform_sphere(n, rng);
  const auto basis = harmonic_basis(cloud, 16, default_harmonic_options(n));
  const auto nd = static_cast<double>(n);

  const double lowest = basis.laplacian_eigenvalues.minCoeff();
  tally.record(lowest + 1e-8, describe("negative Laplacian eigenvalue", 0, lowest));

  const Eigen::VectorXd omega = (nd * basis.density).cwiseInverse();
  for (const auto m : orders) {
    const auto M = static_cast<Eigen::Index>(m);
    const auto v = basis.orthonormal.leftCols(M);
    const double omega_trace = (omega.asDiagonal() * v.cwiseAbs2()).sum();
    const double trace_err = std::abs(omega_trace - static_cast<double>(m));
    tally.record(1e-6 - trace_err, describe("omega-trace deviation", m, trace_err));

    const auto hk = harmonic_kernel_from_basis(basis, m);
    try {
      const auto dpp = validate_factored(hk.kernel, hk.factor);
      auto srng = stream(seed, {kHarmonicTag, m});
      for (int t = 0; t < 50; ++t) {
        const auto size = sample_dpp(dpp, srng).size();
        if (size != m) tally.fail(describe("draw cardinality", m, static_cast<double>(size)));
      }
    } catch (const KernelValidationError& e) {
      tally.fail(describe(e.what(), m, e.value()));
    }
    tally.metric("rescale_m" + std::to_string(m), hk.rescale);
  }
  return tally.finish();
}

}  // namespace dpplimits
