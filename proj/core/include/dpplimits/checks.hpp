#pragma once

// The verification suite run by `dpp-limits checks`. Each check compares a
// construction against an independent oracle and reports the worst slack
// (tolerance minus measured deviation; negative means failure).

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dpplimits/kernel_matrix.hpp"
#include "dpplimits/rng.hpp"
#include "dpplimits/statistics.hpp"

namespace dpplimits {

struct CheckResult {
  std::string name;
  bool pass = true;
  double slack = 0.0;
  std::size_t cases = 0;
  std::vector<std::pair<std::string, double>> metrics;  ///< extra named measurements
  std::string detail;                                   ///< first failure, if any
};

/// Marginal kernel n L (I + L)^-1 of a Wishart L-ensemble, L = G G^T / n
/// with G an n x n standard Gaussian matrix.
KernelMatrix random_valid_kernel(std::size_t n, SeededRng& rng);
/// V diag(u n) V^T with V Haar-orthogonal and u iid uniform on [0, 1]. These
/// spread the subset law almost uniformly, so sampling noise in total
/// variation is largest for them.
KernelMatrix random_spectrum_kernel(std::size_t n, SeededRng& rng);
/// n V V^T with V the first `rank` columns of a Haar-orthogonal matrix.
KernelMatrix random_projection_kernel(std::size_t n, std::size_t rank, SeededRng& rng);

struct SamplerCheckOptions {
  std::size_t kernels = 20;
  std::size_t n = 8;
  std::size_t draws = 100000;
  double tv_tolerance = 0.02;
  double band_sigmas = 4.0;
};

/// Sampler against enumerate_pmf: total variation per kernel, plus binomial
/// bands on singleton and pair inclusion frequencies.
CheckResult check_sampler_tv(std::uint64_t seed, const SamplerCheckOptions& options = {});

struct OpeCheckOptions {
  std::vector<std::size_t> dims{1, 2};
  std::vector<std::size_t> sizes{200, 1000};
  std::vector<std::size_t> orders{4, 16, 64};
  std::size_t draws = 200;
  double trace_tolerance = 1e-8;
  double spectrum_tolerance = 1e-6;
};

/// tr(K)/n = m, spectrum of K/n in {0, 1}, every draw of size m.
CheckResult check_ope_structure(std::uint64_t seed, const OpeCheckOptions& options = {});

/// Validation of a batch of admissible kernels; with `inject_corrupted` the
/// batch also contains diag(n + 1, 0, ..., 0), which must make it fail.
CheckResult check_kernel_validation(std::uint64_t seed, bool inject_corrupted);

/// expected_linear_statistic against the enumerated PMF (n <= 10), and the
/// projection variance identity.
CheckResult check_oracle_triangle(std::uint64_t seed, std::size_t trials = 40);

/// lhs <= rhs for random pairs, r cycling through 1, 2, 3.
CheckResult check_det_bound_max(std::uint64_t seed, std::size_t trials, std::size_t n = 12,
                                std::vector<BoundTrial>* report = nullptr);
/// Signed form asserted; the absolute-sum ratio is only recorded.
CheckResult check_det_bound_frobenius(std::uint64_t seed, std::size_t trials, std::size_t n = 10,
                                      std::vector<BoundTrial>* report = nullptr);

/// Spectrum of usvt_kernel in [0, n], trace restoration of the diagonal
/// correction, and rank monotonicity in rho.
CheckResult check_usvt_spectrum(std::uint64_t seed);

/// Laplacian spectrum, omega_n orthonormality, kernel spectrum and draw
/// cardinality for the harmonic ensemble on a small sphere cloud.
CheckResult check_harmonic_structure(std::uint64_t seed);

}  // namespace dpplimits
