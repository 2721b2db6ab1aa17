#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dpplimits/kernel_matrix.hpp"
#include "dpplimits/rng.hpp"

namespace dpplimits {

/// Subset of {0..n-1}. DPP draws leave `multiplicities` empty; iid draws
/// with replacement store one positive count per index.
struct IndexSample {
  std::vector<std::size_t> indices;         ///< strictly increasing
  std::vector<std::size_t> multiplicities;  ///< empty, or same length as indices

  std::size_t size() const noexcept { return indices.size(); }
  std::size_t multiplicity(std::size_t k) const noexcept {
    return multiplicities.empty() ? 1 : multiplicities[k];
  }
  /// Number of draws, counting repeats.
  std::size_t total_count() const noexcept;
};

/// Default relative slack for the eigenvalue range check: eigenvalues in
/// [-tol n, n (1 + tol)] are clamped into [0, n], anything beyond is invalid.
inline constexpr double kEigenTolerance = 1e-8;

/// A kernel that satisfies the existence condition (symmetric, spectrum in
/// [0, n]), with its eigenpairs. Only eigenpairs that can contribute to a
/// sample are stored: eigenvalues() has one entry per column of
/// eigenvectors(), ascending, and every eigenvalue not listed is exactly 0.
/// A full validation stores all n pairs.
class ValidatedDpp {
 public:
  const KernelMatrix& kernel() const noexcept { return kernel_; }
  std::size_t size() const noexcept { return kernel_.size(); }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }
  /// E|S| = tr(K) / n.
  double expected_size() const noexcept;

 private:
  friend ValidatedDpp validate_kernel(KernelMatrix, double);
  friend ValidatedDpp validate_factored(KernelMatrix, const Eigen::MatrixXd&, double);
  ValidatedDpp(KernelMatrix k, Eigen::VectorXd values, Eigen::MatrixXd vectors);

  KernelMatrix kernel_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

/// Full symmetric eigendecomposition followed by the range check. Throws
/// KernelValidationError carrying the offending eigenvalue.
ValidatedDpp validate_kernel(KernelMatrix kernel, double tol = kEigenTolerance);

/// Same contract for a kernel known to equal factor * factor^T (factor is
/// n x r): the spectrum is computed from a thin QR of the factor in
/// O(n r^2). The identity K = F F^T is verified to 1e-8 relative Frobenius
/// error. Eigenvalues below tol * n are treated as zero and dropped.
ValidatedDpp validate_factored(KernelMatrix kernel, const Eigen::MatrixXd& factor,
                               double tol = kEigenTolerance);

/// Exact two-phase spectral sampler: each eigenvector is kept with
/// probability lambda_i / n, then points are drawn one at a time from the
/// projection DPP of the kept eigenvectors, updating explicit residual
/// inclusion probabilities (chain rule of the conditional projections).
IndexSample sample_dpp(const ValidatedDpp& dpp, SeededRng& rng);

/// m draws with replacement from the probability vector p.
IndexSample sample_iid(std::span<const double> probabilities, std::size_t m, SeededRng& rng);

/// det(K_A) / n^|A|; the empty set has probability 1. Duplicate or out of
/// range indices raise InvalidArgument.
double inclusion_probability(const KernelMatrix& kernel, std::span<const std::size_t> subset);

/// Probability of every subset of {0..n-1}, indexed by bitmask.
class SubsetPmf {
 public:
  SubsetPmf(std::size_t n, std::vector<double> probabilities)
      : n_(n), probabilities_(std::move(probabilities)) {}

  std::size_t size() const noexcept { return n_; }
  double operator[](std::uint64_t mask) const noexcept { return probabilities_[mask]; }
  double probability(std::span<const std::size_t> subset) const;
  const std::vector<double>& probabilities() const noexcept { return probabilities_; }
  /// sum over A containing `mask` of P(A).
  double marginal(std::uint64_t mask) const noexcept;
  double total() const noexcept;

 private:
  std::size_t n_;
  std::vector<double> probabilities_;
};

inline constexpr std::size_t kMaxEnumerationSize = 20;

/// Brute-force oracle: P(S = A) = |det(K/n - I_{A^c})| over all 2^n subsets.
/// Throws InfeasibleError for n > 20.
SubsetPmf enumerate_pmf(const ValidatedDpp& dpp);

std::uint64_t subset_mask(std::span<const std::size_t> subset);

}  // namespace dpplimits
