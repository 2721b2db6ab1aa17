#include "dpplimits/dpp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <string>

#include "dpplimits/error.hpp"

namespace dpplimits {
namespace {

constexpr double kReconstructionTolerance = 1e-8;
constexpr double kResidualClamp = 1e-12;

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index arg = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

// Range check and clamp on the stored spectrum.
void check_spectrum(Eigen::VectorXd& values, double n, double tol) {
  const double slack = tol * n;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || v < -slack || v > n + slack) {
      throw KernelValidationError(v, "kernel eigenvalue outside [0, n] with n = " +
                                         std::to_string(static_cast<long long>(n)));
    }
    values[i] = std::clamp(v, 0.0, n);
  }
}

void check_reconstruction(const KernelMatrix& kernel, const Eigen::VectorXd& values,
                          const Eigen::MatrixXd& vectors) {
  const double norm = kernel.matrix().norm();
  const Eigen::MatrixXd rebuilt = vectors * values.asDiagonal() * vectors.transpose();
  const double err = (rebuilt - kernel.matrix()).norm();
  if (err > kReconstructionTolerance * std::max(norm, 1e-300) && err > 1e-300) {
    throw KernelValidationError(err, "eigendecomposition does not reconstruct the kernel");
  }
}

}  // namespace

std::size_t IndexSample::total_count() const noexcept {
  if (multiplicities.empty()) return indices.size();
  std::size_t s = 0;
  for (const auto c : multiplicities) s += c;
  return s;
}

ValidatedDpp::ValidatedDpp(KernelMatrix k, Eigen::VectorXd values, Eigen::MatrixXd vectors)
    : kernel_(std::move(k)), eigenvalues_(std::move(values)), eigenvectors_(std::move(vectors)) {}

double ValidatedDpp::expected_size() const noexcept {
  return size() == 0 ? 0.0 : kernel_.trace() / static_cast<double>(size());
}

ValidatedDpp validate_kernel(KernelMatrix kernel, double tol) {
  const auto n = static_cast<double>(kernel.size());
  if (kernel.size() == 0) return ValidatedDpp(std::move(kernel), {}, {});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kernel.matrix());
  if (solver.info() != Eigen::Success) {
    throw KernelValidationError(0.0, "eigensolver did not converge");
  }
  Eigen::VectorXd values = solver.eigenvalues();
  Eigen::MatrixXd vectors = solver.eigenvectors();
  check_spectrum(values, n, tol);
  fix_signs(vectors);
  check_reconstruction(kernel, values, vectors);
  return ValidatedDpp(std::move(kernel), std::move(values), std::move(vectors));
}

ValidatedDpp validate_factored(KernelMatrix kernel, const Eigen::MatrixXd& factor, double tol) {
  const auto N = static_cast<Eigen::Index>(kernel.size());
  const auto n = static_cast<double>(N);
  if (factor.rows() != N) throw InvalidArgument("validate_factored: factor row count mismatch");
  const Eigen::Index r = std::min(factor.cols(), N);

  // F = Q R  =>  F F^T = Q (R R^T) Q^T
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(factor);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(N, r);
  const Eigen::MatrixXd upper = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(upper * upper.transpose());
  if (small.info() != Eigen::Success) throw KernelValidationError(0.0, "eigensolver did not converge");

  Eigen::VectorXd all_values = small.eigenvalues();
  check_spectrum(all_values, n, tol);
  Eigen::Index first = 0;
  while (first < all_values.size() && all_values[first] <= tol * n) ++first;
  const Eigen::Index kept = all_values.size() - first;
  Eigen::VectorXd values = all_values.tail(kept);
  Eigen::MatrixXd vectors = q * small.eigenvectors().rightCols(kept);
  fix_signs(vectors);

  const Eigen::MatrixXd rebuilt = factor * factor.transpose();
  const double err = (rebuilt - kernel.matrix()).norm();
  if (err > kReconstructionTolerance * std::max(kernel.matrix().norm(), 1e-300) && err > 1e-300) {
    throw KernelValidationError(err, "kernel does not match factor * factor^T");
  }
  return ValidatedDpp(std::move(kernel), std::move(values), std::move(vectors));
}

IndexSample sample_dpp(const ValidatedDpp& dpp, SeededRng& rng) {
  const auto N = static_cast<Eigen::Index>(dpp.size());
  const auto n = static_cast<double>(N);
  const auto& values = dpp.eigenvalues();

  std::vector<Eigen::Index> chosen;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    // Draw unconditionally so the stream position does not depend on lambda.
    const double u = rng.uniform();
    if (u < values[i] / n) chosen.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(chosen.size());
  IndexSample sample;
  if (k == 0) return sample;

  Eigen::MatrixXd basis(N, k);
  for (Eigen::Index j = 0; j < k; ++j) basis.col(j) = dpp.eigenvectors().col(chosen[j]);

  // Chain rule over the projection: with V an orthonormal basis of the
  // current subspace, the next point is i with probability |V_i|^2 / (k - t).
  // A Householder reflection then sends row `pick` to a multiple of e_1 and the
  // first column is dropped, which leaves an orthonormal basis of the
  // subspace vanishing at every point picked so far. The residuals are
  // recomputed as row norms rather than down-dated, so they cannot drift.
  Eigen::VectorXd residual(N);
  Eigen::VectorXd essential;
  Eigen::VectorXd workspace(N);
  sample.indices.reserve(static_cast<std::size_t>(k));

  for (Eigen::Index t = 0; t < k; ++t) {
    const Eigen::Index r = k - t;
    auto active = basis.rightCols(r);
    residual = active.rowwise().squaredNorm();
    for (Eigen::Index i = 0; i < N; ++i) {
      if (residual[i] < 0.0) {
        if (residual[i] < -kResidualClamp) {
          throw NumericalError(static_cast<std::size_t>(i),
                               "sample_dpp: negative residual probability " + std::to_string(residual[i]));
        }
        residual[i] = 0.0;
      }
    }
    for (const auto taken : sample.indices) residual[static_cast<Eigen::Index>(taken)] = 0.0;

    const double total = residual.sum();
    double target = rng.uniform() * total;
    Eigen::Index pick = N - 1;
    for (Eigen::Index i = 0; i < N; ++i) {
      target -= residual[i];
      if (target < 0.0) {
        pick = i;
        break;
      }
    }
    while (residual[pick] <= 0.0 && pick > 0) --pick;
    sample.indices.push_back(static_cast<std::size_t>(pick));

    if (r > 1) {
      Eigen::VectorXd row = active.row(pick).transpose();
      double tau = 0.0;
      double beta = 0.0;
      essential.resize(r - 1);
      row.makeHouseholder(essential, tau, beta);
      active.applyHouseholderOnTheRight(essential, tau, workspace.data());
    }
  }
  std::sort(sample.indices.begin(), sample.indices.end());
  return sample;
}

IndexSample sample_iid(std::span<const double> probabilities, std::size_t m, SeededRng& rng) {
  const std::size_t n = probabilities.size();
  if (n == 0 && m > 0) throw InvalidArgument("sample_iid: empty probability vector");
  std::vector<double> cumulative(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(probabilities[i] >= 0.0)) throw InvalidArgument("sample_iid: negative probability");
    acc += probabilities[i];
    cumulative[i] = acc;
  }
  std::vector<std::size_t> counts(n, 0);
  for (std::size_t draw = 0; draw < m; ++draw) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                                 static_cast<std::ptrdiff_t>(n - 1)));
    while (probabilities[idx] == 0.0 && idx > 0) --idx;
    ++counts[idx];
  }
  IndexSample sample;
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] > 0) {
      sample.indices.push_back(i);
      sample.multiplicities.push_back(counts[i]);
    }
  }
  return sample;
}

double inclusion_probability(const KernelMatrix& kernel, std::span<const std::size_t> subset) {
  const std::size_t n = kernel.size();
  std::vector<std::size_t> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("inclusion_probability: duplicate indices");
  }
  if (!sorted.empty() && sorted.back() >= n) throw InvalidArgument("inclusion_probability: index out of range");
  const auto r = static_cast<Eigen::Index>(subset.size());
  if (r == 0) return 1.0;
  Eigen::MatrixXd sub(r, r);
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = 0; b < r; ++b) {
      sub(a, b) = kernel(subset[static_cast<std::size_t>(a)], subset[static_cast<std::size_t>(b)]);
    }
  }
  sub /= static_cast<double>(n);
  return sub.fullPivLu().determinant();
}

std::uint64_t subset_mask(std::span<const std::size_t> subset) {
  std::uint64_t mask = 0;
  for (const auto i : subset) {
    if (i >= 64) throw InvalidArgument("subset_mask: index too large");
    mask |= std::uint64_t{1} << i;
  }
  return mask;
}

double SubsetPmf::probability(std::span<const std::size_t> subset) const {
  return probabilities_[subset_mask(subset)];
}

double SubsetPmf::marginal(std::uint64_t mask) const noexcept {
  double s = 0.0;
  for (std::uint64_t a = 0; a < probabilities_.size(); ++a) {
    if ((a & mask) == mask) s += probabilities_[a];
  }
  return s;
}

double SubsetPmf::total() const noexcept {
  double s = 0.0;
  for (const double p : probabilities_) s += p;
  return s;
}

SubsetPmf enumerate_pmf(const ValidatedDpp& dpp) {
  const std::size_t n = dpp.size();
  if (n > kMaxEnumerationSize) {
    throw InfeasibleError(std::ldexp(1.0, static_cast<int>(n)),
                          "enumerate_pmf: n = " + std::to_string(n) + " exceeds 20");
  }
  const auto N = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXd scaled = dpp.kernel().matrix() / static_cast<double>(n);
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> probs(count);
  Eigen::MatrixXd work(N, N);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    work = scaled;
    for (Eigen::Index i = 0; i < N; ++i) {
      if (!(mask >> i & 1u)) work(i, i) -= 1.0;
    }
    probs[mask] = N == 0 ? 1.0 : std::abs(work.fullPivLu().determinant());
  }
  return SubsetPmf(n, std::move(probs));
}

}  // namespace dpplimits
