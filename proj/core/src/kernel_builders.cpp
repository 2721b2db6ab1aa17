#include "dpplimits/kernel_builders.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "dpplimits/error.hpp"

namespace dpplimits {
namespace {

constexpr double kGramSchmidtTolerance = 1e-10;

Eigen::MatrixXd symmetric_product(const Eigen::MatrixXd& factor) {
  const Eigen::Index n = factor.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  out.selfadjointView<Eigen::Lower>().rankUpdate(factor);
  out.triangularView<Eigen::StrictlyUpper>() = out.transpose();
  return out;
}

// Flip each column so that its entry of largest magnitude is positive.
void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index arg = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

// T_0..T_degree evaluated at s in [-1, 1].
void chebyshev_values(double s, unsigned degree, std::vector<double>& out) {
  out.resize(degree + 1);
  out[0] = 1.0;
  if (degree >= 1) out[1] = s;
  for (unsigned k = 2; k <= degree; ++k) out[k] = 2.0 * s * out[k - 1] - out[k - 2];
}

}  // namespace

KernelMatrix gram_kernel(const ContinuousKernel& k, const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  Eigen::MatrixXd entries(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j; i < n; ++i) {
      const double v = k.eval(cloud.point(i), cloud.point(j));
      if (!std::isfinite(v)) {
        throw NumericalError(i * n + j, "gram_kernel: non-finite evaluation at points " +
                                            std::to_string(i) + ", " + std::to_string(j));
      }
      entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return KernelMatrix(std::move(entries));
}

unsigned MultiIndex::total_degree() const noexcept {
  unsigned s = 0;
  for (const auto b : degrees) s += b;
  return s;
}

std::vector<MultiIndex> graded_monomials(std::size_t d, std::size_t m) {
  if (d == 0) throw InvalidArgument("graded_monomials: dimension must be >= 1");
  std::vector<MultiIndex> out;
  out.reserve(m);
  std::vector<unsigned> current(d, 0);

  // Lexicographic enumeration of compositions of `remaining` into the
  // coordinates [pos, d), beta_1 most significant and ascending.
  std::function<void(std::size_t, unsigned)> emit = [&](std::size_t pos, unsigned remaining) {
    if (out.size() >= m) return;
    if (pos + 1 == d) {
      current[pos] = remaining;
      out.push_back(MultiIndex{current});
      return;
    }
    for (unsigned b = 0; b <= remaining && out.size() < m; ++b) {
      current[pos] = b;
      emit(pos + 1, remaining - b);
    }
  };
  for (unsigned total = 0; out.size() < m; ++total) emit(0, total);
  return out;
}

Eigen::MatrixXd weighted_gram_schmidt(const Eigen::MatrixXd& columns,
                                      const Eigen::VectorXd& weights) {
  const Eigen::Index n = columns.rows();
  const Eigen::Index m = columns.cols();
  if (weights.size() != n) throw InvalidArgument("weighted_gram_schmidt: weight size mismatch");
  Eigen::MatrixXd q(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::VectorXd v = columns.col(j);
    const double input_norm = std::sqrt(weights.dot(v.cwiseAbs2()));
    for (int pass = 0; pass < 2 && j > 0; ++pass) {
      const Eigen::VectorXd coeffs = q.leftCols(j).transpose() * weights.cwiseProduct(v);
      v.noalias() -= q.leftCols(j) * coeffs;
    }
    const double residual = std::sqrt(weights.dot(v.cwiseAbs2()));
    if (!(residual > kGramSchmidtTolerance * input_norm) || !(residual > 0.0)) {
      throw RankDeficiency(static_cast<std::size_t>(j),
                           "Gram-Schmidt residual " + std::to_string(residual) +
                               " below tolerance, input vectors are linearly dependent");
    }
    q.col(j) = v / residual;
  }
  return q;
}

Eigen::MatrixXd ope_basis(const PointCloud& cloud, std::size_t m) {
  const std::size_t n = cloud.size();
  const std::size_t d = cloud.dim();
  if (m == 0) throw InvalidArgument("ope_basis: m must be >= 1");
  if (m > n) {
    throw InvalidArgument("ope_basis: m = " + std::to_string(m) + " exceeds n = " + std::to_string(n));
  }
  const auto monomials = graded_monomials(d, m);
  const unsigned max_degree = monomials.back().total_degree();

  Eigen::VectorXd lo = cloud.coords().colwise().minCoeff();
  Eigen::VectorXd hi = cloud.coords().colwise().maxCoeff();

  Eigen::MatrixXd evaluations(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  std::vector<std::vector<double>> cheb(d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = cloud.point(i);
    for (std::size_t k = 0; k < d; ++k) {
      const double width = hi[static_cast<Eigen::Index>(k)] - lo[static_cast<Eigen::Index>(k)];
      const double s = width > 0.0 ? 2.0 * (x[k] - lo[static_cast<Eigen::Index>(k)]) / width - 1.0 : 0.0;
      chebyshev_values(s, max_degree, cheb[k]);
    }
    for (std::size_t j = 0; j < m; ++j) {
      double value = 1.0;
      for (std::size_t k = 0; k < d; ++k) value *= cheb[k][monomials[j].degrees[k]];
      evaluations(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
    }
  }
  const Eigen::VectorXd weights =
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
  return weighted_gram_schmidt(evaluations, weights);
}

KernelMatrix factored_kernel(const Eigen::MatrixXd& factor) {
  return KernelMatrix(symmetric_product(factor));
}

KernelMatrix ope_kernel(const PointCloud& cloud, std::size_t m) {
  return KernelMatrix(symmetric_product(ope_basis(cloud, m)));
}

double unit_ball_volume(std::size_t d) {
  const double half = static_cast<double>(d) / 2.0;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double unit_sphere_area(std::size_t d) {
  return static_cast<double>(d) * unit_ball_volume(d);
}

RadialProfile indicator_profile(std::size_t d_manifold) {
  const double height = 1.0 / unit_ball_volume(d_manifold);
  return [height](double t) { return t <= 1.0 ? height : 0.0; };
}

Eigen::VectorXd kde_density(const PointCloud& cloud, double h2, const RadialProfile& profile,
                            std::size_t d_manifold) {
  if (!(h2 > 0.0)) throw InvalidArgument("kde_density: bandwidth h2 must be positive");
  const std::size_t n = cloud.size();
  const double norm =
      1.0 / (static_cast<double>(n) * std::pow(h2, static_cast<double>(d_manifold)));
  Eigen::VectorXd density(static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += profile(std::sqrt(squared_distance(cloud.point(i), cloud.point(a))) / h2);
    }
    density[static_cast<Eigen::Index>(a)] = norm * s;
  }
  return density;
}

HarmonicOptions default_harmonic_options(std::size_t n, std::size_t d_manifold) {
  const double ratio = std::log(static_cast<double>(n)) / static_cast<double>(n);
  HarmonicOptions opts;
  opts.h2 = std::pow(ratio, 0.25);
  opts.h1 = std::pow(ratio, 1.0 / 16.0);
  opts.profile = indicator_profile(d_manifold);
  opts.d_manifold = d_manifold;
  return opts;
}

HarmonicBasis harmonic_basis(const PointCloud& cloud, std::size_t m, const HarmonicOptions& options) {
  const std::size_t n = cloud.size();
  const auto N = static_cast<Eigen::Index>(n);
  const auto M = static_cast<Eigen::Index>(m);
  if (m == 0 || m > n) {
    throw InvalidArgument("harmonic_basis: need 1 <= m <= n, got m = " + std::to_string(m));
  }
  if (!(options.h1 > 0.0) || !(options.h2 > 0.0)) {
    throw InvalidArgument("harmonic_basis: bandwidths must be positive");
  }
  if (!options.profile) throw InvalidArgument("harmonic_basis: missing radial profile");
  const double h1 = options.h1;

  // (1) complete graph weights, (2) degrees
  Eigen::MatrixXd dist2(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index i = j; i < N; ++i) {
      const double v = squared_distance(cloud.point(static_cast<std::size_t>(i)),
                                        cloud.point(static_cast<std::size_t>(j)));
      dist2(i, j) = v;
      dist2(j, i) = v;
    }
  }
  Eigen::MatrixXd w = (-dist2 / (4.0 * h1 * h1)).array().exp().matrix();
  const Eigen::VectorXd degree = w.rowwise().sum();
  for (Eigen::Index i = 0; i < N; ++i) {
    if (!(degree[i] > 0.0) || !std::isfinite(degree[i])) {
      throw NumericalError(static_cast<std::size_t>(i), "harmonic_basis: degenerate graph degree");
    }
  }

  // (3) W_ij = w_ij / (d_i d_j), D_ii = sum_j W_ij
  const Eigen::VectorXd inv_degree = degree.cwiseInverse();
  w = inv_degree.asDiagonal() * w * inv_degree.asDiagonal();
  const Eigen::VectorXd big_d = w.rowwise().sum();
  for (Eigen::Index i = 0; i < N; ++i) {
    if (!(big_d[i] > 0.0)) {
      throw NumericalError(static_cast<std::size_t>(i), "harmonic_basis: degenerate normalised degree");
    }
  }

  // (4)-(5) L_n = (I - D^-1 W) / h1^2 is similar to (I - D^-1/2 W D^-1/2) / h1^2.
  // Its smallest eigenvalues are the largest of the symmetric D^-1/2 W D^-1/2.
  const Eigen::VectorXd inv_sqrt_d = big_d.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd normalized = inv_sqrt_d.asDiagonal() * w * inv_sqrt_d.asDiagonal();
  normalized = 0.5 * (normalized + normalized.transpose()).eval();
  w.resize(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(0, "harmonic_basis: eigensolver did not converge");
  }
  normalized.resize(0, 0);

  HarmonicBasis basis;
  basis.laplacian_eigenvalues.resize(M);
  basis.eigenvectors.resize(N, M);
  for (Eigen::Index i = 0; i < M; ++i) {
    const Eigen::Index src = N - 1 - i;
    basis.laplacian_eigenvalues[i] = (1.0 - solver.eigenvalues()[src]) / (h1 * h1);
    basis.eigenvectors.col(i) = inv_sqrt_d.cwiseProduct(solver.eigenvectors().col(src));
  }
  fix_signs(basis.eigenvectors);

  // (6) point-wise renormalisation with closed-ball counts
  basis.ball_counts.resize(N);
  const double h1_sq = h1 * h1;
  for (Eigen::Index i = 0; i < N; ++i) {
    basis.ball_counts[i] = static_cast<double>((dist2.col(i).array() <= h1_sq).count());
  }
  const double ball_volume = unit_sphere_area(options.d_manifold) *
                             std::pow(h1, static_cast<double>(options.d_manifold)) /
                             static_cast<double>(options.d_manifold);
  basis.renormalized.resize(N, M);
  for (Eigen::Index i = 0; i < M; ++i) {
    const double mass =
        ball_volume * (basis.eigenvectors.col(i).cwiseAbs2().cwiseQuotient(basis.ball_counts)).sum();
    basis.renormalized.col(i) = basis.eigenvectors.col(i) / std::sqrt(mass);
  }

  // (7) density estimate
  basis.density = kde_density(cloud, options.h2, options.profile, options.d_manifold);
  for (Eigen::Index i = 0; i < N; ++i) {
    if (!(basis.density[i] > 0.0)) {
      throw NumericalError(static_cast<std::size_t>(i), "harmonic_basis: density estimate is zero");
    }
  }

  // (8) orthonormalise under omega_n = (1/n) sum_x delta_x / e[p](x)
  const Eigen::VectorXd omega = basis.density.cwiseInverse() / static_cast<double>(n);
  basis.orthonormal = weighted_gram_schmidt(basis.renormalized, omega);
  return basis;
}

HarmonicKernel harmonic_kernel_from_basis(const HarmonicBasis& basis, std::size_t m) {
  const auto M = static_cast<Eigen::Index>(m);
  if (m == 0 || M > basis.orthonormal.cols()) {
    throw InvalidArgument("harmonic_kernel_from_basis: m = " + std::to_string(m) +
                          " exceeds the basis order");
  }
  const auto n = static_cast<double>(basis.density.size());

  // (9) K_n = E^-1/2 V V^T E^-1/2
  Eigen::MatrixXd factor =
      basis.density.cwiseSqrt().cwiseInverse().asDiagonal() * basis.orthonormal.leftCols(M);

  // (10) nonzero spectrum of F F^T equals that of the m x m matrix F^T F
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(factor.transpose() * factor,
                                                       Eigen::EigenvaluesOnly);
  const double lambda_max = small.eigenvalues().maxCoeff();
  const double rescale = std::max(1.0, lambda_max / n);
  factor /= std::sqrt(rescale);

  HarmonicKernel out{KernelMatrix(symmetric_product(factor)), std::move(factor), rescale};
  return out;
}

KernelMatrix harmonic_kernel(const PointCloud& cloud, std::size_t m, const HarmonicOptions& options) {
  return harmonic_kernel_from_basis(harmonic_basis(cloud, m, options), m).kernel;
}

AdjacencyMatrix latent_graph(const PointCloud& cloud, const ContinuousKernel& k, double alpha,
                             SeededRng& rng) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("latent_graph: alpha must lie in [0, 1]");
  const auto N = static_cast<Eigen::Index>(cloud.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = i + 1; j < N; ++j) {
      const double p = alpha * k.eval(cloud.point(static_cast<std::size_t>(i)),
                                      cloud.point(static_cast<std::size_t>(j)));
      if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("latent_graph: edge probability " + std::to_string(p) +
                              " outside [0, 1] for pair (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      }
      if (rng.bernoulli(p)) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return AdjacencyMatrix(std::move(a));
}

UsvtEstimate usvt_estimate(const AdjacencyMatrix& adjacency, double alpha, double c, double rho) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("usvt: alpha must lie in (0, 1]");
  if (!(c >= 0.0 && c <= 1.0)) throw InvalidArgument("usvt: diagonal value c must lie in [0, 1]");
  if (!(rho > 0.0)) throw InvalidArgument("usvt: rho must be positive");
  const auto N = static_cast<Eigen::Index>(adjacency.size());
  const auto n = static_cast<double>(N);

  UsvtEstimate out;
  out.threshold = rho * std::pow(alpha * n, 0.75);

  Eigen::MatrixXd kept = Eigen::MatrixXd::Zero(N, N);
  double trace = 0.0;
  double top = 0.0;
  if (N > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency.matrix());
    if (solver.info() != Eigen::Success) throw NumericalError(0, "usvt: eigensolver did not converge");
    const auto& lambda = solver.eigenvalues();
    Eigen::Index first = N;
    while (first > 0 && lambda[first - 1] >= out.threshold) --first;
    out.rank = static_cast<std::size_t>(N - first);
    if (out.rank > 0) {
      const auto vecs = solver.eigenvectors().rightCols(N - first);
      const Eigen::VectorXd scaled = lambda.tail(N - first) / alpha;
      kept = vecs * scaled.asDiagonal() * vecs.transpose();
      trace = scaled.sum();
      top = scaled.maxCoeff();
    }
  }

  out.diagonal_shift = N > 0 ? std::max(c - trace / n, 0.0) : 0.0;
  kept.diagonal().array() += out.diagonal_shift;
  const double lambda_max = top + out.diagonal_shift;
  const double shrink = 1.0 / (1.0 + std::pow(alpha * n, -0.25));
  out.scale = lambda_max > 0.0 ? std::min(n / lambda_max, shrink) : shrink;
  kept *= out.scale;
  out.kernel = KernelMatrix(0.5 * (kept + kept.transpose()));
  return out;
}

KernelMatrix usvt_kernel(const AdjacencyMatrix& adjacency, double alpha, double c, double rho) {
  return usvt_estimate(adjacency, alpha, c, rho).kernel;
}

}  // namespace dpplimits
