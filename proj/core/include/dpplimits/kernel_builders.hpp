#pragma once

#include <Eigen/Core>
#include <compare>
#include <cstddef>
#include <functional>
#include <vector>

#include "dpplimits/kernel_matrix.hpp"
#include "dpplimits/point_cloud.hpp"
#include "dpplimits/rng.hpp"

namespace dpplimits {

// ---------------------------------------------------------------------------
// Gram restriction

/// entries(i, j) = k(x_i, x_j). Throws NumericalError naming the flat index
/// i * n + j of the first non-finite evaluation.
KernelMatrix gram_kernel(const ContinuousKernel& k, const PointCloud& cloud);

// ---------------------------------------------------------------------------
// Orthogonal polynomial ensemble

/// Exponents (beta_1, ..., beta_d) of the monomial x(1)^beta_1 ... x(d)^beta_d.
struct MultiIndex {
  std::vector<unsigned> degrees;

  unsigned total_degree() const noexcept;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

/// First m multi-indices in graded lexical order: by total degree, then
/// lexicographically ascending with beta_1 most significant. For d = 2 this
/// starts (0,0), (0,1), (1,0), (0,2), (1,1), (2,0), ...
std::vector<MultiIndex> graded_monomials(std::size_t d, std::size_t m);

/// Gram-Schmidt (two classical passes) of the columns of `columns` under
/// <u, v> = sum_k weights_k u_k v_k. A residual norm below 1e-10 times the
/// input column norm raises RankDeficiency with that column's index.
Eigen::MatrixXd weighted_gram_schmidt(const Eigen::MatrixXd& columns,
                                      const Eigen::VectorXd& weights);

/// Values on X_n of the first m orthonormal polynomials under mu_n
/// (column i holds P_{i+1}). The monomials are expanded in a tensor
/// Chebyshev basis on the cloud's bounding box before orthogonalisation;
/// every prefix of that basis spans the same space as the corresponding
/// prefix of graded monomials, so the result is unchanged up to column
/// signs while the conditioning is far better than raw powers.
Eigen::MatrixXd ope_basis(const PointCloud& cloud, std::size_t m);

/// factor * factor^T as a symmetric rank update (exactly symmetric).
KernelMatrix factored_kernel(const Eigen::MatrixXd& factor);

/// [K_n]_{jk} = sum_i P_i(x_j) P_i(x_k); K_n / n is a rank-m projection.
KernelMatrix ope_kernel(const PointCloud& cloud, std::size_t m);

// ---------------------------------------------------------------------------
// Discrete harmonic ensemble

using RadialProfile = std::function<double(double)>;

/// Volume of the unit ball in R^d and area |S^{d-1}| of its boundary.
double unit_ball_volume(std::size_t d);
double unit_sphere_area(std::size_t d);

/// l(t) = 1_{[0,1]}(t) / vol(B^d); for d = 2 this is 1_{[0,1]} / pi.
RadialProfile indicator_profile(std::size_t d_manifold);

/// e[p](x) = 1 / (n h2^d_manifold) * sum_i l(|x_i - x| / h2) at every x in X_n.
Eigen::VectorXd kde_density(const PointCloud& cloud, double h2, const RadialProfile& profile,
                            std::size_t d_manifold);

struct HarmonicOptions {
  double h1 = 0.0;  ///< graph bandwidth (also the ball radius of the renormalisation)
  double h2 = 0.0;  ///< density-estimator bandwidth
  RadialProfile profile;
  std::size_t d_manifold = 2;
};

/// h2 = (log n / n)^(1/4), h1 = (log n / n)^(1/16), l = indicator profile.
HarmonicOptions default_harmonic_options(std::size_t n, std::size_t d_manifold = 2);

/// Intermediate quantities of the construction, for the largest order
/// requested. Column i of every matrix belongs to the i-th smallest
/// Laplacian eigenvalue. Gram-Schmidt is nested, so the kernel of any
/// order m' <= m is obtained from the first m' columns.
struct HarmonicBasis {
  Eigen::VectorXd laplacian_eigenvalues;  ///< ascending eigenvalues of L_n
  Eigen::MatrixXd eigenvectors;           ///< eigenvectors of L_n, D-normalised
  Eigen::VectorXd ball_counts;            ///< #(closed B(x_i, h1) cap X_n)
  Eigen::MatrixXd renormalized;           ///< point-wise renormalised u_i
  Eigen::VectorXd density;                ///< e[p] on X_n
  Eigen::MatrixXd orthonormal;            ///< v_i, orthonormal under omega_n
};

HarmonicBasis harmonic_basis(const PointCloud& cloud, std::size_t m, const HarmonicOptions& options);

struct HarmonicKernel {
  KernelMatrix kernel;
  Eigen::MatrixXd factor;  ///< kernel = factor * factor^T
  double rescale = 1.0;    ///< max(1, lambda_max / n) divided out
};

HarmonicKernel harmonic_kernel_from_basis(const HarmonicBasis& basis, std::size_t m);

KernelMatrix harmonic_kernel(const PointCloud& cloud, std::size_t m, const HarmonicOptions& options);

// ---------------------------------------------------------------------------
// Latent position random graphs and USVT

/// a_ij = a_ji ~ Bernoulli(alpha k(x_i, x_j)) independently for i < j.
AdjacencyMatrix latent_graph(const PointCloud& cloud, const ContinuousKernel& k, double alpha,
                             SeededRng& rng);

struct UsvtEstimate {
  KernelMatrix kernel;
  double threshold = 0.0;      ///< gamma_n = rho (alpha n)^(3/4)
  std::size_t rank = 0;        ///< eigenvalues of A kept
  double diagonal_shift = 0.0; ///< max(c - tr(A~)/n, 0)
  double scale = 0.0;          ///< C' applied to A-bar
};

UsvtEstimate usvt_estimate(const AdjacencyMatrix& adjacency, double alpha, double c, double rho);
KernelMatrix usvt_kernel(const AdjacencyMatrix& adjacency, double alpha, double c, double rho);

}  // namespace dpplimits
