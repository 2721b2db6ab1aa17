#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dpplimits/dpp.hpp"
#include "dpplimits/kernel_matrix.hpp"
#include "dpplimits/point_cloud.hpp"

namespace dpplimits {

/// r-point test function phi_r : (R^d)^r -> R with a declared sup bound.
struct TestFunction {
  std::size_t arity = 1;
  std::function<double(std::span<const PointRef>)> eval;
  double sup_bound = 0.0;
  std::string support;  ///< free-form description, may be empty
};

TestFunction constant_function(std::size_t arity, double value);
/// phi(x) = x(coordinate); the bound is caller-declared.
TestFunction coordinate_function(std::size_t coordinate, double sup_bound);
/// Wraps a one-point function.
TestFunction one_point_function(std::function<double(PointRef)> f, double sup_bound);

/// Sum of phi over ordered r-tuples of distinct sample members. An iid sample
/// contributes each index once per multiplicity. Returns 0 when r > |S|.
double linear_statistic(const TestFunction& phi, const PointCloud& cloud, const IndexSample& sample);

/// Work budget (number of r-tuples) for the exact tuple summations below.
inline constexpr double kTupleBudget = 1e8;

/// sum over i_1..i_r of phi(x_i1..x_ir) det([K]_{i1..ir}) n^-r, where
/// tuples with a repeated index contribute 0. Throws InfeasibleError when
/// n^r exceeds the budget.
double expected_linear_statistic(const KernelMatrix& kernel, const PointCloud& cloud,
                                 const TestFunction& phi);

/// Same sum with the kernel evaluated lazily from k, i.e. the expectation
/// under DPP(Gram(k, cloud), mu_n) without materialising the Gram matrix.
double expected_linear_statistic(const ContinuousKernel& k, const PointCloud& cloud,
                                 const TestFunction& phi);

struct Moments {
  std::vector<double> raw;      ///< raw[j-1] = mean of x^j
  std::vector<double> central;  ///< central[j-1] = mean of (x - m_1)^j
};

Moments empirical_moments(std::span<const double> values, std::size_t order);

/// |sum_tuples phi (det[K]_t - det[G]_t) n^-r|.
double kernel_error(const KernelMatrix& kernel, const KernelMatrix& reference,
                    const PointCloud& cloud, const TestFunction& phi);

/// |E_{Gram(k, cloud)} Lambda - E_{Gram(k, reference)} Lambda|; the reference
/// cloud is a large iid draw standing in for the continuous measure.
double measure_error(const ContinuousKernel& k, const PointCloud& cloud, const TestFunction& phi,
                     const PointCloud& reference);

// ---------------------------------------------------------------------------
// Determinant-stability bounds

struct DetBoundMax {
  double lhs_max = 0.0;  ///< max_I |det A_I - det B_I|
  double rhs = 0.0;      ///< r! sum_j maxA^(j-1) max|A-B| maxB^(r-j)
  std::size_t subsets = 0;
  bool exhaustive = true;
  std::uint64_t seed = 0;  ///< used only when not exhaustive
};

inline constexpr double kExhaustiveSubsetBudget = 1e6;
inline constexpr std::size_t kRandomSubsetCount = 10000;

/// Entry-wise determinant bound on r x r principal minors. Exhaustive when
/// C(n, r) <= 1e6, otherwise 1e4 uniform random r-subsets from `seed`.
DetBoundMax det_bound_max(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::size_t r,
                          std::uint64_t seed = 0);

struct DetBoundFrobenius {
  double lhs_signed = 0.0;  ///< |sum_I (det A_I - det B_I)|
  double lhs_abs = 0.0;     ///< sum_I |det A_I - det B_I|
  double rhs = 0.0;         ///< r r! M^(r-1) max(|A-B|_F, |trA - trB|)
};

inline constexpr std::size_t kMaxFrobeniusBoundSize = 14;

/// Frobenius/trace determinant bound, exhaustive over r-subsets (n <= 14).
DetBoundFrobenius det_bound_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                      std::size_t r);

/// One row of a bound-checker report.
struct BoundTrial {
  std::size_t trial = 0;
  std::string bound;  ///< "max" | "frobenius_signed" | "frobenius_abs"
  std::size_t n = 0;
  std::size_t r = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// CSV with header `trial,bound,n,r,lhs,rhs,ratio`.
void write_bound_csv(std::ostream& out, std::span<const BoundTrial> trials);

/// Binomial coefficient as a double (exact below 2^53).
double binomial(std::size_t n, std::size_t k) noexcept;

}  // namespace dpplimits
