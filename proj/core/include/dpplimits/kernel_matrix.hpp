#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>

#include "dpplimits/point_cloud.hpp"

namespace dpplimits {

/// Dense real symmetric n x n kernel of DPP(K_n, mu_n), where mu_n puts mass
/// 1/n on each point: P(A subset of S) = det(K_A) / n^|A|.
///
/// Construction checks squareness, finiteness and symmetry up to
/// 1e-10 * max|K|; entries are then symmetrised exactly.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  explicit KernelMatrix(Eigen::MatrixXd entries);

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  double trace() const noexcept { return entries_.trace(); }

 private:
  Eigen::MatrixXd entries_;
};

/// Relative asymmetry tolerance shared by every kernel check.
inline constexpr double kSymmetryTolerance = 1e-10;

/// Symmetric function K(x, y) on R^d with a declared bound max |K| and, when
/// it is constant, the diagonal value K(x, x) = c.
struct ContinuousKernel {
  std::function<double(PointRef, PointRef)> eval;
  std::optional<double> diagonal;
  double max_abs = 0.0;
};

ContinuousKernel constant_kernel(double value);

/// amplitude * exp(-|x - y|^2 / (2 length_scale^2)).
ContinuousKernel gaussian_kernel(double amplitude, double length_scale);

/// Symmetric 0/1 adjacency matrix of an undirected simple graph.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  /// Throws InvalidArgument unless entries are 0/1, symmetric, zero diagonal.
  explicit AdjacencyMatrix(Eigen::MatrixXd entries);

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  std::size_t edge_count() const noexcept;

 private:
  Eigen::MatrixXd entries_;
};

/// Same layout as point files with header `n=<n>`.
KernelMatrix load_kernel(const std::filesystem::path& path);
void save_kernel(const KernelMatrix& kernel, const std::filesystem::path& path);

}  // namespace dpplimits
