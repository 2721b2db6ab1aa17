#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "dpplimits/rng.hpp"

namespace dpplimits {

using PointRef = std::span<const double>;
using CoordMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Ordered set X_n = {x_1, ..., x_n} in R^d. Row i of coords() is x_i; that
/// order is the index <-> point correspondence every kernel matrix uses.
/// Immutable once built.
class PointCloud {
 public:
  explicit PointCloud(std::size_t dim = 0) : coords_(0, static_cast<Eigen::Index>(dim)) {}
  explicit PointCloud(CoordMatrix coords) : coords_(std::move(coords)) {}

  /// Throws InvalidArgument if rows have different lengths.
  static PointCloud from_rows(const std::vector<std::vector<double>>& rows, std::size_t dim);

  std::size_t size() const noexcept { return static_cast<std::size_t>(coords_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(coords_.cols()); }
  bool empty() const noexcept { return size() == 0; }

  PointRef point(std::size_t i) const noexcept {
    return {coords_.data() + i * dim(), dim()};
  }
  const CoordMatrix& coords() const noexcept { return coords_; }

  friend bool operator==(const PointCloud& a, const PointCloud& b) {
    return a.coords_.rows() == b.coords_.rows() && a.coords_.cols() == b.coords_.cols() &&
           a.coords_ == b.coords_;
  }

 private:
  CoordMatrix coords_;
};

double squared_distance(PointRef x, PointRef y) noexcept;

/// n iid points, each coordinate uniform on [-1, 1].
PointCloud sample_uniform_cube(std::size_t n, std::size_t d, SeededRng& rng);

/// n iid points uniform on the unit sphere S^2 in R^3, obtained by
/// normalising standard Gaussian vectors.
PointCloud sample_uniform_sphere(std::size_t n, SeededRng& rng);

/// Text format: a header line `d=<dim>` followed by one whitespace-separated
/// row per point. Values are written in shortest round-trip form, so
/// save -> load is bit-exact.
PointCloud load_points(const std::filesystem::path& path);
void save_points(const PointCloud& cloud, const std::filesystem::path& path);

}  // namespace dpplimits
