#include "dpplimits/point_cloud.hpp"

#include <cmath>
#include <fstream>

#include "dpplimits/error.hpp"
#include "dpplimits/text_io.hpp"

namespace dpplimits {

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows, std::size_t dim) {
  CoordMatrix coords(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw InvalidArgument("point " + std::to_string(i) + " has dimension " +
                            std::to_string(rows[i].size()) + ", expected " + std::to_string(dim));
    }
    for (std::size_t k = 0; k < dim; ++k) {
      coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  return PointCloud(std::move(coords));
}

double squared_distance(PointRef x, PointRef y) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - y[k];
    s += diff * diff;
  }
  return s;
}

PointCloud sample_uniform_cube(std::size_t n, std::size_t d, SeededRng& rng) {
  if (d == 0) throw InvalidArgument("sample_uniform_cube: dimension must be >= 1");
  CoordMatrix coords(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    for (Eigen::Index k = 0; k < coords.cols(); ++k) coords(i, k) = rng.uniform(-1.0, 1.0);
  }
  return PointCloud(std::move(coords));
}

PointCloud sample_uniform_sphere(std::size_t n, SeededRng& rng) {
  CoordMatrix coords(static_cast<Eigen::Index>(n), 3);
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    double norm2 = 0.0;
    do {
      for (Eigen::Index k = 0; k < 3; ++k) coords(i, k) = rng.normal();
      norm2 = coords.row(i).squaredNorm();
    } while (norm2 < 1e-300);
    coords.row(i) /= std::sqrt(norm2);
  }
  return PointCloud(std::move(coords));
}

PointCloud load_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open point file '" + path.string() + "'");
  const std::size_t dim = text_io::read_size_header(in, "d");
  if (dim == 0) throw ParseError(1, "dimension must be >= 1");
  std::size_t rows = 0;
  auto values = text_io::read_rows(in, dim, rows);
  CoordMatrix coords = Eigen::Map<CoordMatrix>(values.data(), static_cast<Eigen::Index>(rows),
                                               static_cast<Eigen::Index>(dim));
  return PointCloud(std::move(coords));
}

void save_points(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write point file '" + path.string() + "'");
  out << "d=" << cloud.dim() << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto x = cloud.point(i);
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (k) out << ' ';
      out << text_io::format_double(x[k]);
    }
    out << '\n';
  }
}

}  // namespace dpplimits
