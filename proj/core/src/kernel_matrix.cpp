#include "dpplimits/kernel_matrix.hpp"

#include <cmath>
#include <fstream>

#include "dpplimits/error.hpp"
#include "dpplimits/text_io.hpp"

namespace dpplimits {

KernelMatrix::KernelMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw InvalidArgument("kernel matrix must be square, got " + std::to_string(entries_.rows()) +
                          "x" + std::to_string(entries_.cols()));
  }
  const Eigen::Index n = entries_.rows();
  double max_abs = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = entries_(i, j);
      if (!std::isfinite(v)) {
        throw NumericalError(static_cast<std::size_t>(i * n + j), "non-finite kernel entry");
      }
      max_abs = std::max(max_abs, std::abs(v));
    }
  }
  const double tol = kSymmetryTolerance * max_abs;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double gap = std::abs(entries_(i, j) - entries_(j, i));
      if (gap > tol) {
        throw KernelValidationError(gap, "kernel matrix is not symmetric at (" + std::to_string(i) +
                                              ", " + std::to_string(j) + ")");
      }
      const double mid = 0.5 * (entries_(i, j) + entries_(j, i));
      entries_(i, j) = mid;
      entries_(j, i) = mid;
    }
  }
}

ContinuousKernel constant_kernel(double value) {
  return {[value](PointRef, PointRef) { return value; }, value, std::abs(value)};
}

ContinuousKernel gaussian_kernel(double amplitude, double length_scale) {
  if (!(length_scale > 0.0)) throw InvalidArgument("gaussian_kernel: length scale must be positive");
  const double scale = 1.0 / (2.0 * length_scale * length_scale);
  return {[amplitude, scale](PointRef x, PointRef y) {
            return amplitude * std::exp(-scale * squared_distance(x, y));
          },
          amplitude, std::abs(amplitude)};
}

AdjacencyMatrix::AdjacencyMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw InvalidArgument("adjacency matrix must be square");
  const Eigen::Index n = entries_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (entries_(i, i) != 0.0) throw InvalidArgument("adjacency matrix has a self-loop at " + std::to_string(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = entries_(i, j);
      if ((v != 0.0 && v != 1.0) || v != entries_(j, i)) {
        throw InvalidArgument("adjacency matrix must be symmetric 0/1");
      }
    }
  }
}

std::size_t AdjacencyMatrix::edge_count() const noexcept {
  return static_cast<std::size_t>(entries_.sum() / 2.0);
}

KernelMatrix load_kernel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open kernel file '" + path.string() + "'");
  const std::size_t n = text_io::read_size_header(in, "n");
  std::size_t rows = 0;
  auto values = text_io::read_rows(in, n, rows);
  if (rows != n) {
    throw DimensionMismatch(rows + 2, "expected " + std::to_string(n) + " rows, found " + std::to_string(rows));
  }
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::MatrixXd m = Eigen::Map<RowMajor>(values.data(), static_cast<Eigen::Index>(n),
                                           static_cast<Eigen::Index>(n));
  return KernelMatrix(std::move(m));
}

void save_kernel(const KernelMatrix& kernel, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write kernel file '" + path.string() + "'");
  out << "n=" << kernel.size() << '\n';
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    for (std::size_t j = 0; j < kernel.size(); ++j) {
      if (j) out << ' ';
      out << text_io::format_double(kernel(i, j));
    }
    out << '\n';
  }
}

}  // namespace dpplimits
