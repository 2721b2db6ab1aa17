#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "dpplimits/error.hpp"
#include "dpplimits/kernel_matrix.hpp"
#include "dpplimits/point_cloud.hpp"
#include "test_helpers.hpp"

namespace dpplimits {
namespace {

TEST(PointCloud, FromRowsRejectsRagged) {
  EXPECT_THROW(PointCloud::from_rows({{1.0, 2.0}, {3.0}}, 2), InvalidArgument);
  const auto cloud = PointCloud::from_rows({{1.0, 2.0}, {3.0, 4.0}}, 2);
  EXPECT_EQ(cloud.size(), 2u);
  EXPECT_EQ(cloud.point(1)[0], 3.0);
  EXPECT_EQ(squared_distance(cloud.point(0), cloud.point(1)), 8.0);
}

TEST(PointCloud, UniformCubeInBoxWithCentredMean) {
  SeededRng rng(1, 1);
  const auto cloud = sample_uniform_cube(20000, 3, rng);
  EXPECT_LE(cloud.coords().maxCoeff(), 1.0);
  EXPECT_GE(cloud.coords().minCoeff(), -1.0);
  const auto mean = cloud.coords().colwise().mean();
  for (Eigen::Index k = 0; k < 3; ++k) EXPECT_NEAR(mean(k), 0.0, 5.0 / std::sqrt(3.0 * 20000));
  EXPECT_THROW(sample_uniform_cube(5, 0, rng), InvalidArgument);
}

TEST(PointCloud, UniformSphereOnUnitSphereIsotropic) {
  SeededRng rng(2, 1);
  const auto cloud = sample_uniform_sphere(20000, rng);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    ASSERT_NEAR(p[0] * p[0] + p[1] * p[1] + p[2] * p[2], 1.0, 1e-12);
  }
  // E z^2 = 1/3 on the sphere.
  EXPECT_NEAR(cloud.coords().col(2).squaredNorm() / 20000.0, 1.0 / 3.0, 0.01);
}

TEST(PointCloud, SaveLoadIsBitExact) {
  SeededRng rng(3, 1);
  const auto cloud = sample_uniform_cube(50, 4, rng);
  const auto path = testing::scratch("cloud.txt");
  save_points(cloud, path);
  EXPECT_EQ(load_points(path), cloud);
}

TEST(PointCloud, LoadReportsLineOfBadRow) {
  const auto path = testing::scratch("bad_cloud.txt");
  std::ofstream(path) << "d=2\n1 2\n3 4 5\n";
  try {
    load_points(path);
    FAIL();
  } catch (const DimensionMismatch& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::ofstream(path) << "dim=2\n1 2\n";
  EXPECT_THROW(load_points(path), ParseError);
}

TEST(KernelMatrix, ValidatesShapeFinitenessSymmetry) {
  EXPECT_THROW(KernelMatrix(Eigen::MatrixXd::Zero(2, 3)), InvalidArgument);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(0, 1) = std::nan("");
  EXPECT_THROW(KernelMatrix{bad}, NumericalError);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.1;
  EXPECT_THROW(KernelMatrix{asym}, KernelValidationError);
  // Tiny asymmetry is symmetrised away.
  asym(0, 1) = 1e-13;
  const KernelMatrix k(asym);
  EXPECT_EQ(k(0, 1), k(1, 0));
}

TEST(KernelMatrix, SaveLoadRoundTrip) {
  const KernelMatrix k(testing::square(3, {2.0, 0.5, 0.2, 0.5, 1.5, 0.3, 0.2, 0.3, 1.0}));
  const auto path = testing::scratch("kernel.txt");
  save_kernel(k, path);
  EXPECT_EQ(load_kernel(path).matrix(), k.matrix());
}

TEST(AdjacencyMatrix, RejectsInvalidGraphs) {
  EXPECT_THROW(AdjacencyMatrix(Eigen::MatrixXd::Identity(3, 3)), InvalidArgument);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = 1.0;
  EXPECT_THROW(AdjacencyMatrix{a}, InvalidArgument);
  a(1, 0) = 1.0;
  EXPECT_EQ(AdjacencyMatrix(a).edge_count(), 1u);
  a(1, 0) = a(0, 1) = 0.5;
  EXPECT_THROW(AdjacencyMatrix{a}, InvalidArgument);
}

TEST(ContinuousKernel, GaussianAndConstant) {
  const auto g = gaussian_kernel(0.7, 0.5);
  const std::vector<double> x{0.0, 0.0}, y{0.3, 0.4};
  EXPECT_NEAR(g.eval(x, y), 0.7 * std::exp(-0.25 / 0.5), 1e-15);
  EXPECT_EQ(g.max_abs, 0.7);
  const auto c = constant_kernel(1.0);
  EXPECT_EQ(c.eval(x, y), 1.0);
  EXPECT_EQ(c.diagonal.value(), 1.0);
  EXPECT_THROW(gaussian_kernel(1.0, 0.0), InvalidArgument);
}

}  // namespace
}  // namespace dpplimits
