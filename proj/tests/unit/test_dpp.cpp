#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dpplimits/checks.hpp"
#include "dpplimits/dpp.hpp"
#include "dpplimits/error.hpp"
#include "dpplimits/kernel_builders.hpp"
#include "test_helpers.hpp"

namespace dpplimits {
namespace {

using testing::square;

KernelMatrix oracle_kernel3() {
  return KernelMatrix(square(3, {2.0, 0.5, 0.2, 0.5, 1.5, 0.3, 0.2, 0.3, 1.0}));
}

double total_variation(const SubsetPmf& pmf, const std::vector<double>& counts, double draws) {
  double tv = 0.0;
  for (std::size_t mask = 0; mask < counts.size(); ++mask) tv += std::abs(counts[mask] / draws - pmf[mask]);
  return 0.5 * tv;
}

TEST(Validation, AcceptsAdmissibleAndRejectsOutOfRange) {
  EXPECT_NO_THROW(validate_kernel(oracle_kernel3()));
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(6, 6);
  big(0, 0) = 7.0;
  try {
    validate_kernel(KernelMatrix(big));
    FAIL();
  } catch (const KernelValidationError& e) {
    EXPECT_NEAR(e.value(), 7.0, 1e-12);
  }
  EXPECT_THROW(validate_kernel(KernelMatrix(-Eigen::MatrixXd::Identity(3, 3))), KernelValidationError);
}

TEST(Validation, ClampsWithinTolerance) {
  const KernelMatrix k(Eigen::MatrixXd::Identity(4, 4) * (4.0 * (1.0 + 1e-10)));
  const auto dpp = validate_kernel(k);
  EXPECT_LE(dpp.eigenvalues().maxCoeff(), 4.0);
  EXPECT_NEAR(dpp.expected_size(), 4.0, 1e-8);
}

TEST(Validation, FactoredMatchesDense) {
  SeededRng rng(1, 1);
  const auto cloud = sample_uniform_cube(40, 2, rng);
  const auto basis = ope_basis(cloud, 5);
  const auto k = factored_kernel(basis);
  const auto fact = validate_factored(k, basis);
  const auto dense = validate_kernel(k);
  EXPECT_EQ(fact.eigenvalues().size(), 5);
  EXPECT_NEAR(fact.eigenvalues().sum(), dense.eigenvalues().sum(), 1e-9);
  EXPECT_THROW(validate_factored(k, basis.leftCols(4)), KernelValidationError);
}

TEST(Pmf, MatchesOracleTable) {
  const std::vector<double> expected{0.08481481481481484, 0.23851851851851846, 0.13296296296296298,
                                     0.21037037037037043, 0.054074074074074094, 0.12259259259259259,
                                     0.06148148148148148, 0.09518518518518516};
  const auto pmf = enumerate_pmf(validate_kernel(oracle_kernel3()));
  for (std::size_t mask = 0; mask < 8; ++mask) EXPECT_NEAR(pmf[mask], expected[mask], 1e-14) << mask;
  EXPECT_NEAR(pmf.total(), 1.0, 1e-14);
}

TEST(Pmf, MarginalsEqualInclusionDeterminants) {
  SeededRng rng(2, 2);
  const auto k = random_valid_kernel(7, rng);
  const auto pmf = enumerate_pmf(validate_kernel(k));
  EXPECT_NEAR(pmf.total(), 1.0, 1e-12);
  for (const auto& subset : std::vector<std::vector<std::size_t>>{{0}, {3}, {1, 4}, {0, 2, 6}, {1, 2, 3, 5}}) {
    EXPECT_NEAR(pmf.marginal(subset_mask(subset)), inclusion_probability(k, subset), 1e-12);
  }
  EXPECT_EQ(inclusion_probability(k, {}), 1.0);
  const std::vector<std::size_t> dup{1, 1};
  EXPECT_THROW(inclusion_probability(k, dup), InvalidArgument);
  const std::vector<std::size_t> out_of_range{9};
  EXPECT_THROW(inclusion_probability(k, out_of_range), InvalidArgument);
}

TEST(Pmf, RefusesLargeEnumeration) {
  const KernelMatrix k(Eigen::MatrixXd::Identity(21, 21));
  EXPECT_THROW(enumerate_pmf(validate_kernel(k)), InfeasibleError);
}

TEST(Sampler, ProjectionDrawsHaveFixedSize) {
  SeededRng rng(3, 3);
  const auto dpp = validate_kernel(random_projection_kernel(30, 7, rng));
  for (int i = 0; i < 500; ++i) {
    const auto s = sample_dpp(dpp, rng);
    ASSERT_EQ(s.size(), 7u);
    ASSERT_TRUE(std::is_sorted(s.indices.begin(), s.indices.end()));
    ASSERT_TRUE(std::adjacent_find(s.indices.begin(), s.indices.end()) == s.indices.end());
  }
}

TEST(Sampler, DeterministicGivenStream) {
  SeededRng a(4, 9), b(4, 9);
  const auto dpp = validate_kernel(oracle_kernel3());
  for (int i = 0; i < 100; ++i) ASSERT_EQ(sample_dpp(dpp, a).indices, sample_dpp(dpp, b).indices);
}

// Near-uniform subset laws maximise Monte-Carlo noise; at 10^6 draws the
// total variation must still sit well below the 10^5-draw tolerance.
TEST(Sampler, TotalVariationAtOneMillionDraws) {
  const std::size_t n = 8, draws = 1000000;
  for (std::uint64_t kernel = 0; kernel < 3; ++kernel) {
    SeededRng krng(5, kernel);
    const auto dpp = validate_kernel(random_spectrum_kernel(n, krng));
    const auto pmf = enumerate_pmf(dpp);
    std::vector<double> counts(1u << n, 0.0);
    SeededRng rng(6, kernel);
    for (std::size_t t = 0; t < draws; ++t) counts[subset_mask(sample_dpp(dpp, rng).indices)] += 1.0;
    EXPECT_LT(total_variation(pmf, counts, static_cast<double>(draws)), 0.01) << "kernel " << kernel;
  }
}

TEST(Sampler, CardinalityMeanAndVariance) {
  // |S| is a sum of independent Bernoulli(lambda_i / n).
  SeededRng krng(7, 1);
  const auto dpp = validate_kernel(random_valid_kernel(25, krng));
  const Eigen::ArrayXd p = dpp.eigenvalues().array() / 25.0;
  const double mean = p.sum(), var = (p * (1 - p)).sum();
  SeededRng rng(7, 2);
  const int draws = 40000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double k = static_cast<double>(sample_dpp(dpp, rng).size());
    s += k;
    s2 += k * k;
  }
  EXPECT_NEAR(s / draws, mean, 5.0 * std::sqrt(var / draws));
  EXPECT_NEAR(s2 / draws - (s / draws) * (s / draws), var, 0.05 * var + 0.02);
}

TEST(SampleIid, FrequenciesAndMultiplicities) {
  const std::vector<double> p{0.1, 0.0, 0.6, 0.3};
  SeededRng rng(8, 8);
  std::vector<double> counts(4, 0.0);
  const int reps = 20000;
  for (int r = 0; r < reps; ++r) {
    const auto s = sample_iid(p, 5, rng);
    ASSERT_EQ(s.total_count(), 5u);
    ASSERT_EQ(s.multiplicities.size(), s.indices.size());
    for (std::size_t k = 0; k < s.size(); ++k) counts[s.indices[k]] += static_cast<double>(s.multiplicity(k));
  }
  EXPECT_EQ(counts[1], 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    const double n = 5.0 * reps;
    EXPECT_NEAR(counts[i] / n, p[i], 5.0 * std::sqrt(p[i] * (1 - p[i]) / n) + 1e-12);
  }
  const std::vector<double> bad{0.5, -0.1};
  EXPECT_THROW(sample_iid(bad, 1, rng), InvalidArgument);
}

}  // namespace
}  // namespace dpplimits
