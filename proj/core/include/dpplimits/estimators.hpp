#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dpplimits/dpp.hpp"
#include "dpplimits/point_cloud.hpp"
#include "dpplimits/rng.hpp"

namespace dpplimits {

/// An estimate built from one subsample: weights[k] multiplies the loss (or
/// integrand) term of sample.indices[k], multiplicity already included.
struct WeightedEstimate {
  double value = 0.0;
  IndexSample sample;
  std::vector<double> weights;
};

// --- 1-means coresets ------------------------------------------------------

/// L(theta) = sum_i |x_i - theta|^2.
double true_loss(const PointCloud& cloud, std::span<const double> theta);

/// p_i proportional to (1/n)(1 + |x_i|^2 / v), v = (1/n) sum |x_i|^2;
/// uniform when every point sits at the origin.
std::vector<double> sensitivity_scores(const PointCloud& cloud);

/// Re-evaluates the estimator of an existing draw at another theta.
double weighted_loss(const PointCloud& cloud, const WeightedEstimate& estimate,
                     std::span<const double> theta);

/// m iid draws with replacement from p; weight eps_i / (m p_i).
WeightedEstimate coreset_estimate_iid(const PointCloud& cloud, std::span<const double> theta,
                                      std::size_t m, std::span<const double> probabilities,
                                      SeededRng& rng);

/// One DPP draw; weight 1 / (K_ii / n). Throws NumericalError naming the
/// first index with K_ii <= 0.
WeightedEstimate coreset_estimate_dpp(const PointCloud& cloud, std::span<const double> theta,
                                      const ValidatedDpp& dpp, SeededRng& rng);

// --- Monte-Carlo integration against omega_n -------------------------------

using ScalarFunction = std::function<double(PointRef)>;

/// I_n = sum_i f(x_i) / (n e[p](x_i)).
double discrete_integral(const PointCloud& cloud, const ScalarFunction& f,
                         std::span<const double> density);

/// m iid draws with p_i proportional to e[p](x_i);
/// estimate sum_i f(x_i) eps_i / (n m p_i e[p](x_i)).
WeightedEstimate sphere_integral_iid(const PointCloud& cloud, const ScalarFunction& f,
                                     std::size_t m, std::span<const double> density,
                                     SeededRng& rng);

/// One DPP draw; estimate sum_i f(x_i) eps_i / (n e[p](x_i) K_ii / n).
WeightedEstimate sphere_integral_dpp(const PointCloud& cloud, const ScalarFunction& f,
                                     const ValidatedDpp& dpp, std::span<const double> density,
                                     SeededRng& rng);

/// Ceiling order statistic: sorted(errors)[ceil(q len) - 1], q in (0, 1).
double quantile_relative_error(std::span<const double> errors, double q);

}  // namespace dpplimits
