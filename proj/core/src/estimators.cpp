#include "dpplimits/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "dpplimits/error.hpp"

namespace dpplimits {
namespace {

void check_theta(const PointCloud& cloud, std::span<const double> theta) {
  if (theta.size() != cloud.dim()) {
    throw InvalidArgument("theta has dimension " + std::to_string(theta.size()) + ", cloud has " +
                          std::to_string(cloud.dim()));
  }
}

void check_density(const PointCloud& cloud, std::span<const double> density) {
  if (density.size() != cloud.size()) throw InvalidArgument("density size does not match cloud");
  for (std::size_t i = 0; i < density.size(); ++i) {
    if (!(density[i] > 0.0)) throw NumericalError(i, "density estimate must be positive");
  }
}

void check_diagonal(const ValidatedDpp& dpp) {
  for (std::size_t i = 0; i < dpp.size(); ++i) {
    if (!(dpp.kernel()(i, i) > 0.0)) {
      throw NumericalError(i, "kernel diagonal entry is not positive, point can never be weighted");
    }
  }
}

}  // namespace

double true_loss(const PointCloud& cloud, std::span<const double> theta) {
  check_theta(cloud, theta);
  double s = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) s += squared_distance(cloud.point(i), theta);
  return s;
}

std::vector<double> sensitivity_scores(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  std::vector<double> p(n, n ? 1.0 / static_cast<double>(n) : 0.0);
  if (n == 0) return p;
  std::vector<double> norms(n);
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = cloud.point(i);
    norms[i] = 0.0;
    for (const double c : x) norms[i] += c * c;
    v += norms[i];
  }
  v /= static_cast<double>(n);
  if (!(v > 0.0)) return p;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = (1.0 + norms[i] / v) / static_cast<double>(n);
    total += p[i];
  }
  for (auto& pi : p) pi /= total;
  return p;
}

double weighted_loss(const PointCloud& cloud, const WeightedEstimate& estimate,
                     std::span<const double> theta) {
  check_theta(cloud, theta);
  double s = 0.0;
  for (std::size_t k = 0; k < estimate.sample.size(); ++k) {
    s += estimate.weights[k] * squared_distance(cloud.point(estimate.sample.indices[k]), theta);
  }
  return s;
}

WeightedEstimate coreset_estimate_iid(const PointCloud& cloud, std::span<const double> theta,
                                      std::size_t m, std::span<const double> probabilities,
                                      SeededRng& rng) {
  if (m == 0) throw InvalidArgument("coreset_estimate_iid: m must be >= 1");
  if (probabilities.size() != cloud.size()) throw InvalidArgument("probability vector size mismatch");
  WeightedEstimate est;
  est.sample = sample_iid(probabilities, m, rng);
  est.weights.reserve(est.sample.size());
  for (std::size_t k = 0; k < est.sample.size(); ++k) {
    const double p = probabilities[est.sample.indices[k]];
    est.weights.push_back(static_cast<double>(est.sample.multiplicity(k)) /
                          (static_cast<double>(m) * p));
  }
  est.value = weighted_loss(cloud, est, theta);
  return est;
}

WeightedEstimate coreset_estimate_dpp(const PointCloud& cloud, std::span<const double> theta,
                                      const ValidatedDpp& dpp, SeededRng& rng) {
  if (dpp.size() != cloud.size()) throw InvalidArgument("kernel and cloud sizes differ");
  check_diagonal(dpp);
  const auto n = static_cast<double>(cloud.size());
  WeightedEstimate est;
  est.sample = sample_dpp(dpp, rng);
  est.weights.reserve(est.sample.size());
  for (const auto i : est.sample.indices) est.weights.push_back(n / dpp.kernel()(i, i));
  est.value = weighted_loss(cloud, est, theta);
  return est;
}

double discrete_integral(const PointCloud& cloud, const ScalarFunction& f,
                         std::span<const double> density) {
  check_density(cloud, density);
  const auto n = static_cast<double>(cloud.size());
  double s = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) s += f(cloud.point(i)) / (n * density[i]);
  return s;
}

WeightedEstimate sphere_integral_iid(const PointCloud& cloud, const ScalarFunction& f,
                                     std::size_t m, std::span<const double> density,
                                     SeededRng& rng) {
  if (m == 0) throw InvalidArgument("sphere_integral_iid: m must be >= 1");
  check_density(cloud, density);
  const auto n = static_cast<double>(cloud.size());
  double total = 0.0;
  for (const double e : density) total += e;
  std::vector<double> p(density.begin(), density.end());
  for (auto& pi : p) pi /= total;

  WeightedEstimate est;
  est.sample = sample_iid(p, m, rng);
  for (std::size_t k = 0; k < est.sample.size(); ++k) {
    const auto i = est.sample.indices[k];
    const double w = static_cast<double>(est.sample.multiplicity(k)) /
                     (n * static_cast<double>(m) * p[i] * density[i]);
    est.weights.push_back(w);
    est.value += w * f(cloud.point(i));
  }
  return est;
}

WeightedEstimate sphere_integral_dpp(const PointCloud& cloud, const ScalarFunction& f,
                                     const ValidatedDpp& dpp, std::span<const double> density,
                                     SeededRng& rng) {
  if (dpp.size() != cloud.size()) throw InvalidArgument("kernel and cloud sizes differ");
  check_density(cloud, density);
  check_diagonal(dpp);
  const auto n = static_cast<double>(cloud.size());
  WeightedEstimate est;
  est.sample = sample_dpp(dpp, rng);
  for (const auto i : est.sample.indices) {
    const double w = 1.0 / (n * density[i] * dpp.kernel()(i, i) / n);
    est.weights.push_back(w);
    est.value += w * f(cloud.point(i));
  }
  return est;
}

double quantile_relative_error(std::span<const double> errors, double q) {
  if (errors.empty()) throw InvalidArgument("quantile_relative_error: empty input");
  if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("quantile_relative_error: q must lie in (0, 1)");
  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  const auto len = static_cast<double>(sorted.size());
  // Guard against q * len landing a hair above an integer.
  const double position = std::ceil(q * len - 1e-9 * len);
  const auto idx = static_cast<std::size_t>(std::clamp(position - 1.0, 0.0, len - 1.0));
  return sorted[idx];
}

}  // namespace dpplimits
