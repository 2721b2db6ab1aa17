#include "dpplimits/statistics.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "dpplimits/error.hpp"
#include "dpplimits/parallel.hpp"
#include "dpplimits/text_io.hpp"

namespace dpplimits {
namespace {

// Determinant of the r x r matrix entry(a, b), a, b < r.
template <typename Entry>
double small_det(std::size_t r, const Entry& entry) {
  switch (r) {
    case 0:
      return 1.0;
    case 1:
      return entry(0, 0);
    case 2:
      return entry(0, 0) * entry(1, 1) - entry(0, 1) * entry(1, 0);
    case 3:
      return entry(0, 0) * (entry(1, 1) * entry(2, 2) - entry(1, 2) * entry(2, 1)) -
             entry(0, 1) * (entry(1, 0) * entry(2, 2) - entry(1, 2) * entry(2, 0)) +
             entry(0, 2) * (entry(1, 0) * entry(2, 1) - entry(1, 1) * entry(2, 0));
    default: {
      const auto R = static_cast<Eigen::Index>(r);
      Eigen::MatrixXd m(R, R);
      for (Eigen::Index a = 0; a < R; ++a) {
        for (Eigen::Index b = 0; b < R; ++b) {
          m(a, b) = entry(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        }
      }
      return m.fullPivLu().determinant();
    }
  }
}

void check_budget(std::size_t n, std::size_t r) {
  const double cost = std::pow(static_cast<double>(n), static_cast<double>(r));
  if (cost > kTupleBudget) {
    throw InfeasibleError(cost, "tuple summation with n = " + std::to_string(n) + ", r = " +
                                    std::to_string(r) + " exceeds the budget");
  }
}

// Sum over ordered tuples of distinct indices of phi * term(tuple), where
// term receives the tuple. Parallel over the leading index with an
// order-fixed reduction.
template <typename Term>
double tuple_sum(const PointCloud& cloud, const TestFunction& phi, const Term& term) {
  const std::size_t n = cloud.size();
  const std::size_t r = phi.arity;
  if (r == 0) throw InvalidArgument("test function arity must be >= 1");
  check_budget(n, r);
  if (r > n) return 0.0;
  std::vector<double> partial(n, 0.0);
  parallel_for(n, 0, [&](std::size_t lead) {
    std::vector<std::size_t> tuple(r);
    std::vector<PointRef> points(r);
    tuple[0] = lead;
    points[0] = cloud.point(lead);
    double acc = 0.0;
    auto recurse = [&](auto&& self, std::size_t depth) -> void {
      if (depth == r) {
        acc += phi.eval(points) * term(tuple);
        return;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (std::find(tuple.begin(), tuple.begin() + static_cast<std::ptrdiff_t>(depth), i) !=
            tuple.begin() + static_cast<std::ptrdiff_t>(depth)) {
          continue;
        }
        tuple[depth] = i;
        points[depth] = cloud.point(i);
        self(self, depth + 1);
      }
    };
    recurse(recurse, 1);
    partial[lead] = acc;
  });
  return pairwise_sum(partial);
}

double scale_factor(std::size_t n, std::size_t r) {
  return std::pow(static_cast<double>(n), -static_cast<double>(r));
}

template <typename Matrix>
double principal_minor(const Matrix& m, std::span<const std::size_t> idx) {
  return small_det(idx.size(), [&](std::size_t a, std::size_t b) {
    return m(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(idx[b]));
  });
}

// Calls visit(subset) for every r-subset of {0..n-1} in lexicographic order.
template <typename Visit>
void for_each_subset(std::size_t n, std::size_t r, const Visit& visit) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    visit(std::span<const std::size_t>(idx));
    std::size_t pos = r;
    while (pos > 0 && idx[pos - 1] == n - r + pos - 1) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t k = pos; k < r; ++k) idx[k] = idx[k - 1] + 1;
  }
}

void check_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::size_t r) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw InvalidArgument("determinant bound: matrices must be square and of equal size");
  }
  if (r == 0 || r > static_cast<std::size_t>(a.rows())) {
    throw InvalidArgument("determinant bound: need 1 <= r <= n");
  }
}

double factorial(std::size_t r) {
  double f = 1.0;
  for (std::size_t k = 2; k <= r; ++k) f *= static_cast<double>(k);
  return f;
}

}  // namespace

TestFunction constant_function(std::size_t arity, double value) {
  return {arity, [value](std::span<const PointRef>) { return value; }, std::abs(value), "everywhere"};
}

TestFunction coordinate_function(std::size_t coordinate, double sup_bound) {
  return {1, [coordinate](std::span<const PointRef> x) { return x[0][coordinate]; }, sup_bound, {}};
}

TestFunction one_point_function(std::function<double(PointRef)> f, double sup_bound) {
  return {1, [f = std::move(f)](std::span<const PointRef> x) { return f(x[0]); }, sup_bound, {}};
}

double linear_statistic(const TestFunction& phi, const PointCloud& cloud, const IndexSample& sample) {
  std::vector<std::size_t> members;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    if (sample.indices[k] >= cloud.size()) throw InvalidArgument("linear_statistic: index out of range");
    for (std::size_t c = 0; c < sample.multiplicity(k); ++c) members.push_back(sample.indices[k]);
  }
  const std::size_t r = phi.arity;
  const std::size_t s = members.size();
  if (r == 0) throw InvalidArgument("test function arity must be >= 1");
  if (r > s) return 0.0;

  std::vector<std::size_t> positions(r);
  std::vector<PointRef> points(r);
  double total = 0.0;
  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == r) {
      total += phi.eval(points);
      return;
    }
    for (std::size_t p = 0; p < s; ++p) {
      if (std::find(positions.begin(), positions.begin() + static_cast<std::ptrdiff_t>(depth), p) !=
          positions.begin() + static_cast<std::ptrdiff_t>(depth)) {
        continue;
      }
      positions[depth] = p;
      points[depth] = cloud.point(members[p]);
      self(self, depth + 1);
    }
  };
  recurse(recurse, 0);
  return total;
}

double expected_linear_statistic(const KernelMatrix& kernel, const PointCloud& cloud,
                                 const TestFunction& phi) {
  if (kernel.size() != cloud.size()) throw InvalidArgument("kernel and cloud sizes differ");
  const auto& k = kernel.matrix();
  const double sum = tuple_sum(cloud, phi, [&](std::span<const std::size_t> t) {
    return principal_minor(k, t);
  });
  return sum * scale_factor(cloud.size(), phi.arity);
}

double expected_linear_statistic(const ContinuousKernel& k, const PointCloud& cloud,
                                 const TestFunction& phi) {
  const double sum = tuple_sum(cloud, phi, [&](std::span<const std::size_t> t) {
    return small_det(t.size(), [&](std::size_t a, std::size_t b) {
      return k.eval(cloud.point(t[a]), cloud.point(t[b]));
    });
  });
  return sum * scale_factor(cloud.size(), phi.arity);
}

Moments empirical_moments(std::span<const double> values, std::size_t order) {
  if (values.empty()) throw InvalidArgument("empirical_moments: empty input");
  const auto count = static_cast<double>(values.size());
  Moments out;
  out.raw.assign(order, 0.0);
  out.central.assign(order, 0.0);
  for (std::size_t j = 0; j < order; ++j) {
    double s = 0.0;
    for (const double v : values) s += std::pow(v, static_cast<double>(j + 1));
    out.raw[j] = s / count;
  }
  const double mean = order > 0 ? out.raw[0] : 0.0;
  for (std::size_t j = 0; j < order; ++j) {
    double s = 0.0;
    for (const double v : values) s += std::pow(v - mean, static_cast<double>(j + 1));
    out.central[j] = s / count;
  }
  return out;
}

double kernel_error(const KernelMatrix& kernel, const KernelMatrix& reference,
                    const PointCloud& cloud, const TestFunction& phi) {
  if (kernel.size() != cloud.size() || reference.size() != cloud.size()) {
    throw InvalidArgument("kernel_error: size mismatch");
  }
  const auto& k = kernel.matrix();
  const auto& g = reference.matrix();
  const double sum = tuple_sum(cloud, phi, [&](std::span<const std::size_t> t) {
    return principal_minor(k, t) - principal_minor(g, t);
  });
  return std::abs(sum * scale_factor(cloud.size(), phi.arity));
}

double measure_error(const ContinuousKernel& k, const PointCloud& cloud, const TestFunction& phi,
                     const PointCloud& reference) {
  return std::abs(expected_linear_statistic(k, cloud, phi) -
                  expected_linear_statistic(k, reference, phi));
}

double binomial(std::size_t n, std::size_t k) noexcept {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(c);
}

DetBoundMax det_bound_max(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::size_t r,
                          std::uint64_t seed) {
  check_pair(a, b, r);
  const auto n = static_cast<std::size_t>(a.rows());
  DetBoundMax out;
  const double max_a = a.cwiseAbs().maxCoeff();
  const double max_b = b.cwiseAbs().maxCoeff();
  const double max_diff = (a - b).cwiseAbs().maxCoeff();
  double sum = 0.0;
  for (std::size_t j = 1; j <= r; ++j) {
    sum += std::pow(max_a, static_cast<double>(j - 1)) * max_diff *
           std::pow(max_b, static_cast<double>(r - j));
  }
  out.rhs = factorial(r) * sum;

  auto visit = [&](std::span<const std::size_t> idx) {
    out.lhs_max = std::max(out.lhs_max, std::abs(principal_minor(a, idx) - principal_minor(b, idx)));
    ++out.subsets;
  };
  if (binomial(n, r) <= kExhaustiveSubsetBudget) {
    for_each_subset(n, r, visit);
  } else {
    out.exhaustive = false;
    out.seed = seed;
    SeededRng rng(seed, derive_stream({0xDE7B0u, n, r}));
    std::vector<std::size_t> pool(n);
    std::vector<std::size_t> idx(r);
    for (std::size_t trial = 0; trial < kRandomSubsetCount; ++trial) {
      std::iota(pool.begin(), pool.end(), std::size_t{0});
      for (std::size_t k = 0; k < r; ++k) {
        const auto pick = k + static_cast<std::size_t>(rng.below(n - k));
        std::swap(pool[k], pool[pick]);
        idx[k] = pool[k];
      }
      std::sort(idx.begin(), idx.end());
      visit(idx);
    }
  }
  return out;
}

DetBoundFrobenius det_bound_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                      std::size_t r) {
  check_pair(a, b, r);
  const auto n = static_cast<std::size_t>(a.rows());
  if (n > kMaxFrobeniusBoundSize) {
    throw InfeasibleError(binomial(n, r), "det_bound_frobenius: n exceeds 14");
  }
  DetBoundFrobenius out;
  double signed_sum = 0.0;
  for_each_subset(n, r, [&](std::span<const std::size_t> idx) {
    const double diff = principal_minor(a, idx) - principal_minor(b, idx);
    signed_sum += diff;
    out.lhs_abs += std::abs(diff);
  });
  out.lhs_signed = std::abs(signed_sum);
  const double tr_a = a.trace();
  const double tr_b = b.trace();
  const double big_m = std::max({a.norm(), b.norm(), tr_a, tr_b});
  const double gap = std::max((a - b).norm(), std::abs(tr_a - tr_b));
  out.rhs = static_cast<double>(r) * factorial(r) * std::pow(big_m, static_cast<double>(r - 1)) * gap;
  return out;
}

void write_bound_csv(std::ostream& out, std::span<const BoundTrial> trials) {
  out << "trial,bound,n,r,lhs,rhs,ratio\n";
  for (const auto& t : trials) {
    double ratio = 0.0;
    if (t.rhs > 0.0) {
      ratio = t.lhs / t.rhs;
    } else if (t.lhs > 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    }
    out << t.trial << ',' << t.bound << ',' << t.n << ',' << t.r << ','
        << text_io::format_double(t.lhs) << ',' << text_io::format_double(t.rhs) << ','
        << text_io::format_double(ratio) << '\n';
  }
}

}  // namespace dpplimits
