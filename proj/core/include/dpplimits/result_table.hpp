#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dpplimits {

struct ResultRow {
  std::string experiment;
  std::string param;   ///< grid value (m, n) or check name
  std::string method;  ///< iid | dpp | usvt | check
  std::size_t replicates = 0;
  std::string metric;
  double value = 0.0;
};

/// Rows in insertion order, unique on (experiment, param, method, metric).
/// Every row is written with the table's seed and config hash.
class ResultTable {
 public:
  ResultTable(std::uint64_t seed, std::string config_hash)
      : seed_(seed), config_hash_(std::move(config_hash)) {}

  /// Throws InvalidArgument on a duplicate key.
  void add(ResultRow row);
  std::optional<double> find(const std::string& param, const std::string& method,
                             const std::string& metric) const;

  const std::vector<ResultRow>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& config_hash() const noexcept { return config_hash_; }

  /// Header `experiment,param,method,replicates,metric,value,seed,config_hash`.
  void write_csv(std::ostream& out) const;

 private:
  std::uint64_t seed_;
  std::string config_hash_;
  std::vector<ResultRow> rows_;
};

}  // namespace dpplimits
