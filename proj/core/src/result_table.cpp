#include "dpplimits/result_table.hpp"

#include <ostream>

#include "dpplimits/error.hpp"
#include "dpplimits/text_io.hpp"

namespace dpplimits {

void ResultTable::add(ResultRow row) {
  for (const auto& r : rows_) {
    if (r.experiment == row.experiment && r.param == row.param && r.method == row.method &&
        r.metric == row.metric) {
      throw InvalidArgument("duplicate result row " + row.experiment + "/" + row.param + "/" +
                            row.method + "/" + row.metric);
    }
  }
  rows_.push_back(std::move(row));
}

std::optional<double> ResultTable::find(const std::string& param, const std::string& method,
                                        const std::string& metric) const {
  for (const auto& r : rows_) {
    if (r.param == param && r.method == method && r.metric == metric) return r.value;
  }
  return std::nullopt;
}

void ResultTable::write_csv(std::ostream& out) const {
  out << "experiment,param,method,replicates,metric,value,seed,config_hash\n";
  for (const auto& r : rows_) {
    out << r.experiment << ',' << r.param << ',' << r.method << ',' << r.replicates << ','
        << r.metric << ',' << text_io::format_double(r.value) << ',' << seed_ << ','
        << config_hash_ << '\n';
  }
}

}  // namespace dpplimits
