// Copyright 2026 The reacsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REACSIM__REPORT_HPP_
#define REACSIM__REPORT_HPP_

#include "reacsim/data_ingest.hpp"
#include "reacsim/metrics.hpp"

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace reacsim
{

namespace detail
{
struct NamedMetric
{
  std::string name;
  std::string unit;
  const MetricStats * stats;
};

inline std::vector<NamedMetric> named_metrics(const SettingReport & r)
{
  std::vector<NamedMetric> out;
  for (std::size_t k = 0; k < kAdeBuckets; ++k) {
    out.push_back(
      {"ade_" + std::to_string(k) + "-" + std::to_string(k + 1) + "s", "m", &r.ade_bucket[k]});
  }
  out.push_back({"ade", "m", &r.ade});
  out.push_back({"fde", "m", &r.fde});
  out.push_back({"cr", "%", &r.cr});
  out.push_back({"ms", "m/s^3", &r.ms});
  out.push_back({"td", "m^2", &r.td});
  out.push_back({"mr", "%", &r.mr});
  return out;
}
}  // namespace detail

/// One row per (setting, metric). Values use the shortest round-trip decimal form.
/// std is the population standard deviation over runs (scenario x seed).
inline void write_report_csv(std::ostream & out, const SimReport & report)
{
  out << "setting,metric,unit,mean,std,n,n_runs,n_failed\n";
  for (const auto & [setting, row] : report.settings) {
    for (const auto & m : detail::named_metrics(row)) {
      out << to_string(setting) << ',' << m.name << ',' << m.unit << ','
          << format_double(m.stats->mean) << ',' << format_double(m.stats->std) << ','
          << m.stats->n << ',' << row.n_runs << ',' << row.n_failed << '\n';
    }
  }
}

/// Aligned text table: one line per setting, "mean (std)" per cell.
inline void write_report_table(std::ostream & out, const SimReport & report)
{
  auto cell = [](const MetricStats & s) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f (%.2f)", s.mean, s.std);
    return std::string(buf);
  };
  const std::vector<std::string> head{"setting", "ADE 0-1s", "1-2s", "2-3s", "3-4s", "4-5s",
                                      "ADE",     "FDE (m)",  "CR (%)", "MS (m/s^3)", "TD (m^2)",
                                      "MR (%)",  "runs",     "failed"};
  std::vector<std::vector<std::string>> rows{head};
  for (const auto & [setting, r] : report.settings) {
    std::vector<std::string> row{to_string(setting)};
    for (const auto & b : r.ade_bucket) row.push_back(cell(b));
    for (const auto * s : {&r.ade, &r.fde, &r.cr, &r.ms, &r.td, &r.mr}) row.push_back(cell(*s));
    row.push_back(std::to_string(r.n_runs));
    row.push_back(std::to_string(r.n_failed));
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto & row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  out << "# mean (population std) over runs = scenarios x seeds\n";
  for (const auto & row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "  " : "") << std::left << std::setw(static_cast<int>(width[c])) << row[c];
    }
    out << '\n';
  }
}

}  // namespace reacsim

#endif  // REACSIM__REPORT_HPP_
