#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvlabel/cluster_engine.hpp"
#include "mvlabel/data_ingest.hpp"
#include "mvlabel/stats.hpp"

namespace mvlabel {

/// Present values of one clinical score among the days of one cluster.
struct ClinicalGroup {
  std::vector<double> values;
  std::optional<double> mean;  // empty when no day has the score

  [[nodiscard]] std::size_t n() const noexcept { return values.size(); }
};

struct ClusterClinicalSummary {
  std::string view_name;
  int k = 0;
  std::vector<std::string> scores;
  std::vector<std::vector<ClinicalGroup>> groups;  // [cluster][score]

  [[nodiscard]] std::size_t score_index(std::string_view score) const;
  [[nodiscard]] const ClinicalGroup& group(int cluster, std::string_view score) const;
  /// One vector of values per cluster, in cluster order.
  [[nodiscard]] std::vector<std::vector<double>> raw_groups(std::string_view score) const;
};

/// Joins the model's rows to the clinical table through the record index the
/// rows were partitioned from. Throws ContractError when the row ids disagree.
ClusterClinicalSummary summarize_clinical(const ClusterModel& model, const ClinicalTable& clinical,
                                          const std::vector<std::string>& scores);

/// One (view, score) line of the significance table.
struct SignificanceRow {
  std::string view_name;
  std::string score;
  std::vector<Normality> verdicts;  // one per cluster
  std::optional<TestKind> test;     // empty for a not-applicable row
  double statistic = 0.0;
  double p_value = 0.0;             // NaN for a not-applicable row
  std::string p_formatted;
  bool significant = false;
  std::string note;                 // reason a row is not applicable

  [[nodiscard]] bool applicable() const noexcept { return test.has_value(); }
};

/// Rows in summary order, then score order. Degenerate or empty groups give a
/// not-applicable row instead of an error. Views are evaluated concurrently.
std::vector<SignificanceRow> build_significance_table(
    const std::vector<ClusterClinicalSummary>& summaries, const std::vector<std::string>& scores,
    double alpha = kDefaultAlpha);

/// Number of verdict columns in the tabular output: at least five.
std::size_t verdict_columns(const std::vector<SignificanceRow>& rows);

}  // namespace mvlabel
