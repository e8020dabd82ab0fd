#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvlabel/cluster_engine.hpp"
#include "mvlabel/data_ingest.hpp"
#include "mvlabel/labeling.hpp"
#include "mvlabel/validation.hpp"

namespace mvlabel {

struct ViewReport {
  ClusterModel model;
  KSelectionTrace trace;
  std::vector<FeatureDescriptor> features;
  std::optional<int> reference_k;
  ClusterLabelSet labels;
  ClusterClinicalSummary clinical;
};

struct RunReport {
  std::string run_id;
  std::string config_snapshot;  // pretty-printed JSON
  std::vector<ViewReport> views;
  std::vector<SignificanceRow> significance;
  std::vector<std::string> warnings;
};

/// Deterministic Markdown with one section per view.
std::string render_markdown(const RunReport& report);

/// Grouped bar chart of clinical means: one group per score, one bar per
/// cluster. `legend` supplies cluster names; "Cluster i" is used otherwise.
/// Throws ContractError when no (cluster, score) group has a value.
std::string render_bar_chart(const ClusterClinicalSummary& summary,
                             const std::vector<std::string>& legend = {});

/// Header plus one line per row: view, score, cluster1..clusterM, test, p,
/// p_formatted, significant. Verdicts past a view's K are "-".
std::string render_csv(const std::vector<SignificanceRow>& rows);

/// Inverse of render_csv for every column it writes. The statistic is not
/// part of the CSV and comes back as NaN.
std::vector<SignificanceRow> parse_significance_csv(std::string_view text);

/// Escapes &, <, >, " and ' for XML text and attributes.
std::string xml_escape(std::string_view text);

}  // namespace mvlabel
