#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mvlabel/data_ingest.hpp"
#include "mvlabel/matrix.hpp"

namespace mvlabel {

/// Everything the labeling prompt is rendered from.
struct PromptContext {
  std::string view_name;
  std::vector<FeatureDescriptor> features;
  Matrix centers_original;  // k x d, original units
  std::string sensor_context;
  std::string cohort_context;
};

inline constexpr std::string_view kClosingInstruction =
    "Please suggest cluster names for each cluster for better interpretation. Only provide a "
    "short cluster name and interpretation. Do not provide any additional analysis.";

/// Renders the context-aware prompt. Deterministic; center values are printed
/// with six decimals in feature order.
std::string build_prompt(const PromptContext& context);

/// Text appended to a prompt when the first response could not be parsed.
std::string format_reminder(int k);

/// 16 lowercase hex digits of the 64-bit FNV-1a hash of the prompt bytes.
std::string prompt_hash(std::string_view prompt);

struct ClusterLabel {
  int cluster_index = 0;  // 0-based
  std::string name;
  std::string description;

  friend bool operator==(const ClusterLabel&, const ClusterLabel&) = default;
};

struct ClusterLabelSet {
  std::string view_name;
  std::vector<ClusterLabel> labels;
  std::string raw_response;
  std::string provider_model;
  std::string provider_timestamp;
  /// True when the labels are the generic "Cluster i" placeholders.
  bool generic = false;
};

/// Extracts "Cluster <i>: <name> - <description>" lines (hyphen, en dash or em
/// dash; list markers and emphasis markup ignored). Throws ParseError unless
/// exactly the indices 1..k are found, each once.
ClusterLabelSet parse_labels(std::string_view raw, int k);

ClusterLabelSet generic_labels(std::string view_name, int k);

}  // namespace mvlabel
