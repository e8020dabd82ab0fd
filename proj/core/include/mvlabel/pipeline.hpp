#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mvlabel/cluster_engine.hpp"
#include "mvlabel/data_ingest.hpp"
#include "mvlabel/llm_client.hpp"
#include "mvlabel/preprocess.hpp"
#include "mvlabel/report.hpp"
#include "mvlabel/synth_data.hpp"

namespace mvlabel {

struct LlmSettings {
  LlmMode mode = LlmMode::Off;
  std::string endpoint;
  std::string model = "gpt-4o";
  std::filesystem::path fixture_dir;
};

/// Everything a run depends on. Paths in a config file are relative to that file.
struct RunConfig {
  std::filesystem::path dataset;
  std::filesystem::path registry;  // empty: built-in six-view registry
  std::vector<std::string> clinical_scores = {"SIS", "OHS", "OKS", "TUG"};
  std::uint64_t seed = 0;
  KRange k_range;
  int max_iter = 300;
  double tol = 1e-4;
  NormalizationMode normalization = NormalizationMode::ZScore;
  ClinicalFillOptions clinical_fill{ClinicalFillOptions::Mode::BackFill, 14, true};
  std::size_t min_rows = 15;
  LlmSettings llm;
  std::filesystem::path output_dir = "run";

  /// Throws ConfigError on out-of-range settings.
  void validate() const;
};

/// Parses a JSON config. `seed` is mandatory; every other field has a default.
RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

/// Pretty JSON of the effective config with every default spelled out.
std::string config_snapshot(const RunConfig& config, bool include_output_dir = true);

/// Test seams for the labeling stage.
struct PipelineHooks {
  std::shared_ptr<HttpTransport> transport;
  Sleeper sleeper;
  std::function<void(const std::string&)> log;
};

// Stages. Each reads the artifacts of the previous ones from config.output_dir
// and throws StageDependencyError when one is missing.

/// Writes config.json and dataset.json.
void stage_ingest(const RunConfig& config);
/// Writes models/<view>.json: fitted model, normalization parameters, K trace.
void stage_cluster(const RunConfig& config);
/// Writes labels.json plus prompts/ and responses/ audit copies.
void stage_label(const RunConfig& config, const PipelineHooks& hooks = {});
/// Writes significance.json and significance.csv.
void stage_validate(const RunConfig& config);
/// Writes report.md and charts/<view>.svg; returns the assembled report.
RunReport stage_report(const RunConfig& config);

RunReport run_all(const RunConfig& config, const PipelineHooks& hooks = {});

/// (view, prompt) pairs the label stage would send, from the fitted models.
std::vector<std::pair<std::string, std::string>> pending_prompts(const RunConfig& config);

struct SynthOutput {
  std::filesystem::path csv;
  std::filesystem::path registry;
  std::filesystem::path planted;
};

/// Generates a dataset and writes it as CSV, with the matching registry
/// (<stem>.registry.json) and planted labels (<stem>.planted.json) alongside.
SynthOutput write_synth(const SynthSpec& spec, const std::filesystem::path& csv_path);
SynthSpec load_synth_spec(const std::filesystem::path& path);

}  // namespace mvlabel
