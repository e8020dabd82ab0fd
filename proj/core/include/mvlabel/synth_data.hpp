#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mvlabel/data_ingest.hpp"

namespace mvlabel {

struct PlantedCluster {
  std::vector<double> centroid;
  std::vector<double> stddev;
};

struct PlantedView {
  ViewSpec view;
  std::vector<PlantedCluster> clusters;
};

/// Clinical score drawn per latent state: N(means[state], stddev).
struct PlantedScore {
  std::string name;
  std::vector<double> means;
  double stddev = 1.0;
};

/// Synthetic day-level data with a latent per-day state. Each view's planted
/// label is `state % view cluster count`, so views with as many clusters as
/// there are latent states recover the state exactly. Scores listed in
/// `null_scores` ignore their per-state means and use means[0] everywhere.
struct SynthSpec {
  std::vector<PlantedView> views;
  int latent_states = 2;
  int participants = 10;
  int days_per_participant = 56;
  std::string start_date = "2023-01-02";
  std::vector<PlantedScore> scores;
  std::set<std::string> null_scores;
  /// Probability that any single sensor cell is blanked out.
  double missing_rate = 0.0;
  std::string cohort_context;
  std::uint64_t seed = 0;

  /// Throws ContractError when the spec cannot be generated.
  void validate() const;
};

struct SynthData {
  Dataset dataset;
  ViewRegistry registry;
  std::vector<int> latent;                          // per record
  std::map<std::string, std::vector<int>> planted;  // per view, per record
};

SynthData generate(const SynthSpec& spec);

/// A spec over the given registry: view v gets `clusters_per_view[v]` Gaussian
/// blobs spaced `separation` standard deviations apart along every feature.
/// SIS, OHS and OKS carry planted shifts; TUG is null.
SynthSpec make_synth_spec(const ViewRegistry& registry, const std::vector<int>& clusters_per_view,
                          int latent_states, double separation, std::uint64_t seed);

/// Six MAISON-shaped views with clusters (2, 2, 4, 4, 2, 2), 20-sigma separation,
/// 10 participants x 56 days.
SynthSpec default_synth_spec(std::uint64_t seed = 42);

}  // namespace mvlabel
