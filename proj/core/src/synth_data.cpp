#include "mvlabel/synth_data.hpp"

#include <cmath>
#include <cstdio>

#include "mvlabel/errors.hpp"
#include "mvlabel/random.hpp"

namespace mvlabel {

void SynthSpec::validate() const {
  if (views.empty()) throw ContractError("synthetic spec has no views");
  if (latent_states < 2) throw ContractError("synthetic spec needs at least two latent states");
  if (participants < 1 || days_per_participant < 1)
    throw ContractError("synthetic spec needs at least one participant and one day");
  if (!(missing_rate >= 0.0 && missing_rate < 1.0))
    throw ContractError("missing_rate must be in [0, 1)");
  for (const auto& pv : views) {
    const auto d = pv.view.features.size();
    if (pv.clusters.size() < 2)
      throw ContractError("view '" + pv.view.name + "' needs at least two planted clusters");
    if (pv.clusters.size() > static_cast<std::size_t>(latent_states))
      throw ContractError("view '" + pv.view.name + "' plants more clusters than latent states");
    for (const auto& c : pv.clusters) {
      if (c.centroid.size() != d || c.stddev.size() != d)
        throw ContractError("view '" + pv.view.name + "' cluster dimension mismatch");
      for (double s : c.stddev)
        if (!(s > 0.0)) throw ContractError("view '" + pv.view.name + "' has a non-positive std");
    }
  }
  for (const auto& s : scores) {
    if (s.means.size() != static_cast<std::size_t>(latent_states))
      throw ContractError("score '" + s.name + "' needs one mean per latent state");
    if (!(s.stddev > 0.0)) throw ContractError("score '" + s.name + "' has a non-positive std");
  }
  for (const auto& n : null_scores) {
    bool found = false;
    for (const auto& s : scores) found = found || s.name == n;
    if (!found) throw ContractError("null score '" + n + "' is not a planted score");
  }
  try {
    (void)parse_day(start_date);
  } catch (const std::invalid_argument& e) {
    throw ContractError(std::string("start_date: ") + e.what());
  }
  ViewRegistry r;
  for (const auto& pv : views) r.views.push_back(pv.view);
  for (const auto& s : scores) r.clinical_scores.push_back(s.name);
  try {
    r.validate();
  } catch (const SchemaError& e) {
    throw ContractError(std::string("synthetic spec schema: ") + e.what());
  }
}

SynthData generate(const SynthSpec& spec) {
  spec.validate();
  SynthData out;
  ViewRegistry& reg = out.registry;
  for (const auto& pv : spec.views) reg.views.push_back(pv.view);
  for (const auto& s : spec.scores) reg.clinical_scores.push_back(s.name);
  reg.cohort_context = spec.cohort_context;

  Dataset& ds = out.dataset;
  ds.views = reg.views;
  ds.sensor_columns = reg.sensor_columns();
  ds.clinical_scores = reg.clinical_scores;
  ds.cohort_context = reg.cohort_context;
  ds.columns.metadata = {reg.participant_column, reg.timestamp_column};
  ds.columns.sensor = ds.sensor_columns;
  ds.columns.clinical = ds.clinical_scores;

  // Separate streams keep the latent states unchanged when, say, missing_rate changes.
  SplitMix64 state_rng(SplitMix64::derive(spec.seed, 1));
  SplitMix64 feature_rng(SplitMix64::derive(spec.seed, 2));
  SplitMix64 score_rng(SplitMix64::derive(spec.seed, 3));
  SplitMix64 missing_rng(SplitMix64::derive(spec.seed, 4));

  const Day start = parse_day(spec.start_date);
  for (const auto& pv : spec.views) out.planted[pv.view.name];

  for (int p = 0; p < spec.participants; ++p) {
    char pid[32];
    std::snprintf(pid, sizeof pid, "P%02d", p + 1);
    for (int d = 0; d < spec.days_per_participant; ++d) {
      DayRecord rec;
      rec.id = {pid, start + std::chrono::days{d}};
      const int state = static_cast<int>(state_rng.below(static_cast<std::size_t>(spec.latent_states)));
      out.latent.push_back(state);

      for (const auto& pv : spec.views) {
        const int label = state % static_cast<int>(pv.clusters.size());
        out.planted[pv.view.name].push_back(label);
        const auto& c = pv.clusters[static_cast<std::size_t>(label)];
        for (std::size_t j = 0; j < c.centroid.size(); ++j) {
          const double v = c.centroid[j] + c.stddev[j] * feature_rng.normal();
          const bool blank = spec.missing_rate > 0.0 && missing_rng.uniform() < spec.missing_rate;
          rec.sensor_values.push_back(blank ? std::nullopt : std::optional<double>(v));
        }
      }
      for (const auto& s : spec.scores) {
        const bool is_null = spec.null_scores.count(s.name) > 0;
        const double mean = s.means[is_null ? 0 : static_cast<std::size_t>(state)];
        rec.clinical_values.push_back(mean + s.stddev * score_rng.normal());
      }
      ds.records.push_back(std::move(rec));
    }
  }
  return out;
}

SynthSpec make_synth_spec(const ViewRegistry& registry, const std::vector<int>& clusters_per_view,
                          int latent_states, double separation, std::uint64_t seed) {
  if (clusters_per_view.size() != registry.views.size())
    throw ContractError("one planted cluster count per view is required");
  SynthSpec spec;
  spec.latent_states = latent_states;
  spec.seed = seed;
  spec.cohort_context = registry.cohort_context;

  for (std::size_t v = 0; v < registry.views.size(); ++v) {
    PlantedView pv;
    pv.view = registry.views[v];
    pv.view.reference_k = clusters_per_view[v];
    const std::size_t d = pv.view.features.size();
    for (int c = 0; c < clusters_per_view[v]; ++c) {
      PlantedCluster pc;
      for (std::size_t j = 0; j < d; ++j) {
        const double sd = 1.0 + static_cast<double>(j % 3);
        const double base = 10.0 * static_cast<double>(j + 1);
        pc.centroid.push_back(base + separation * sd * static_cast<double>(c));
        pc.stddev.push_back(sd);
      }
      pv.clusters.push_back(std::move(pc));
    }
    spec.views.push_back(std::move(pv));
  }

  auto ramp = [latent_states](double base, double step) {
    std::vector<double> m;
    for (int s = 0; s < latent_states; ++s) m.push_back(base + step * s);
    return m;
  };
  spec.scores = {
      {"SIS", ramp(20.0, 3.0), 3.0},
      {"OHS", ramp(28.0, 2.5), 4.0},
      {"OKS", ramp(30.0, 3.0), 4.0},
      {"TUG", ramp(15.0, 0.0), 4.0},
  };
  spec.null_scores = {"TUG"};
  return spec;
}

SynthSpec default_synth_spec(std::uint64_t seed) {
  ViewRegistry reg = default_registry();
  reg.clinical_scores = {"SIS", "OHS", "OKS", "TUG"};
  return make_synth_spec(reg, {2, 2, 4, 4, 2, 2}, 4, 20.0, seed);
}

}  // namespace mvlabel
