#pragma once

#include "json.hpp"
#include "mvlabel/cluster_engine.hpp"
#include "mvlabel/data_ingest.hpp"
#include "mvlabel/labeling.hpp"
#include "mvlabel/preprocess.hpp"
#include "mvlabel/stats.hpp"
#include "mvlabel/synth_data.hpp"
#include "mvlabel/validation.hpp"

// nlohmann::json conversions for every artifact written to a run directory.
// Missing optional fields fall back to the struct defaults; NaN is stored as null.

namespace mvlabel {

using Json = nlohmann::json;

void to_json(Json& j, const FeatureDescriptor& v);
void from_json(const Json& j, FeatureDescriptor& v);
void to_json(Json& j, const ViewSpec& v);
void from_json(const Json& j, ViewSpec& v);
void to_json(Json& j, const ViewRegistry& v);
void from_json(const Json& j, ViewRegistry& v);

void to_json(Json& j, const RowId& v);
void from_json(const Json& j, RowId& v);
void to_json(Json& j, const DayRecord& v);
void from_json(const Json& j, DayRecord& v);
void to_json(Json& j, const ColumnAccounting& v);
void from_json(const Json& j, ColumnAccounting& v);
void to_json(Json& j, const Dataset& v);
void from_json(const Json& j, Dataset& v);

void to_json(Json& j, const Matrix& v);
void from_json(const Json& j, Matrix& v);

void to_json(Json& j, NormalizationMode v);
void from_json(const Json& j, NormalizationMode& v);
void to_json(Json& j, const NormalizationParams& v);
void from_json(const Json& j, NormalizationParams& v);

void to_json(Json& j, const ClusterModel& v);
void from_json(const Json& j, ClusterModel& v);
void to_json(Json& j, const KCandidate& v);
void from_json(const Json& j, KCandidate& v);
void to_json(Json& j, const KSelectionTrace& v);
void from_json(const Json& j, KSelectionTrace& v);

void to_json(Json& j, const ClusterLabel& v);
void from_json(const Json& j, ClusterLabel& v);
void to_json(Json& j, const ClusterLabelSet& v);
void from_json(const Json& j, ClusterLabelSet& v);

void to_json(Json& j, TestKind v);
void from_json(const Json& j, TestKind& v);
void to_json(Json& j, Normality v);
void from_json(const Json& j, Normality& v);
void to_json(Json& j, const ClinicalGroup& v);
void from_json(const Json& j, ClinicalGroup& v);
void to_json(Json& j, const ClusterClinicalSummary& v);
void from_json(const Json& j, ClusterClinicalSummary& v);
void to_json(Json& j, const SignificanceRow& v);
void from_json(const Json& j, SignificanceRow& v);

void to_json(Json& j, const PlantedCluster& v);
void from_json(const Json& j, PlantedCluster& v);
void to_json(Json& j, const PlantedView& v);
void from_json(const Json& j, PlantedView& v);
void to_json(Json& j, const PlantedScore& v);
void from_json(const Json& j, PlantedScore& v);
void to_json(Json& j, const SynthSpec& v);
void from_json(const Json& j, SynthSpec& v);

}  // namespace mvlabel
