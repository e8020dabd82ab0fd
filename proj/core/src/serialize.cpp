#include "mvlabel/serialize.hpp"

#include <cmath>
#include <limits>

namespace mvlabel {

namespace {

template <typename T>
void read_opt(const Json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end() && !it->is_null()) it->get_to(out);
}

Json nullable(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double nan_if_null(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Json optional_cells(const std::vector<std::optional<double>>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(v ? Json(*v) : Json(nullptr));
  return out;
}

std::vector<std::optional<double>> read_optional_cells(const Json& j) {
  std::vector<std::optional<double>> out;
  for (const auto& v : j) out.push_back(v.is_null() ? std::nullopt : std::optional(v.get<double>()));
  return out;
}

}  // namespace

void to_json(Json& j, const FeatureDescriptor& v) {
  j = {{"name", v.name}, {"unit", v.unit}, {"description", v.description}};
}
void from_json(const Json& j, FeatureDescriptor& v) {
  j.at("name").get_to(v.name);
  read_opt(j, "unit", v.unit);
  j.at("description").get_to(v.description);
}

void to_json(Json& j, const ViewSpec& v) {
  j = {{"name", v.name}, {"features", v.features}, {"sensor_context", v.sensor_context}};
  j["reference_k"] = v.reference_k ? Json(*v.reference_k) : Json(nullptr);
}
void from_json(const Json& j, ViewSpec& v) {
  j.at("name").get_to(v.name);
  j.at("features").get_to(v.features);
  read_opt(j, "sensor_context", v.sensor_context);
  v.reference_k.reset();
  if (const auto it = j.find("reference_k"); it != j.end() && !it->is_null())
    v.reference_k = it->get<int>();
}

void to_json(Json& j, const ViewRegistry& v) {
  j = {{"participant_column", v.participant_column},
       {"timestamp_column", v.timestamp_column},
       {"clinical_scores", v.clinical_scores},
       {"cohort_context", v.cohort_context},
       {"views", v.views}};
}
void from_json(const Json& j, ViewRegistry& v) {
  v = ViewRegistry{};
  j.at("views").get_to(v.views);
  j.at("clinical_scores").get_to(v.clinical_scores);
  read_opt(j, "participant_column", v.participant_column);
  read_opt(j, "timestamp_column", v.timestamp_column);
  read_opt(j, "cohort_context", v.cohort_context);
}

void to_json(Json& j, const RowId& v) {
  j = {{"participant", v.participant}, {"day", format_day(v.day)}};
}
void from_json(const Json& j, RowId& v) {
  j.at("participant").get_to(v.participant);
  v.day = parse_day(j.at("day").get<std::string>());
}

void to_json(Json& j, const DayRecord& v) {
  j = {{"id", v.id},
       {"sensor", optional_cells(v.sensor_values)},
       {"clinical", optional_cells(v.clinical_values)}};
}
void from_json(const Json& j, DayRecord& v) {
  j.at("id").get_to(v.id);
  v.sensor_values = read_optional_cells(j.at("sensor"));
  v.clinical_values = read_optional_cells(j.at("clinical"));
}

void to_json(Json& j, const ColumnAccounting& v) {
  j = {{"metadata", v.metadata}, {"dropped", v.dropped}, {"clinical", v.clinical},
       {"sensor", v.sensor}};
}
void from_json(const Json& j, ColumnAccounting& v) {
  j.at("metadata").get_to(v.metadata);
  j.at("dropped").get_to(v.dropped);
  j.at("clinical").get_to(v.clinical);
  j.at("sensor").get_to(v.sensor);
}

void to_json(Json& j, const Dataset& v) {
  j = {{"views", v.views},
       {"sensor_columns", v.sensor_columns},
       {"clinical_scores", v.clinical_scores},
       {"columns", v.columns},
       {"cohort_context", v.cohort_context},
       {"records", v.records}};
}
void from_json(const Json& j, Dataset& v) {
  j.at("views").get_to(v.views);
  j.at("sensor_columns").get_to(v.sensor_columns);
  j.at("clinical_scores").get_to(v.clinical_scores);
  j.at("columns").get_to(v.columns);
  read_opt(j, "cohort_context", v.cohort_context);
  j.at("records").get_to(v.records);
}

void to_json(Json& j, const Matrix& v) {
  j = Json::array();
  for (std::size_t r = 0; r < v.rows(); ++r) {
    const auto row = v.row(r);
    j.push_back(std::vector<double>(row.begin(), row.end()));
  }
}
void from_json(const Json& j, Matrix& v) {
  v = Matrix{};
  for (const auto& row : j) v.append_row(row.get<std::vector<double>>());
}

void to_json(Json& j, NormalizationMode v) { j = to_string(v); }
void from_json(const Json& j, NormalizationMode& v) {
  v = parse_normalization_mode(j.get<std::string>());
}

void to_json(Json& j, const NormalizationParams& v) {
  j = {{"view", v.view_name}, {"mode", v.mode}, {"offset", v.offset}, {"scale", v.scale}};
}
void from_json(const Json& j, NormalizationParams& v) {
  j.at("view").get_to(v.view_name);
  j.at("mode").get_to(v.mode);
  j.at("offset").get_to(v.offset);
  j.at("scale").get_to(v.scale);
}

void to_json(Json& j, const ClusterModel& v) {
  j = {{"view", v.view_name},
       {"k", v.k},
       {"seed", v.seed},
       {"iterations", v.iterations},
       {"converged", v.converged},
       {"inertia", v.inertia},
       {"silhouette", v.silhouette},
       {"inertia_history", v.inertia_history},
       {"centers_normalized", v.centers_normalized},
       {"centers_original", v.centers_original},
       {"assignments", v.assignments},
       {"row_ids", v.row_ids},
       {"record_index", v.record_index}};
}
void from_json(const Json& j, ClusterModel& v) {
  j.at("view").get_to(v.view_name);
  j.at("k").get_to(v.k);
  j.at("seed").get_to(v.seed);
  j.at("iterations").get_to(v.iterations);
  j.at("converged").get_to(v.converged);
  j.at("inertia").get_to(v.inertia);
  j.at("silhouette").get_to(v.silhouette);
  j.at("inertia_history").get_to(v.inertia_history);
  j.at("centers_normalized").get_to(v.centers_normalized);
  j.at("centers_original").get_to(v.centers_original);
  j.at("assignments").get_to(v.assignments);
  j.at("row_ids").get_to(v.row_ids);
  j.at("record_index").get_to(v.record_index);
}

void to_json(Json& j, const KCandidate& v) {
  j = {{"k", v.k}, {"silhouette", v.silhouette}, {"inertia", v.inertia}, {"sizes", v.sizes}};
}
void from_json(const Json& j, KCandidate& v) {
  j.at("k").get_to(v.k);
  j.at("silhouette").get_to(v.silhouette);
  j.at("inertia").get_to(v.inertia);
  j.at("sizes").get_to(v.sizes);
}

void to_json(Json& j, const KSelectionTrace& v) {
  j = {{"k_min", v.k_min}, {"k_max", v.k_max}, {"candidates", v.candidates},
       {"warnings", v.warnings}};
}
void from_json(const Json& j, KSelectionTrace& v) {
  j.at("k_min").get_to(v.k_min);
  j.at("k_max").get_to(v.k_max);
  j.at("candidates").get_to(v.candidates);
  read_opt(j, "warnings", v.warnings);
}

void to_json(Json& j, const ClusterLabel& v) {
  j = {{"cluster", v.cluster_index}, {"name", v.name}, {"description", v.description}};
}
void from_json(const Json& j, ClusterLabel& v) {
  j.at("cluster").get_to(v.cluster_index);
  j.at("name").get_to(v.name);
  read_opt(j, "description", v.description);
}

void to_json(Json& j, const ClusterLabelSet& v) {
  j = {{"view", v.view_name},
       {"generic", v.generic},
       {"labels", v.labels},
       {"provider_model", v.provider_model},
       {"provider_timestamp", v.provider_timestamp},
       {"raw_response", v.raw_response}};
}
void from_json(const Json& j, ClusterLabelSet& v) {
  j.at("view").get_to(v.view_name);
  read_opt(j, "generic", v.generic);
  j.at("labels").get_to(v.labels);
  read_opt(j, "provider_model", v.provider_model);
  read_opt(j, "provider_timestamp", v.provider_timestamp);
  read_opt(j, "raw_response", v.raw_response);
}

void to_json(Json& j, TestKind v) { j = to_string(v); }
void from_json(const Json& j, TestKind& v) { v = parse_test_kind(j.get<std::string>()); }
void to_json(Json& j, Normality v) { j = verdict_text(v); }
void from_json(const Json& j, Normality& v) { v = parse_verdict_text(j.get<std::string>()); }

void to_json(Json& j, const ClinicalGroup& v) {
  j = {{"n", v.n()}, {"mean", v.mean ? Json(*v.mean) : Json(nullptr)}, {"values", v.values}};
}
void from_json(const Json& j, ClinicalGroup& v) {
  j.at("values").get_to(v.values);
  v.mean.reset();
  if (const auto& m = j.at("mean"); !m.is_null()) v.mean = m.get<double>();
}

void to_json(Json& j, const ClusterClinicalSummary& v) {
  j = {{"view", v.view_name}, {"k", v.k}, {"scores", v.scores}, {"groups", v.groups}};
}
void from_json(const Json& j, ClusterClinicalSummary& v) {
  j.at("view").get_to(v.view_name);
  j.at("k").get_to(v.k);
  j.at("scores").get_to(v.scores);
  j.at("groups").get_to(v.groups);
}

void to_json(Json& j, const SignificanceRow& v) {
  j = {{"view", v.view_name},
       {"score", v.score},
       {"verdicts", v.verdicts},
       {"test", v.test ? Json(to_string(*v.test)) : Json(nullptr)},
       {"statistic", nullable(v.statistic)},
       {"p", nullable(v.p_value)},
       {"p_formatted", v.p_formatted},
       {"significant", v.significant},
       {"note", v.note}};
  // An infinite t statistic is meaningful; keep its sign.
  if (std::isinf(v.statistic)) j["statistic"] = v.statistic > 0 ? "inf" : "-inf";
}
void from_json(const Json& j, SignificanceRow& v) {
  j.at("view").get_to(v.view_name);
  j.at("score").get_to(v.score);
  j.at("verdicts").get_to(v.verdicts);
  v.test.reset();
  if (const auto& t = j.at("test"); !t.is_null()) v.test = t.get<TestKind>();
  const auto& stat = j.at("statistic");
  if (stat.is_string()) {
    v.statistic = (stat.get<std::string>() == "-inf" ? -1.0 : 1.0) *
                  std::numeric_limits<double>::infinity();
  } else {
    v.statistic = nan_if_null(stat);
  }
  v.p_value = nan_if_null(j.at("p"));
  j.at("p_formatted").get_to(v.p_formatted);
  j.at("significant").get_to(v.significant);
  read_opt(j, "note", v.note);
}

void to_json(Json& j, const PlantedCluster& v) {
  j = {{"centroid", v.centroid}, {"stddev", v.stddev}};
}
void from_json(const Json& j, PlantedCluster& v) {
  j.at("centroid").get_to(v.centroid);
  j.at("stddev").get_to(v.stddev);
}

void to_json(Json& j, const PlantedView& v) { j = {{"view", v.view}, {"clusters", v.clusters}}; }
void from_json(const Json& j, PlantedView& v) {
  j.at("view").get_to(v.view);
  j.at("clusters").get_to(v.clusters);
}

void to_json(Json& j, const PlantedScore& v) {
  j = {{"name", v.name}, {"means", v.means}, {"stddev", v.stddev}};
}
void from_json(const Json& j, PlantedScore& v) {
  j.at("name").get_to(v.name);
  j.at("means").get_to(v.means);
  read_opt(j, "stddev", v.stddev);
}

void to_json(Json& j, const SynthSpec& v) {
  j = {{"seed", v.seed},
       {"latent_states", v.latent_states},
       {"participants", v.participants},
       {"days_per_participant", v.days_per_participant},
       {"start_date", v.start_date},
       {"missing_rate", v.missing_rate},
       {"cohort_context", v.cohort_context},
       {"null_scores", v.null_scores},
       {"scores", v.scores},
       {"views", v.views}};
}
void from_json(const Json& j, SynthSpec& v) {
  v = SynthSpec{};
  j.at("views").get_to(v.views);
  j.at("scores").get_to(v.scores);
  read_opt(j, "seed", v.seed);
  read_opt(j, "latent_states", v.latent_states);
  read_opt(j, "participants", v.participants);
  read_opt(j, "days_per_participant", v.days_per_participant);
  read_opt(j, "start_date", v.start_date);
  read_opt(j, "missing_rate", v.missing_rate);
  read_opt(j, "cohort_context", v.cohort_context);
  read_opt(j, "null_scores", v.null_scores);
}

}  // namespace mvlabel
