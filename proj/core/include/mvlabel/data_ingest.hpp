#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvlabel/matrix.hpp"

namespace mvlabel {

/// One sensor feature as it is named in the data file and described to the LLM.
struct FeatureDescriptor {
  std::string name;
  std::string unit;
  std::string description;

  friend bool operator==(const FeatureDescriptor&, const FeatureDescriptor&) = default;
};

/// A modality ("view"): an ordered group of features clustered together.
struct ViewSpec {
  std::string name;
  std::vector<FeatureDescriptor> features;
  /// Sentence describing where the data came from; used verbatim in the prompt.
  std::string sensor_context;
  /// Optional reference K, only used to flag deviations in reports.
  std::optional<int> reference_k;

  friend bool operator==(const ViewSpec&, const ViewSpec&) = default;
};

/// Schema of the day-level table: sensor views, clinical columns and the two
/// row-metadata columns. Loaded from JSON so column names stay configurable.
struct ViewRegistry {
  std::vector<ViewSpec> views;
  std::vector<std::string> clinical_scores;
  std::string participant_column = "participant";
  std::string timestamp_column = "timestamp";
  std::string cohort_context;

  [[nodiscard]] const ViewSpec& view(std::string_view name) const;
  [[nodiscard]] std::vector<std::string> sensor_columns() const;

  /// Throws SchemaError on duplicate feature names, empty descriptions or a
  /// clinical column that doubles as a sensor feature.
  void validate() const;

  friend bool operator==(const ViewRegistry&, const ViewRegistry&) = default;
};

/// The six-view MAISON-LLF registry (3 + 5 + 4 + 11 + 5 + 7 features).
ViewRegistry default_registry();
ViewRegistry load_registry(const std::filesystem::path& path);

using Day = std::chrono::sys_days;

/// Parses the leading YYYY-MM-DD of a timestamp cell.
Day parse_day(std::string_view text);
std::string format_day(Day day);

struct RowId {
  std::string participant;
  Day day;

  [[nodiscard]] std::string to_string() const;
  friend auto operator<=>(const RowId&, const RowId&) = default;
  friend bool operator==(const RowId&, const RowId&) = default;
};

/// One monitored day. Values are aligned with Dataset::sensor_columns and
/// Dataset::clinical_scores; an empty optional is a missing cell.
struct DayRecord {
  RowId id;
  std::vector<std::optional<double>> sensor_values;
  std::vector<std::optional<double>> clinical_values;
};

/// Where every header column of the input went.
struct ColumnAccounting {
  std::vector<std::string> metadata;  // participant + timestamp, kept as row ids
  std::vector<std::string> dropped;   // clinical-timestamp, demographics, unused scores
  std::vector<std::string> clinical;
  std::vector<std::string> sensor;

  [[nodiscard]] std::size_t total() const {
    return metadata.size() + dropped.size() + clinical.size() + sensor.size();
  }
};

struct Dataset {
  std::vector<DayRecord> records;
  std::vector<ViewSpec> views;
  std::vector<std::string> sensor_columns;
  std::vector<std::string> clinical_scores;
  ColumnAccounting columns;
  std::string cohort_context;

  [[nodiscard]] std::size_t sensor_index(std::string_view name) const;
  [[nodiscard]] std::size_t clinical_index(std::string_view name) const;
  [[nodiscard]] const ViewSpec& view(std::string_view name) const;
};

/// Rows are the days with every feature of the view present, in dataset order.
struct FeatureMatrix {
  std::string view_name;
  std::vector<RowId> row_ids;
  std::vector<std::size_t> record_index;  // position of each row in Dataset::records
  Matrix values;
};

Dataset load_dataset(const std::filesystem::path& path, const ViewRegistry& registry);
Dataset load_dataset(std::istream& in, const ViewRegistry& registry);

/// Writes the dataset back in the same CSV dialect load_dataset reads.
void write_dataset_csv(const Dataset& dataset, std::ostream& out);

FeatureMatrix partition_view(const Dataset& dataset, const ViewSpec& view,
                             std::size_t min_rows = 15);

/// One matrix per view. Throws InsufficientRowsError naming the view when a
/// matrix has fewer than `min_rows` complete days.
std::map<std::string, FeatureMatrix> partition_views(const Dataset& dataset,
                                                     std::size_t min_rows = 15);

struct ClinicalFillOptions {
  enum class Mode { PassThrough, BackFill };
  Mode mode = Mode::PassThrough;
  int window_days = 14;
  /// When true the window is the 14 days ending on the assessment day;
  /// otherwise the 14 days strictly before it (the assessment day keeps its own value).
  bool include_assessment_day = true;
};

/// Daily clinical scores aligned with Dataset::records.
struct ClinicalTable {
  std::vector<std::string> scores;
  std::vector<RowId> row_ids;
  std::vector<std::vector<std::optional<double>>> values;  // [record][score]

  [[nodiscard]] std::optional<double> value(std::size_t record, std::string_view score) const;
  [[nodiscard]] std::size_t score_index(std::string_view score) const;
};

ClinicalTable extract_clinical(const Dataset& dataset, const ClinicalFillOptions& options = {});

}  // namespace mvlabel
