#include "mvlabel/data_ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "mvlabel/errors.hpp"
#include "mvlabel/serialize.hpp"
#include "mvlabel/text.hpp"

namespace mvlabel {

namespace {

constexpr const char* kCohortContext =
    "These people are patients recovering from lower-limb fractures and were living at home.";

FeatureDescriptor feature(const char* name, const char* unit, const char* description) {
  return {name, unit, description};
}

std::size_t index_of(const std::vector<std::string>& names, std::string_view name,
                     const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ContractError(std::string("unknown ") + what + " '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

ViewRegistry default_registry() {
  ViewRegistry r;
  r.cohort_context = kCohortContext;
  r.clinical_scores = {"SIS", "OHS", "OKS", "TUG", "CST"};

  r.views.push_back(ViewSpec{
      "position",
      {
          feature("position-count", "count", "The total count of position data in a day."),
          feature("position-duration", "hours",
                  "The duration (in hours) of being outside the home in a day."),
          feature("position-travelled-distance", "kilometers",
                  "The total distance (in kilometers) traveled outside the home in a day."),
      },
      "This data was collected from smartphones with GPS carried by different persons and "
      "features were extracted from it.",
      2});

  r.views.push_back(ViewSpec{
      "motion",
      {
          feature("motion-count", "count",
                  "The total number of motion events detected inside the home in a day."),
          feature("motion-active-hours", "hours",
                  "The number of hours in a day with at least one motion event."),
          feature("motion-first-event-hour", "hour of day",
                  "The hour of the day at which the first motion event was detected."),
          feature("motion-last-event-hour", "hour of day",
                  "The hour of the day at which the last motion event was detected."),
          feature("motion-mean-interval", "minutes",
                  "The mean time (in minutes) between consecutive motion events in a day."),
      },
      "This data was collected from ambient motion sensors installed in the homes of different "
      "persons and features were extracted from it.",
      2});

  r.views.push_back(ViewSpec{
      "heart-rate",
      {
          feature("heart-rate-mean", "beats per minute", "The mean heart rate in a day."),
          feature("heart-rate-std", "beats per minute",
                  "The standard deviation of the heart rate in a day."),
          feature("heart-rate-min", "beats per minute", "The minimum heart rate in a day."),
          feature("heart-rate-max", "beats per minute", "The maximum heart rate in a day."),
      },
      "This data was collected from smartwatches worn by different persons and features were "
      "extracted from it.",
      5});

  r.views.push_back(ViewSpec{
      "sleep",
      {
          feature("sleep-duration", "hours", "The total sleep duration (in hours) in a night."),
          feature("sleep-light-duration", "hours",
                  "The duration (in hours) of light sleep in a night."),
          feature("sleep-deep-duration", "hours",
                  "The duration (in hours) of deep sleep in a night."),
          feature("sleep-rem-duration", "hours",
                  "The duration (in hours) of REM sleep in a night."),
          feature("sleep-awake-duration", "hours",
                  "The duration (in hours) spent awake in bed in a night."),
          feature("sleep-wakeup-count", "count", "The number of wake-ups in a night."),
          feature("sleep-latency", "minutes",
                  "The time (in minutes) taken to fall asleep in a night."),
          feature("sleep-snoring-duration", "minutes",
                  "The duration (in minutes) of snoring in a night."),
          feature("sleep-heart-rate-mean", "beats per minute",
                  "The mean heart rate during sleep in a night."),
          feature("sleep-respiratory-rate-mean", "breaths per minute",
                  "The mean respiratory rate during sleep in a night."),
          feature("sleep-score", "score",
                  "The overall sleep quality score (0 to 100) for a night."),
      },
      "This data was collected from under-mattress sleep-tracking sensors used by different "
      "persons and features were extracted from it.",
      4});

  r.views.push_back(ViewSpec{
      "step",
      {
          feature("step-count", "count", "The total number of steps taken in a day."),
          feature("step-mean-per-hour", "steps per hour",
                  "The mean number of steps per hour in a day."),
          feature("step-std-per-hour", "steps per hour",
                  "The standard deviation of the hourly step count in a day."),
          feature("step-max-per-hour", "steps per hour",
                  "The maximum number of steps taken in a single hour in a day."),
          feature("step-active-hours", "hours",
                  "The number of hours in a day with at least one step."),
      },
      "This data was collected from smartwatches worn by different persons and features were "
      "extracted from it.",
      2});

  r.views.push_back(ViewSpec{
      "acceleration",
      {
          feature("acceleration-count", "count",
                  "The total count of acceleration samples recorded in a day."),
          feature("acceleration-mean", "m/s^2",
                  "The mean magnitude of acceleration in a day."),
          feature("acceleration-std", "m/s^2",
                  "The standard deviation of the acceleration magnitude in a day."),
          feature("acceleration-min", "m/s^2",
                  "The minimum acceleration magnitude in a day."),
          feature("acceleration-max", "m/s^2",
                  "The maximum acceleration magnitude in a day."),
          feature("acceleration-median", "m/s^2",
                  "The median acceleration magnitude in a day."),
          feature("acceleration-iqr", "m/s^2",
                  "The interquartile range of the acceleration magnitude in a day."),
      },
      "This data was collected from smartwatches worn by different persons and features were "
      "extracted from it.",
      2});

  return r;
}

const ViewSpec& ViewRegistry::view(std::string_view name) const {
  for (const auto& v : views)
    if (v.name == name) return v;
  throw ContractError("unknown view '" + std::string(name) + "'");
}

std::vector<std::string> ViewRegistry::sensor_columns() const {
  std::vector<std::string> out;
  for (const auto& v : views)
    for (const auto& f : v.features) out.push_back(f.name);
  return out;
}

void ViewRegistry::validate() const {
  if (views.empty()) throw SchemaError("registry defines no views");
  std::set<std::string> seen_views;
  std::set<std::string> seen_features;
  for (const auto& v : views) {
    if (v.name.empty()) throw SchemaError("registry view with empty name");
    if (!seen_views.insert(v.name).second)
      throw SchemaError(v.name, "duplicate view '" + v.name + "'");
    if (v.features.empty()) throw SchemaError(v.name, "view '" + v.name + "' has no features");
    for (const auto& f : v.features) {
      if (f.name.empty()) throw SchemaError("view '" + v.name + "' has a feature with no name");
      if (f.description.empty())
        throw SchemaError(f.name, "feature '" + f.name + "' has an empty description");
      if (!seen_features.insert(f.name).second)
        throw SchemaError(f.name, "feature '" + f.name + "' appears in more than one place");
    }
  }
  std::set<std::string> seen_scores;
  for (const auto& s : clinical_scores) {
    if (seen_features.count(s))
      throw SchemaError(s, "clinical score '" + s + "' is also a sensor feature");
    if (!seen_scores.insert(s).second)
      throw SchemaError(s, "duplicate clinical score '" + s + "'");
  }
  if (participant_column.empty() || timestamp_column.empty())
    throw SchemaError("registry must name the participant and timestamp columns");
}

ViewRegistry load_registry(const std::filesystem::path& path) {
  ViewRegistry r;
  try {
    r = nlohmann::json::parse(read_file(path)).get<ViewRegistry>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid view registry '" + path.string() + "': " + e.what());
  }
  r.validate();
  return r;
}

Day parse_day(std::string_view text) {
  const std::string t = trim(text);
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  char sep1 = 0;
  char sep2 = 0;
  if (t.size() < 8 ||
      std::sscanf(t.c_str(), "%d%c%u%c%u", &y, &sep1, &m, &sep2, &d) != 5 ||
      sep1 != sep2 || (sep1 != '-' && sep1 != '/'))
    throw std::invalid_argument("unparsable date '" + t + "'");
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) throw std::invalid_argument("invalid date '" + t + "'");
  return Day{ymd};
}

std::string format_day(Day day) {
  const std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string RowId::to_string() const { return participant + "|" + format_day(day); }

std::size_t Dataset::sensor_index(std::string_view name) const {
  return index_of(sensor_columns, name, "sensor feature");
}

std::size_t Dataset::clinical_index(std::string_view name) const {
  return index_of(clinical_scores, name, "clinical score");
}

const ViewSpec& Dataset::view(std::string_view name) const {
  for (const auto& v : views)
    if (v.name == name) return v;
  throw ContractError("unknown view '" + std::string(name) + "'");
}

Dataset load_dataset(const std::filesystem::path& path, const ViewRegistry& registry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open dataset '" + path.string() + "'");
  return load_dataset(in, registry);
}

Dataset load_dataset(std::istream& in, const ViewRegistry& registry) {
  registry.validate();
  const auto rows = csv::read(in);
  if (rows.empty()) throw SchemaError("dataset has no header row");

  std::vector<std::string> header;
  header.reserve(rows.front().size());
  for (const auto& h : rows.front()) header.push_back(trim(h));

  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i].empty()) throw SchemaError("header has an empty column name at position " +
                                             std::to_string(i + 1));
    if (!position.emplace(header[i], i).second)
      throw SchemaError(header[i], "duplicate header column '" + header[i] + "'");
  }
  auto require = [&](const std::string& column) {
    auto it = position.find(column);
    if (it == position.end())
      throw SchemaError(column, "required column '" + column + "' is absent from the dataset");
    return it->second;
  };

  Dataset ds;
  ds.views = registry.views;
  ds.sensor_columns = registry.sensor_columns();
  ds.clinical_scores = registry.clinical_scores;
  ds.cohort_context = registry.cohort_context;

  const std::size_t participant_col = require(registry.participant_column);
  const std::size_t timestamp_col = require(registry.timestamp_column);
  std::vector<std::size_t> sensor_cols;
  for (const auto& name : ds.sensor_columns) sensor_cols.push_back(require(name));
  std::vector<std::size_t> clinical_cols;
  for (const auto& name : ds.clinical_scores) clinical_cols.push_back(require(name));

  std::set<std::size_t> used(sensor_cols.begin(), sensor_cols.end());
  used.insert(clinical_cols.begin(), clinical_cols.end());
  used.insert(participant_col);
  used.insert(timestamp_col);

  ds.columns.metadata = {registry.participant_column, registry.timestamp_column};
  ds.columns.sensor = ds.sensor_columns;
  ds.columns.clinical = ds.clinical_scores;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (!used.count(i)) ds.columns.dropped.push_back(header[i]);

  if (rows.size() < 2) throw EmptyDatasetError("dataset has a header but no data rows");

  auto parse = [&](const csv::Row& row, std::size_t col, std::size_t line) {
    try {
      return parse_cell(row[col]);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(header[col], "line " + std::to_string(line) + ", column '" +
                                         header[col] + "': " + e.what());
    }
  };

  ds.records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t line = r + 1;
    if (row.size() != header.size())
      throw SchemaError("line " + std::to_string(line) + " has " + std::to_string(row.size()) +
                        " fields, header has " + std::to_string(header.size()));
    DayRecord rec;
    rec.id.participant = trim(row[participant_col]);
    try {
      rec.id.day = parse_day(row[timestamp_col]);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(registry.timestamp_column,
                        "line " + std::to_string(line) + ": " + e.what());
    }
    rec.sensor_values.reserve(sensor_cols.size());
    for (auto c : sensor_cols) rec.sensor_values.push_back(parse(row, c, line));
    rec.clinical_values.reserve(clinical_cols.size());
    for (auto c : clinical_cols) rec.clinical_values.push_back(parse(row, c, line));
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

void write_dataset_csv(const Dataset& dataset, std::ostream& out) {
  csv::Row header{dataset.columns.metadata.size() == 2 ? dataset.columns.metadata[0]
                                                       : std::string("participant"),
                  dataset.columns.metadata.size() == 2 ? dataset.columns.metadata[1]
                                                       : std::string("timestamp")};
  header.insert(header.end(), dataset.sensor_columns.begin(), dataset.sensor_columns.end());
  header.insert(header.end(), dataset.clinical_scores.begin(), dataset.clinical_scores.end());
  out << csv::join(header) << '\n';

  auto cell = [](const std::optional<double>& v) {
    return v ? format_shortest(*v) : std::string();
  };
  for (const auto& rec : dataset.records) {
    csv::Row row{rec.id.participant, format_day(rec.id.day)};
    for (const auto& v : rec.sensor_values) row.push_back(cell(v));
    for (const auto& v : rec.clinical_values) row.push_back(cell(v));
    out << csv::join(row) << '\n';
  }
}

FeatureMatrix partition_view(const Dataset& dataset, const ViewSpec& view, std::size_t min_rows) {
  std::vector<std::size_t> cols;
  cols.reserve(view.features.size());
  for (const auto& f : view.features) cols.push_back(dataset.sensor_index(f.name));

  FeatureMatrix m;
  m.view_name = view.name;
  std::vector<double> row(cols.size());
  for (std::size_t r = 0; r < dataset.records.size(); ++r) {
    const auto& rec = dataset.records[r];
    bool complete = true;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const auto& v = rec.sensor_values[cols[j]];
      if (!v) {
        complete = false;
        break;
      }
      row[j] = *v;
    }
    if (!complete) continue;
    m.row_ids.push_back(rec.id);
    m.record_index.push_back(r);
    m.values.append_row(row);
  }
  if (m.values.rows() == 0) m.values = Matrix(0, cols.size());
  if (m.values.rows() < min_rows)
    throw InsufficientRowsError("view '" + view.name + "' has " +
                                std::to_string(m.values.rows()) +
                                " complete days, fewer than the " + std::to_string(min_rows) +
                                " required by the K search");
  return m;
}

std::map<std::string, FeatureMatrix> partition_views(const Dataset& dataset,
                                                     std::size_t min_rows) {
  if (dataset.records.empty()) throw EmptyDatasetError("dataset has no records");
  std::map<std::string, FeatureMatrix> out;
  for (const auto& v : dataset.views) out.emplace(v.name, partition_view(dataset, v, min_rows));
  return out;
}

std::size_t ClinicalTable::score_index(std::string_view score) const {
  return index_of(scores, score, "clinical score");
}

std::optional<double> ClinicalTable::value(std::size_t record, std::string_view score) const {
  return values.at(record)[score_index(score)];
}

ClinicalTable extract_clinical(const Dataset& dataset, const ClinicalFillOptions& options) {
  ClinicalTable table;
  table.scores = dataset.clinical_scores;
  table.row_ids.reserve(dataset.records.size());
  table.values.reserve(dataset.records.size());
  for (const auto& rec : dataset.records) {
    table.row_ids.push_back(rec.id);
    table.values.push_back(rec.clinical_values);
  }
  if (options.mode == ClinicalFillOptions::Mode::PassThrough) return table;
  if (options.window_days < 1) throw ContractError("back-fill window must be at least one day");

  std::map<std::string, std::vector<std::size_t>> by_participant;
  for (std::size_t r = 0; r < dataset.records.size(); ++r)
    by_participant[dataset.records[r].id.participant].push_back(r);

  for (const auto& [participant, idx] : by_participant) {
    for (std::size_t s = 0; s < table.scores.size(); ++s) {
      // assessment day -> value; the first record wins when a day repeats
      std::map<Day, double> assessments;
      for (auto r : idx)
        if (const auto& v = dataset.records[r].clinical_values[s])
          assessments.emplace(dataset.records[r].id.day, *v);

      for (auto r : idx) {
        const Day day = dataset.records[r].id.day;
        auto next = assessments.lower_bound(day);
        std::optional<double> filled;
        if (next != assessments.end()) {
          const auto gap = (next->first - day).count();
          const bool covered = next->first == day ||
                               (options.include_assessment_day ? gap <= options.window_days - 1
                                                               : gap <= options.window_days);
          if (covered) filled = next->second;
        }
        table.values[r][s] = filled;
      }
    }
  }
  return table;
}

}  // namespace mvlabel
