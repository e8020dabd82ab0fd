#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "mvlabel/data_ingest.hpp"
#include "mvlabel/errors.hpp"
#include "support.hpp"

using namespace mvlabel;

namespace {

ViewRegistry small_registry() {
  ViewRegistry r;
  r.views = {{"a", {{"f1", "u", "first"}, {"f2", "u", "second"}}, "ctx a", 2},
             {"b", {{"g1", "", "only"}}, "ctx b", std::nullopt}};
  r.clinical_scores = {"S1", "S2"};
  r.cohort_context = "cohort";
  return r;
}

std::string small_csv(int days) {
  std::ostringstream out;
  out << "participant,timestamp,f1,f2,g1,S1,S2,clinical-timestamp,age\n";
  for (int d = 1; d <= days; ++d) {
    out << "P1,2023-01-" << (d < 10 ? "0" : "") << d << ",";
    out << d << "," << (d % 4 == 0 ? "" : std::to_string(d * 2)) << "," << d * 3 << ",";
    out << (d == 15 ? "30" : "") << "," << (d == 5 ? "7" : "") << ",,41\n";
  }
  return out.str();
}

Dataset load_small(int days = 20) {
  std::istringstream in(small_csv(days));
  return load_dataset(in, small_registry());
}

}  // namespace

TEST_SUITE("data_ingest") {
  TEST_CASE("every header column is accounted for") {
    const Dataset ds = load_small();
    CHECK(ds.records.size() == 20);
    CHECK(ds.columns.total() == 9);
    CHECK(ds.columns.metadata == std::vector<std::string>{"participant", "timestamp"});
    CHECK(ds.columns.dropped == std::vector<std::string>{"clinical-timestamp", "age"});
    CHECK(ds.columns.clinical == std::vector<std::string>{"S1", "S2"});
    CHECK(ds.columns.sensor == std::vector<std::string>{"f1", "f2", "g1"});
    CHECK(ds.records[3].sensor_values[1] == std::nullopt);
    CHECK(ds.records[14].clinical_values[0] == 30.0);
    CHECK(ds.records[0].id.to_string() == "P1|2023-01-01");
  }

  TEST_CASE("missing required column names the column") {
    std::istringstream in("participant,timestamp,f1,g1,S1,S2\nP1,2023-01-01,1,2,3,4\n");
    try {
      load_dataset(in, small_registry());
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.column() == "f2");
    }
  }

  TEST_CASE("header without rows is an empty dataset") {
    std::istringstream in("participant,timestamp,f1,f2,g1,S1,S2\n");
    CHECK_THROWS_AS(load_dataset(in, small_registry()), EmptyDatasetError);
  }

  TEST_CASE("unparsable cells and bad dates are schema errors") {
    std::istringstream bad_cell("participant,timestamp,f1,f2,g1,S1,S2\nP1,2023-01-01,x,2,3,4,5\n");
    CHECK_THROWS_AS(load_dataset(bad_cell, small_registry()), SchemaError);
    std::istringstream bad_day("participant,timestamp,f1,f2,g1,S1,S2\nP1,yesterday,1,2,3,4,5\n");
    CHECK_THROWS_AS(load_dataset(bad_day, small_registry()), SchemaError);
  }

  TEST_CASE("day parsing accepts timestamps") {
    CHECK(format_day(parse_day("2023-01-02")) == "2023-01-02");
    CHECK(format_day(parse_day("2023-01-02 08:30:00")) == "2023-01-02");
    CHECK(format_day(parse_day("2023-01-02T23:59:59Z")) == "2023-01-02");
    CHECK_THROWS(parse_day("2023-13-40"));
  }

  TEST_CASE("partition drops incomplete days and keeps record order") {
    const Dataset ds = load_small();
    const FeatureMatrix a = partition_view(ds, ds.view("a"), 10);
    CHECK(a.values.rows() == 15);  // days 4, 8, 12, 16, 20 lack f2
    CHECK(a.values.cols() == 2);
    CHECK(std::is_sorted(a.record_index.begin(), a.record_index.end()));
    for (std::size_t r = 0; r < a.values.rows(); ++r) {
      CHECK(a.row_ids[r] == ds.records[a.record_index[r]].id);
      CHECK(a.values(r, 0) == *ds.records[a.record_index[r]].sensor_values[0]);
    }
    const auto all = partition_views(ds, 10);
    CHECK(all.at("b").values.rows() == 20);
  }

  TEST_CASE("too few complete days names the view") {
    const Dataset ds = load_small();
    try {
      partition_views(ds, 16);
      FAIL("expected InsufficientRowsError");
    } catch (const InsufficientRowsError& e) {
      CHECK(std::string(e.what()).find("'a'") != std::string::npos);
    }
  }

  TEST_CASE("clinical back-fill covers the window before each assessment") {
    const Dataset ds = load_small();
    const ClinicalTable pass = extract_clinical(ds);
    CHECK(pass.value(13, "S1") == std::nullopt);
    CHECK(pass.value(14, "S1") == 30.0);

    ClinicalFillOptions fill{ClinicalFillOptions::Mode::BackFill, 14, true};
    const ClinicalTable inclusive = extract_clinical(ds, fill);
    for (int d = 1; d <= 20; ++d) {
      const auto v = inclusive.value(static_cast<std::size_t>(d - 1), "S1");
      if (d >= 2 && d <= 15) {
        CHECK(v == 30.0);
      } else {
        CHECK(v == std::nullopt);
      }
    }
    CHECK(inclusive.value(0, "S2") == 7.0);
    CHECK(inclusive.value(4, "S2") == 7.0);
    CHECK(inclusive.value(5, "S2") == std::nullopt);

    fill.include_assessment_day = false;
    const ClinicalTable strict = extract_clinical(ds, fill);
    CHECK(strict.value(0, "S1") == 30.0);
    CHECK(strict.value(15, "S1") == std::nullopt);
  }

  TEST_CASE("default registry shape") {
    const ViewRegistry r = default_registry();
    REQUIRE(r.views.size() == 6);
    const std::vector<std::size_t> widths = {3, 5, 4, 11, 5, 7};
    std::size_t total = 0;
    for (std::size_t v = 0; v < 6; ++v) {
      CHECK(r.views[v].features.size() == widths[v]);
      total += widths[v];
    }
    CHECK(total == 35);
    CHECK(r.sensor_columns().size() == 35);
    CHECK(r.clinical_scores.size() == 5);
    const auto& pos = r.view("position");
    CHECK(pos.features[0].name == "position-count");
    CHECK(pos.features[1].name == "position-duration");
    CHECK(pos.features[2].name == "position-travelled-distance");
    CHECK_NOTHROW(r.validate());
  }

  TEST_CASE("shipped registry file matches the built-in registry") {
    const auto path = testing::data_dir().parent_path().parent_path() / "data" / "registry_maison.json";
    CHECK(load_registry(path) == default_registry());
  }

  TEST_CASE("registry validation rejects duplicates") {
    ViewRegistry r = small_registry();
    r.views[1].features[0].name = "f1";
    CHECK_THROWS_AS(r.validate(), SchemaError);
    r = small_registry();
    r.clinical_scores.push_back("g1");
    CHECK_THROWS_AS(r.validate(), SchemaError);
  }

  TEST_CASE("dataset CSV round trip") {
    const Dataset ds = load_small();
    std::ostringstream out;
    write_dataset_csv(ds, out);
    std::istringstream in(out.str());
    const Dataset back = load_dataset(in, small_registry());
    REQUIRE(back.records.size() == ds.records.size());
    for (std::size_t r = 0; r < ds.records.size(); ++r) {
      CHECK(back.records[r].id == ds.records[r].id);
      CHECK(back.records[r].sensor_values == ds.records[r].sensor_values);
      CHECK(back.records[r].clinical_values == ds.records[r].clinical_values);
    }
  }
}
