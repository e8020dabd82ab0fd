#include <cmath>
#include <regex>

#include "doctest.h"
#include "mvlabel/errors.hpp"
#include "mvlabel/report.hpp"

using namespace mvlabel;

namespace {

ClinicalGroup with_mean(double mean, std::size_t n) {
  ClinicalGroup g;
  g.values.assign(n, mean);
  g.mean = mean;
  return g;
}

ClusterClinicalSummary position_summary() {
  ClusterClinicalSummary s;
  s.view_name = "position";
  s.k = 2;
  s.scores = {"SIS", "OHS", "OKS", "TUG"};
  s.groups = {{with_mean(23.16, 10), with_mean(27.67, 10), with_mean(31.65, 10), with_mean(21.98, 10)},
              {with_mean(28.0, 2), with_mean(36.0, 2), with_mean(46.0, 2), with_mean(9.0, 2)}};
  return s;
}

SignificanceRow row(std::string view, std::string score, std::vector<Normality> verdicts,
                    TestKind test, double p) {
  SignificanceRow r;
  r.view_name = std::move(view);
  r.score = std::move(score);
  r.verdicts = std::move(verdicts);
  r.test = test;
  r.statistic = 1.0;
  r.p_value = p;
  r.p_formatted = format_p(p);
  r.significant = p < 0.05;
  return r;
}

RunReport position_report() {
  RunReport rep;
  rep.run_id = "0123456789abcdef";
  rep.config_snapshot = "{\n  \"seed\": 1\n}\n";
  ViewReport v;
  v.model.view_name = "position";
  v.model.k = 2;
  v.model.assignments.assign(558, 0);
  v.model.assignments.push_back(1);
  v.model.assignments.push_back(1);
  v.model.centers_original = Matrix(2, 3);
  const double table1[2][3] = {{41.218925, 94.892652, 3.445000}, {16.5, 21.0, 3632.845}};
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 3; ++c) v.model.centers_original(r, c) = table1[r][c];
  v.features = default_registry().view("position").features;
  v.reference_k = 2;
  v.trace = {2, 15, {{2, 0.9, 10.0, {558, 2}}}, {}};
  v.labels.view_name = "position";
  v.labels.labels = {{0, "Low Mobility with Extended Outdoor Time", "Short trips."},
                     {1, "High Mobility with Long-Distance Travel", "Long trips."}};
  v.clinical = position_summary();
  rep.views.push_back(v);
  rep.significance = {
      row("position", "SIS", {Normality::NotNormal, Normality::Insufficient}, TestKind::MWUT, 0.00003),
      row("position", "TUG", {Normality::NotNormal, Normality::Insufficient}, TestKind::MWUT, 0.0499)};
  return rep;
}

double bar_height(const std::string& svg, const std::string& title_prefix) {
  const std::regex re("height=\"([0-9.]+)\"[^>]*><title>" + title_prefix);
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, re));
  return std::stod(m[1].str());
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("markdown carries the center table in original units") {
    const std::string md = render_markdown(position_report());
    CHECK(md.find("| 1 | 558 | 41.218925 | 94.892652 | 3.445000 |") != std::string::npos);
    CHECK(md.find("| 2 | 2 | 16.500000 | 21.000000 | 3632.845000 |") != std::string::npos);
    CHECK(md.find("Low Mobility with Extended Outdoor Time") != std::string::npos);
    CHECK(md.find("23.16 (n=10)") != std::string::npos);
    CHECK(md.find("| SIS | No | NaN | MWUT | < 0.0001 | Yes |") != std::string::npos);
    CHECK(md.find("| TUG | No | NaN | MWUT | 0.0499 | Yes |") != std::string::npos);
  }

  TEST_CASE("warnings section only when there are warnings") {
    RunReport rep = position_report();
    CHECK(render_markdown(rep).find("## Warnings") == std::string::npos);
    rep.warnings = {"view 'x': something"};
    const auto md = render_markdown(rep);
    CHECK(md.find("## Warnings") != std::string::npos);
    CHECK(md.find("- view 'x': something") != std::string::npos);
  }

  TEST_CASE("markdown rendering is deterministic") {
    CHECK(render_markdown(position_report()) == render_markdown(position_report()));
  }

  TEST_CASE("bar chart heights follow the means") {
    const std::string svg = render_bar_chart(position_summary(), {"Low & slow", "<fast>"});
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"400\"") != std::string::npos);
    const double h1 = bar_height(svg, "SIS, cluster 1");
    const double h2 = bar_height(svg, "SIS, cluster 2");
    CHECK(h1 / h2 == doctest::Approx(23.16 / 28.0).epsilon(1e-3));
    // Tallest bar (OKS cluster 2, 46.0) fills 1/1.1 of the plot height.
    CHECK(bar_height(svg, "OKS, cluster 2") == doctest::Approx(310.0 / 1.1).epsilon(1e-4));
    CHECK(svg.find("Low &amp; slow") != std::string::npos);
    CHECK(svg.find("&lt;fast&gt;") != std::string::npos);
    std::size_t titles = 0;
    for (auto pos = svg.find("<title>"); pos != std::string::npos; pos = svg.find("<title>", pos + 1))
      ++titles;
    CHECK(titles == 8);
  }

  TEST_CASE("one cluster and one score gives a single bar") {
    ClusterClinicalSummary s;
    s.view_name = "v";
    s.k = 1;
    s.scores = {"SIS"};
    s.groups = {{with_mean(5.0, 3)}};
    const auto svg = render_bar_chart(s);
    CHECK(svg.find("<title>") != std::string::npos);
    CHECK(svg.find("<title>", svg.find("<title>") + 1) == std::string::npos);
    CHECK(svg.find("Cluster 1") != std::string::npos);
  }

  TEST_CASE("a summary without values cannot be charted") {
    ClusterClinicalSummary s;
    s.view_name = "v";
    s.k = 2;
    s.scores = {"SIS"};
    s.groups = {{ClinicalGroup{}}, {ClinicalGroup{}}};
    CHECK_THROWS_AS(render_bar_chart(s), ContractError);
  }

  TEST_CASE("CSV layout, p formatting and round trip") {
    std::vector<SignificanceRow> rows;
    const char* views[] = {"position", "motion", "heart-rate", "sleep", "step", "acceleration"};
    for (const char* v : views)
      for (const char* s : {"SIS", "OHS", "OKS", "TUG"})
        rows.push_back(row(v, s, {Normality::Normal, Normality::NotNormal}, TestKind::MWUT, 0.00003));
    rows[4].verdicts = {Normality::Normal, Normality::Normal, Normality::Insufficient, Normality::NotNormal};
    rows[4].test = TestKind::KWT;
    rows[5].test.reset();
    rows[5].p_value = std::nan("");
    rows[5].p_formatted = "n/a";
    rows[5].significant = false;
    rows[6].p_value = 0.0360;
    rows[6].p_formatted = format_p(0.0360);
    rows[6].significant = true;

    const std::string csv = render_csv(rows);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 25);
    CHECK(csv.rfind("view,score,cluster1,cluster2,cluster3,cluster4,cluster5,test,p,p_formatted,significant\n", 0) == 0);
    CHECK(csv.find("position,SIS,Yes,No,-,-,-,MWUT,3e-05,< 0.0001,true\n") != std::string::npos);

    const auto back = parse_significance_csv(csv);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(back[i].view_name == rows[i].view_name);
      CHECK(back[i].score == rows[i].score);
      CHECK(back[i].verdicts == rows[i].verdicts);
      CHECK(back[i].test == rows[i].test);
      CHECK(back[i].p_formatted == rows[i].p_formatted);
      CHECK(back[i].significant == rows[i].significant);
      if (std::isnan(rows[i].p_value)) {
        CHECK(std::isnan(back[i].p_value));
      } else {
        CHECK(back[i].p_value == rows[i].p_value);
      }
    }
    CHECK(render_csv(back) == csv);
  }
}
