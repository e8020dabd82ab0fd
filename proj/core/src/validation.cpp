#include "mvlabel/validation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "mvlabel/errors.hpp"

namespace mvlabel {

std::size_t ClusterClinicalSummary::score_index(std::string_view score) const {
  const auto it = std::find(scores.begin(), scores.end(), score);
  if (it == scores.end())
    throw ContractError("score '" + std::string(score) + "' is not summarized for view '" +
                        view_name + "'");
  return static_cast<std::size_t>(it - scores.begin());
}

const ClinicalGroup& ClusterClinicalSummary::group(int cluster, std::string_view score) const {
  if (cluster < 0 || cluster >= k) throw ContractError("cluster index out of range");
  return groups[static_cast<std::size_t>(cluster)][score_index(score)];
}

std::vector<std::vector<double>> ClusterClinicalSummary::raw_groups(std::string_view score) const {
  const std::size_t s = score_index(score);
  std::vector<std::vector<double>> out;
  out.reserve(groups.size());
  for (const auto& cluster : groups) out.push_back(cluster[s].values);
  return out;
}

ClusterClinicalSummary summarize_clinical(const ClusterModel& model, const ClinicalTable& clinical,
                                          const std::vector<std::string>& scores) {
  if (model.record_index.size() != model.assignments.size())
    throw ContractError("model for view '" + model.view_name + "' carries no row identities");

  std::vector<std::size_t> columns;
  columns.reserve(scores.size());
  for (const auto& s : scores) columns.push_back(clinical.score_index(s));

  ClusterClinicalSummary out;
  out.view_name = model.view_name;
  out.k = model.k;
  out.scores = scores;
  out.groups.assign(static_cast<std::size_t>(model.k), std::vector<ClinicalGroup>(scores.size()));

  for (std::size_t row = 0; row < model.assignments.size(); ++row) {
    const std::size_t record = model.record_index[row];
    if (record >= clinical.values.size() ||
        (!model.row_ids.empty() && clinical.row_ids[record] != model.row_ids[row]))
      throw ContractError("view '" + model.view_name + "': row " + std::to_string(row) +
                          " does not join to the clinical table");
    auto& cluster = out.groups[static_cast<std::size_t>(model.assignments[row])];
    for (std::size_t s = 0; s < columns.size(); ++s)
      if (const auto& v = clinical.values[record][columns[s]]) cluster[s].values.push_back(*v);
  }

  for (auto& cluster : out.groups)
    for (auto& g : cluster)
      if (!g.values.empty())
        g.mean = std::accumulate(g.values.begin(), g.values.end(), 0.0) /
                 static_cast<double>(g.values.size());
  return out;
}

namespace {

SignificanceRow not_applicable(SignificanceRow row, std::string note) {
  row.test.reset();
  row.statistic = std::numeric_limits<double>::quiet_NaN();
  row.p_value = std::numeric_limits<double>::quiet_NaN();
  row.p_formatted = format_p(row.p_value);
  row.significant = false;
  row.note = std::move(note);
  return row;
}

std::vector<SignificanceRow> view_rows(const ClusterClinicalSummary& summary,
                                       const std::vector<std::string>& scores, double alpha) {
  std::vector<SignificanceRow> rows;
  for (const auto& score : scores) {
    const auto groups = summary.raw_groups(score);
    SignificanceRow row;
    row.view_name = summary.view_name;
    row.score = score;
    for (const auto& v : normality_verdicts(groups, alpha).groups) row.verdicts.push_back(v.verdict);

    if (std::any_of(groups.begin(), groups.end(), [](const auto& g) { return g.empty(); })) {
      rows.push_back(not_applicable(std::move(row), "a cluster has no " + score + " values"));
      continue;
    }
    try {
      const auto [verdicts, result] = dispatch_test(groups, alpha);
      row.test = result.test;
      row.statistic = result.statistic;
      row.p_value = result.p_value;
      row.p_formatted = result.p_formatted;
      row.significant = result.significant;
      rows.push_back(std::move(row));
    } catch (const DegenerateSampleError& e) {
      rows.push_back(not_applicable(std::move(row), e.what()));
    } catch (const InsufficientSamplesError& e) {
      rows.push_back(not_applicable(std::move(row), e.what()));
    } catch (const ContractError& e) {
      rows.push_back(not_applicable(std::move(row), e.what()));
    }
  }
  return rows;
}

}  // namespace

std::vector<SignificanceRow> build_significance_table(
    const std::vector<ClusterClinicalSummary>& summaries, const std::vector<std::string>& scores,
    double alpha) {
  std::vector<std::future<std::vector<SignificanceRow>>> pending;
  pending.reserve(summaries.size());
  for (const auto& summary : summaries)
    pending.push_back(std::async(std::launch::async, view_rows, std::cref(summary),
                                 std::cref(scores), alpha));
  std::vector<SignificanceRow> rows;
  for (auto& f : pending) {
    auto part = f.get();
    rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  return rows;
}

std::size_t verdict_columns(const std::vector<SignificanceRow>& rows) {
  std::size_t m = 5;
  for (const auto& r : rows) m = std::max(m, r.verdicts.size());
  return m;
}

}  // namespace mvlabel
