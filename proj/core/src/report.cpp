#include "mvlabel/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "mvlabel/errors.hpp"
#include "mvlabel/text.hpp"

namespace mvlabel {

namespace {

constexpr std::array<const char*, 10> kPalette = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                                  "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
                                                  "#9c755f", "#bab0ac"};

// Pipes and line breaks would break a Markdown table cell.
std::string md_cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n' || c == '\r') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

std::string table_row(const std::vector<std::string>& cells) {
  std::string out = "|";
  for (const auto& c : cells) out += " " + c + " |";
  return out + "\n";
}

std::string table_rule(std::size_t columns) {
  std::string out = "|";
  for (std::size_t i = 0; i < columns; ++i) out += " --- |";
  return out + "\n";
}

std::string cluster_name(const ClusterLabelSet& labels, int cluster) {
  for (const auto& l : labels.labels)
    if (l.cluster_index == cluster) return l.name;
  return "Cluster " + std::to_string(cluster + 1);
}

std::string verdict_cell(const SignificanceRow& row, std::size_t cluster) {
  return cluster < row.verdicts.size() ? verdict_text(row.verdicts[cluster]) : "-";
}

std::string sizes_text(const std::vector<std::size_t>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(sizes[i]);
  }
  return out;
}

void render_view(std::ostringstream& md, const ViewReport& v,
                 const std::vector<SignificanceRow>& significance) {
  const auto& m = v.model;
  md << "## View: " << m.view_name << "\n\n";
  md << "- Clusters (K): " << m.k << "\n";
  if (v.reference_k) md << "- Reference K: " << *v.reference_k << "\n";
  md << "- Silhouette: " << format_fixed(m.silhouette, 6) << "\n";
  md << "- Inertia: " << format_fixed(m.inertia, 6) << "\n";
  md << "- Iterations: " << m.iterations << (m.converged ? " (converged)" : " (not converged)")
     << "\n";
  md << "- Seed: " << m.seed << "\n\n";

  const auto sizes = cluster_sizes(m);
  md << "### Cluster centers\n\n";
  std::vector<std::string> header = {"Cluster", "Days"};
  for (const auto& f : v.features)
    header.push_back(md_cell(f.unit.empty() ? f.name : f.name + " (" + f.unit + ")"));
  md << table_row(header) << table_rule(header.size());
  for (int c = 0; c < m.k; ++c) {
    std::vector<std::string> cells = {std::to_string(c + 1),
                                      std::to_string(sizes[static_cast<std::size_t>(c)])};
    for (std::size_t f = 0; f < m.centers_original.cols(); ++f)
      cells.push_back(format_fixed(m.centers_original(static_cast<std::size_t>(c), f), 6));
    md << table_row(cells);
  }

  md << "\n### Labels\n\n";
  if (v.labels.generic) md << "Generic labels (no language-model labels available).\n\n";
  for (const auto& l : v.labels.labels) {
    md << "- **Cluster " << l.cluster_index + 1;
    if (!v.labels.generic) md << ": " << l.name;
    md << "**";
    if (!l.description.empty()) md << " - " << l.description;
    md << "\n";
  }

  md << "\n### K selection\n\n";
  md << "Searched K = " << v.trace.k_min << ".." << v.trace.k_max << ".\n\n";
  md << table_row({"K", "Silhouette", "Inertia", "Cluster sizes"}) << table_rule(4);
  for (const auto& c : v.trace.candidates)
    md << table_row({std::to_string(c.k), format_fixed(c.silhouette, 6),
                     format_fixed(c.inertia, 6), sizes_text(c.sizes)});

  const auto& cs = v.clinical;
  md << "\n### Clinical means\n\n";
  header = {"Cluster"};
  for (const auto& s : cs.scores) header.push_back(md_cell(s));
  md << table_row(header) << table_rule(header.size());
  for (int c = 0; c < cs.k; ++c) {
    std::vector<std::string> cells = {md_cell(cluster_name(v.labels, c))};
    for (const auto& g : cs.groups[static_cast<std::size_t>(c)])
      cells.push_back(g.mean ? format_fixed(*g.mean, 2) + " (n=" + std::to_string(g.n()) + ")"
                             : "- (n=0)");
    md << table_row(cells);
  }
  md << "\nChart: `charts/" << m.view_name << ".svg`\n";

  md << "\n### Significance\n\n";
  header = {"Score"};
  for (int c = 0; c < m.k; ++c) header.push_back("Cluster " + std::to_string(c + 1) + " normal");
  for (const char* h : {"Test", "p-value", "Significant"}) header.emplace_back(h);
  md << table_row(header) << table_rule(header.size());
  for (const auto& r : significance) {
    if (r.view_name != m.view_name) continue;
    std::vector<std::string> cells = {md_cell(r.score)};
    for (std::size_t c = 0; c < static_cast<std::size_t>(m.k); ++c)
      cells.push_back(verdict_cell(r, c));
    cells.push_back(r.test ? to_string(*r.test) : "n/a");
    cells.push_back(r.p_formatted);
    cells.push_back(r.applicable() ? (r.significant ? "Yes" : "No") : "n/a");
    md << table_row(cells);
  }
  md << "\n";
}

}  // namespace

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_markdown(const RunReport& report) {
  std::ostringstream md;
  md << "# Multiview cluster labeling report\n\n";
  md << "Run id: `" << report.run_id << "`\n\n";
  md << "## Configuration\n\n```json\n" << report.config_snapshot;
  if (!report.config_snapshot.empty() && report.config_snapshot.back() != '\n') md << "\n";
  md << "```\n\n";

  for (const auto& v : report.views) render_view(md, v, report.significance);

  md << "## Significance table\n\n";
  const std::size_t columns = verdict_columns(report.significance);
  std::vector<std::string> header = {"View", "Score"};
  for (std::size_t c = 0; c < columns; ++c) header.push_back("C" + std::to_string(c + 1));
  for (const char* h : {"Test", "p-value", "Significant"}) header.emplace_back(h);
  md << table_row(header) << table_rule(header.size());
  for (const auto& r : report.significance) {
    std::vector<std::string> cells = {md_cell(r.view_name), md_cell(r.score)};
    for (std::size_t c = 0; c < columns; ++c) cells.push_back(verdict_cell(r, c));
    cells.push_back(r.test ? to_string(*r.test) : "n/a");
    cells.push_back(r.p_formatted);
    cells.push_back(r.applicable() ? (r.significant ? "Yes" : "No") : "n/a");
    md << table_row(cells);
  }

  if (!report.warnings.empty()) {
    md << "\n## Warnings\n\n";
    for (const auto& w : report.warnings) md << "- " << w << "\n";
  }
  return md.str();
}

std::string render_bar_chart(const ClusterClinicalSummary& summary,
                             const std::vector<std::string>& legend) {
  double max_mean = 0.0;
  bool any = false;
  for (const auto& cluster : summary.groups)
    for (const auto& g : cluster)
      if (g.mean) {
        any = true;
        max_mean = std::max(max_mean, *g.mean);
      }
  if (!any || summary.k < 1 || summary.scores.empty())
    throw ContractError("view '" + summary.view_name + "': no clinical means to chart");

  constexpr double width = 800.0;
  constexpr double height = 400.0;
  constexpr double left = 60.0;
  constexpr double right = 170.0;
  constexpr double top = 40.0;
  constexpr double bottom = 50.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const double y_max = max_mean > 0.0 ? 1.1 * max_mean : 1.0;
  const auto y_of = [&](double v) { return top + plot_h - std::max(0.0, v) / y_max * plot_h; };
  const auto px = [](double v) { return format_fixed(v, 2); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"400\" "
         "viewBox=\"0 0 800 400\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"400\" fill=\"white\"/>\n"
      << "<text x=\"" << px(left + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-size=\"15\">Mean clinical scores by cluster: " << xml_escape(summary.view_name)
      << "</text>\n";

  for (int t = 0; t <= 5; ++t) {
    const double value = y_max * t / 5.0;
    const double y = y_of(value);
    svg << "<line x1=\"" << px(left) << "\" y1=\"" << px(y) << "\" x2=\"" << px(left + plot_w)
        << "\" y2=\"" << px(y) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << px(left - 6) << "\" y=\"" << px(y + 4) << "\" text-anchor=\"end\">"
        << format_fixed(value, 2) << "</text>\n";
  }
  svg << "<line x1=\"" << px(left) << "\" y1=\"" << px(top) << "\" x2=\"" << px(left)
      << "\" y2=\"" << px(top + plot_h) << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << px(left) << "\" y1=\"" << px(top + plot_h) << "\" x2=\""
      << px(left + plot_w) << "\" y2=\"" << px(top + plot_h) << "\" stroke=\"black\"/>\n";

  const double group_w = plot_w / static_cast<double>(summary.scores.size());
  const double bar_w = group_w * 0.8 / summary.k;
  for (std::size_t s = 0; s < summary.scores.size(); ++s) {
    const double group_x = left + group_w * static_cast<double>(s);
    for (int c = 0; c < summary.k; ++c) {
      const auto& g = summary.groups[static_cast<std::size_t>(c)][s];
      if (!g.mean) continue;
      const double x = group_x + group_w * 0.1 + bar_w * c;
      const double y = y_of(*g.mean);
      svg << "<rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"" << px(bar_w)
          << "\" height=\"" << px(top + plot_h - y) << "\" fill=\""
          << kPalette[static_cast<std::size_t>(c) % kPalette.size()] << "\"><title>"
          << xml_escape(summary.scores[s]) << ", cluster " << c + 1 << ": "
          << format_fixed(*g.mean, 2) << " (n=" << g.n() << ")</title></rect>\n";
    }
    svg << "<text x=\"" << px(group_x + group_w / 2) << "\" y=\"" << px(top + plot_h + 20)
        << "\" text-anchor=\"middle\">" << xml_escape(summary.scores[s]) << "</text>\n";
  }

  for (int c = 0; c < summary.k; ++c) {
    const auto i = static_cast<std::size_t>(c);
    const std::string name =
        i < legend.size() && !legend[i].empty() ? legend[i] : "Cluster " + std::to_string(c + 1);
    const double y = top + 10 + 20.0 * c;
    svg << "<rect x=\"" << px(width - right + 15) << "\" y=\"" << px(y - 10)
        << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[i % kPalette.size()] << "\"/>\n"
        << "<text x=\"" << px(width - right + 32) << "\" y=\"" << px(y) << "\">"
        << xml_escape(name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_csv(const std::vector<SignificanceRow>& rows) {
  const std::size_t columns = verdict_columns(rows);
  csv::Row header = {"view", "score"};
  for (std::size_t c = 0; c < columns; ++c) header.push_back("cluster" + std::to_string(c + 1));
  for (const char* h : {"test", "p", "p_formatted", "significant"}) header.emplace_back(h);
  std::string out = csv::join(header) + "\n";
  for (const auto& r : rows) {
    csv::Row line = {r.view_name, r.score};
    for (std::size_t c = 0; c < columns; ++c) line.push_back(verdict_cell(r, c));
    line.push_back(r.test ? to_string(*r.test) : "");
    line.push_back(std::isnan(r.p_value) ? "" : format_shortest(r.p_value));
    line.push_back(r.p_formatted);
    line.push_back(r.significant ? "true" : "false");
    out += csv::join(line) + "\n";
  }
  return out;
}

std::vector<SignificanceRow> parse_significance_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  const auto table = csv::read(in);
  if (table.empty()) throw SchemaError("significance CSV has no header");
  const auto& header = table.front();
  if (header.size() < 6 || header[0] != "view" || header[1] != "score")
    throw SchemaError("significance CSV header is not recognised");
  const std::size_t columns = header.size() - 6;

  std::vector<SignificanceRow> rows;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& line = table[i];
    if (line.size() != header.size())
      throw SchemaError("significance CSV line " + std::to_string(i + 1) + " has " +
                        std::to_string(line.size()) + " fields");
    SignificanceRow r;
    r.view_name = line[0];
    r.score = line[1];
    for (std::size_t c = 0; c < columns; ++c) {
      if (line[2 + c] == "-") break;
      r.verdicts.push_back(parse_verdict_text(line[2 + c]));
    }
    const auto& test = line[2 + columns];
    if (!test.empty()) r.test = parse_test_kind(test);
    r.statistic = std::numeric_limits<double>::quiet_NaN();
    const auto p = parse_cell(line[3 + columns]);
    r.p_value = p ? *p : std::numeric_limits<double>::quiet_NaN();
    r.p_formatted = line[4 + columns];
    r.significant = line[5 + columns] == "true";
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace mvlabel
