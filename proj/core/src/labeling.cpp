#include "mvlabel/labeling.hpp"

#include <cstdint>
#include <cstdio>
#include <map>
#include <regex>
#include <sstream>

#include "mvlabel/errors.hpp"
#include "mvlabel/text.hpp"

namespace mvlabel {

std::string build_prompt(const PromptContext& ctx) {
  const std::size_t k = ctx.centers_original.rows();
  const std::size_t d = ctx.features.size();
  if (k < 2) throw ContractError("prompt needs at least two clusters");
  if (ctx.centers_original.cols() != d)
    throw ContractError("prompt: center width does not match the feature count");

  std::ostringstream out;
  out << "I have clustered data into " << number_words(k) << " clusters. Each cluster has "
      << number_words(d) << (d == 1 ? " feature" : " features") << ", namely,\n";
  for (const auto& f : ctx.features) out << "- " << f.name << " - " << f.description << "\n";
  out << "\nThe " << number_words(k) << " cluster centers are as follows:\n";
  for (std::size_t c = 0; c < k; ++c) {
    out << "- Cluster " << c + 1 << ":";
    for (std::size_t j = 0; j < d; ++j) out << ' ' << format_fixed(ctx.centers_original(c, j), 6);
    out << "\n";
  }
  std::string tail;
  for (const auto* part : {&ctx.sensor_context, &ctx.cohort_context}) {
    if (part->empty()) continue;
    tail += *part;
    tail += ' ';
  }
  out << tail << kClosingInstruction << "\n";
  return out.str();
}

std::string format_reminder(int k) {
  return "\nAnswer with exactly " + std::to_string(k) +
         " lines, one per cluster, each formatted as \"Cluster <number>: <short name> - "
         "<one-sentence interpretation>\".\n";
}

std::string prompt_hash(std::string_view prompt) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : prompt) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string strip_markup(std::string line) {
  static const std::regex latex_emph(R"(\\(?:textit|textbf|emph)\{([^}]*)\})");
  line = std::regex_replace(line, latex_emph, "$1");
  std::string out;
  out.reserve(line.size());
  for (char ch : line)
    if (ch != '*' && ch != '`') out.push_back(ch);
  // leading list markers: "-", "+", "•", "1.", "1)", "\item"
  static const std::regex marker(R"(^\s*(?:\\item\s*|[-+]\s+|\xE2\x80\xA2\s*|\d+[.)]\s+)?)");
  out = std::regex_replace(out, marker, "", std::regex_constants::format_first_only);
  // underscore emphasis around whole words: _Name_
  static const std::regex underscore(R"((^|\s)_([^_]+)_(?=\s|$|:))");
  out = std::regex_replace(out, underscore, "$1$2");
  return trim(out);
}

}  // namespace

ClusterLabelSet parse_labels(std::string_view raw, int k) {
  if (k < 2) throw ContractError("parse_labels: k must be at least 2");
  // "Cluster 3: Name – description", separator may be "-", en dash or em dash
  static const std::regex line_re(
      R"(^(?:#+\s*)?Cluster\s+(\d+)\s*[:.]\s*(.+?)(?:\s+-\s+|\s*\xE2\x80\x93\s*|\s*\xE2\x80\x94\s*|:\s+)(.+)$)",
      std::regex::icase);

  std::map<int, ClusterLabel> found;
  std::istringstream in{std::string(raw)};
  std::string line;
  int matched = 0;
  while (std::getline(in, line)) {
    const std::string clean = strip_markup(line);
    std::smatch m;
    if (!std::regex_match(clean, m, line_re)) continue;
    ++matched;
    const int index = std::stoi(m[1].str());
    ClusterLabel label{index - 1, trim(m[2].str()), trim(m[3].str())};
    if (label.name.empty()) continue;
    if (!found.emplace(index, std::move(label)).second)
      throw ParseError("cluster " + std::to_string(index) + " is labeled more than once",
                       std::string(raw));
  }
  if (matched != k || static_cast<int>(found.size()) != k)
    throw ParseError("expected " + std::to_string(k) + " cluster labels, parsed " +
                         std::to_string(matched),
                     std::string(raw));
  ClusterLabelSet set;
  set.raw_response = std::string(raw);
  for (int i = 1; i <= k; ++i) {
    auto it = found.find(i);
    if (it == found.end())
      throw ParseError("no label for cluster " + std::to_string(i), std::string(raw));
    set.labels.push_back(it->second);
  }
  return set;
}

ClusterLabelSet generic_labels(std::string view_name, int k) {
  ClusterLabelSet set;
  set.view_name = std::move(view_name);
  set.generic = true;
  for (int i = 0; i < k; ++i)
    set.labels.push_back({i, "Cluster " + std::to_string(i + 1), ""});
  return set;
}

}  // namespace mvlabel
