#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mvlabel {

inline constexpr double kDefaultAlpha = 0.05;

struct ShapiroWilkResult {
  double w = 0.0;
  double p = 0.0;
};

/// Royston's AS R94 Shapiro-Wilk test for 3 <= n <= 5000.
/// Throws InsufficientSamplesError for n < 3 and DegenerateSampleError when
/// every value is identical.
ShapiroWilkResult shapiro_wilk(std::span<const double> sample);

enum class TestKind { TTest, MWUT, ANOVA, KWT };

std::string to_string(TestKind kind);
TestKind parse_test_kind(std::string_view text);

struct TestResult {
  TestKind test = TestKind::MWUT;
  double statistic = 0.0;
  double p_value = 1.0;
  bool significant = false;  // p_value < alpha
  std::string p_formatted;
  /// Set when the statistic is infinite because both groups are constant but differ.
  bool degenerate = false;
};

/// Welch's unequal-variance t-test, two-sided.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b,
                        double alpha = kDefaultAlpha);

/// Two-sided Mann-Whitney U. The statistic is U for `a`. Exact when both
/// groups have at most 8 values and there are no ties; otherwise the normal
/// approximation with tie-corrected variance and 0.5 continuity correction.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          double alpha = kDefaultAlpha);

/// Exact two-sided p for U = `u` given group sizes, from the null distribution
/// of U under no ties.
double mann_whitney_exact_p(std::size_t n1, std::size_t n2, double u);

TestResult one_way_anova(std::span<const std::vector<double>> groups,
                         double alpha = kDefaultAlpha);

TestResult kruskal_wallis(std::span<const std::vector<double>> groups,
                          double alpha = kDefaultAlpha);

/// Midranks (1-based, ties share the average rank) of the values in order.
std::vector<double> midranks(std::span<const double> values);

enum class Normality { Normal, NotNormal, Insufficient };

/// Table-style verdict text: "Yes", "No" or "NaN".
std::string verdict_text(Normality n);
Normality parse_verdict_text(std::string_view text);

struct GroupNormality {
  Normality verdict = Normality::Insufficient;
  std::optional<double> w;
  std::optional<double> p;
};

struct NormalityVerdict {
  std::vector<GroupNormality> groups;
  [[nodiscard]] bool all_normal() const;
};

/// Shapiro-Wilk gate per group: n < 3 is Insufficient, a constant group is
/// NotNormal, otherwise Normal iff p >= alpha.
NormalityVerdict normality_verdicts(std::span<const std::vector<double>> groups,
                                    double alpha = kDefaultAlpha);

/// The test the dispatcher picks for these verdicts.
TestKind choose_test(const NormalityVerdict& verdicts);

/// Two groups: t-test if both Normal else Mann-Whitney U. Three or more:
/// ANOVA if all Normal else Kruskal-Wallis. Throws ContractError for an empty
/// group or fewer than two groups.
std::pair<NormalityVerdict, TestResult> dispatch_test(std::span<const std::vector<double>> groups,
                                                      double alpha = kDefaultAlpha);

/// "< 0.0001" below 1e-4, otherwise four decimals.
std::string format_p(double p);

}  // namespace mvlabel
