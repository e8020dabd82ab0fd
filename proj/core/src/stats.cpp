#include "mvlabel/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "mvlabel/distributions.hpp"
#include "mvlabel/errors.hpp"
#include "mvlabel/text.hpp"

namespace mvlabel {

namespace {

template <std::size_t N>
double poly(const std::array<double, N>& c, double x) {
  double acc = 0.0;
  for (std::size_t i = N; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sum of squared deviations from the mean, two-pass.
double ss_of(std::span<const double> v, double mean) {
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss;
}

// Sum over tie groups of (t^3 - t).
double tie_term(std::vector<double> pooled) {
  std::sort(pooled.begin(), pooled.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
    const auto t = static_cast<double>(j - i);
    acc += t * t * t - t;
    i = j;
  }
  return acc;
}

TestResult finish(TestKind kind, double statistic, double p, double alpha) {
  TestResult r;
  r.test = kind;
  r.statistic = statistic;
  r.p_value = std::clamp(p, 0.0, 1.0);
  r.significant = r.p_value < alpha;
  r.p_formatted = format_p(r.p_value);
  return r;
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw NumericError(std::string(what) + ": non-finite value in sample");
}

}  // namespace

std::string to_string(TestKind kind) {
  switch (kind) {
    case TestKind::TTest: return "t-test";
    case TestKind::MWUT: return "MWUT";
    case TestKind::ANOVA: return "ANOVA";
    case TestKind::KWT: return "KWT";
  }
  return "?";
}

TestKind parse_test_kind(std::string_view text) {
  if (text == "t-test") return TestKind::TTest;
  if (text == "MWUT") return TestKind::MWUT;
  if (text == "ANOVA") return TestKind::ANOVA;
  if (text == "KWT") return TestKind::KWT;
  throw ParseError("unknown test name '" + std::string(text) + "'", std::string(text));
}

ShapiroWilkResult shapiro_wilk(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 3) throw InsufficientSamplesError("Shapiro-Wilk needs at least 3 values");
  if (n > 5000) throw ContractError("Shapiro-Wilk is only calibrated up to n = 5000");
  require_finite(sample, "shapiro_wilk");

  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 0.0)) throw DegenerateSampleError("Shapiro-Wilk: all values are identical");

  static constexpr std::array<double, 6> c1 = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  static constexpr std::array<double, 6> c2 = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static constexpr std::array<double, 4> c3 = {0.5440, -0.39978, 0.025054, -6.714e-4};
  static constexpr std::array<double, 4> c4 = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr std::array<double, 4> c5 = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr std::array<double, 3> c6 = {-0.4803, -0.082676, 0.0030302};
  static constexpr std::array<double, 2> g = {-2.273, 0.459};

  const std::size_t half = n / 2;
  const auto an = static_cast<double>(n);
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::numbers::sqrt2 / 2.0;
  } else {
    // Blom-type approximations to the expected normal order statistics.
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = dist::normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, rsn) - m[0] / ssumm2;

    std::size_t first_scaled = 1;
    double fac = 0.0;
    if (n > 5) {
      first_scaled = 2;
      const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  }

  // W as the squared correlation between the range-scaled data and the
  // antisymmetric coefficient vector; w1 = 1 - W avoids cancellation near 1.
  std::vector<double> coef(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    coef[i] = -a[i];
    coef[n - 1 - i] = a[i];
  }
  double sa = 0.0;
  double sx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += coef[i];
    sx += x[i] / range;
  }
  sa /= an;
  sx /= an;
  double ssa = 0.0;
  double ssx = 0.0;
  double sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double asa = coef[i] - sa;
    const double xsx = x[i] / range - sx;
    ssa += asa * asa;
    ssx += xsx * xsx;
    sax += asa * xsx;
  }
  const double ssassx = std::sqrt(ssa * ssx);
  const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
  const double w = 1.0 - w1;

  if (n == 3) {
    const double p = (6.0 / std::numbers::pi) * (std::asin(std::sqrt(w)) - std::numbers::pi / 3.0);
    return {w, std::max(0.0, p)};
  }

  double y = std::log(w1);
  const double lxx = std::log(an);
  double mu = 0.0;
  double sigma = 1.0;
  if (n <= 11) {
    const double gamma = poly(g, an);
    if (y >= gamma) return {w, 1e-19};
    y = -std::log(gamma - y);
    mu = poly(c3, an);
    sigma = std::exp(poly(c4, an));
  } else {
    mu = poly(c5, lxx);
    sigma = std::exp(poly(c6, lxx));
  }
  return {w, dist::normal_sf((y - mu) / sigma)};
}

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
    i = j;
  }
  return ranks;
}

TestResult welch_t_test(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() < 2 || b.size() < 2) throw ContractError("t-test needs at least 2 values per group");
  require_finite(a, "welch_t_test");
  require_finite(b, "welch_t_test");
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  const double va = ss_of(a, ma) / (na - 1.0);
  const double vb = ss_of(b, mb) / (nb - 1.0);
  const double qa = va / na;
  const double qb = vb / nb;
  const double se2 = qa + qb;

  if (se2 == 0.0) {
    if (ma == mb) throw DegenerateSampleError("t-test: both groups are constant and equal");
    TestResult r = finish(TestKind::TTest,
                          ma > mb ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity(),
                          0.0, alpha);
    r.degenerate = true;
    return r;
  }
  const double t = (ma - mb) / std::sqrt(se2);
  const double df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  return finish(TestKind::TTest, t, dist::student_t_two_sided(t, df), alpha);
}

double mann_whitney_exact_p(std::size_t n1, std::size_t n2, double u) {
  if (n1 == 0 || n2 == 0) throw ContractError("exact MWU needs non-empty groups");
  const std::size_t max_u = n1 * n2;
  // ways[j][s]: number of j-subsets of the ranks seen so far with U-contribution s,
  // where choosing rank r as the (j+1)-th smallest member adds r - (j+1).
  std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(max_u + 1, 0.0));
  ways[0][0] = 1.0;
  const std::size_t total = n1 + n2;
  for (std::size_t r = 1; r <= total; ++r) {
    for (std::size_t j = std::min(n1, r); j-- > 0;) {
      const std::size_t add = r - (j + 1);  // U increment when rank r becomes member j+1
      if (add > n2) continue;
      for (std::size_t s = 0; s + add <= max_u; ++s)
        if (ways[j][s] != 0.0) ways[j + 1][s + add] += ways[j][s];
    }
  }
  const auto& dist = ways[n1];
  const double all = std::accumulate(dist.begin(), dist.end(), 0.0);
  const auto target = static_cast<long long>(std::llround(u));
  double below = 0.0;
  double above = 0.0;
  for (std::size_t s = 0; s <= max_u; ++s) {
    if (static_cast<long long>(s) <= target) below += dist[s];
    if (static_cast<long long>(s) >= target) above += dist[s];
  }
  return std::min(1.0, 2.0 * std::min(below, above) / all);
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.empty() || b.empty()) throw ContractError("Mann-Whitney U needs non-empty groups");
  require_finite(a, "mann_whitney_u");
  require_finite(b, "mann_whitney_u");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  if (std::all_of(pooled.begin(), pooled.end(), [&](double v) { return v == pooled.front(); }))
    throw DegenerateSampleError("Mann-Whitney U: all pooled values are identical");

  const auto n1 = static_cast<double>(a.size());
  const auto n2 = static_cast<double>(b.size());
  const auto ranks = midranks(pooled);
  const double r1 = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);
  const double u1 = r1 - n1 * (n1 + 1.0) / 2.0;

  const double ties = tie_term(pooled);
  if (std::max(a.size(), b.size()) <= 8 && ties == 0.0)
    return finish(TestKind::MWUT, u1, mann_whitney_exact_p(a.size(), b.size(), u1), alpha);

  const double n = n1 + n2;
  const double mu = n1 * n2 / 2.0;
  const double sigma = std::sqrt(n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0))));
  const double u = std::max(u1, n1 * n2 - u1);
  const double z = (u - mu - 0.5) / sigma;
  return finish(TestKind::MWUT, u1, 2.0 * dist::normal_sf(z), alpha);
}

TestResult one_way_anova(std::span<const std::vector<double>> groups, double alpha) {
  if (groups.size() < 2) throw ContractError("ANOVA needs at least two groups");
  double n_total = 0.0;
  double grand = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw ContractError("ANOVA needs at least 2 values per group");
    require_finite(g, "one_way_anova");
    n_total += static_cast<double>(g.size());
    grand += std::accumulate(g.begin(), g.end(), 0.0);
  }
  grand /= n_total;
  double ssb = 0.0;
  double ssw = 0.0;
  for (const auto& g : groups) {
    const double m = mean_of(g);
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    ssw += ss_of(g, m);
  }
  if (!(ssw > 0.0)) throw DegenerateSampleError("ANOVA: zero within-group variance in every group");
  const double df1 = static_cast<double>(groups.size()) - 1.0;
  const double df2 = n_total - static_cast<double>(groups.size());
  const double f = (ssb / df1) / (ssw / df2);
  return finish(TestKind::ANOVA, f, dist::f_sf(f, df1, df2), alpha);
}

TestResult kruskal_wallis(std::span<const std::vector<double>> groups, double alpha) {
  if (groups.size() < 2) throw ContractError("Kruskal-Wallis needs at least two groups");
  std::vector<double> pooled;
  for (const auto& g : groups) {
    if (g.empty()) throw ContractError("Kruskal-Wallis: empty group");
    require_finite(g, "kruskal_wallis");
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  if (pooled.size() < 5) throw ContractError("Kruskal-Wallis needs at least 5 values in total");
  if (std::all_of(pooled.begin(), pooled.end(), [&](double v) { return v == pooled.front(); }))
    throw DegenerateSampleError("Kruskal-Wallis: all pooled values are identical");

  const auto ranks = midranks(pooled);
  const auto n = static_cast<double>(pooled.size());
  double acc = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) r += ranks[offset + i];
    acc += r * r / static_cast<double>(g.size());
    offset += g.size();
  }
  double h = 12.0 / (n * (n + 1.0)) * acc - 3.0 * (n + 1.0);
  h /= 1.0 - tie_term(pooled) / (n * n * n - n);
  return finish(TestKind::KWT, h, dist::chi2_sf(h, static_cast<double>(groups.size()) - 1.0), alpha);
}

std::string verdict_text(Normality n) {
  switch (n) {
    case Normality::Normal: return "Yes";
    case Normality::NotNormal: return "No";
    case Normality::Insufficient: return "NaN";
  }
  return "NaN";
}

Normality parse_verdict_text(std::string_view text) {
  if (text == "Yes") return Normality::Normal;
  if (text == "No") return Normality::NotNormal;
  if (text == "NaN") return Normality::Insufficient;
  throw ParseError("unknown normality verdict '" + std::string(text) + "'", std::string(text));
}

bool NormalityVerdict::all_normal() const {
  return std::all_of(groups.begin(), groups.end(),
                     [](const GroupNormality& g) { return g.verdict == Normality::Normal; });
}

NormalityVerdict normality_verdicts(std::span<const std::vector<double>> groups, double alpha) {
  NormalityVerdict out;
  for (const auto& g : groups) {
    GroupNormality v;
    if (g.size() < 3) {
      v.verdict = Normality::Insufficient;
    } else {
      try {
        const auto sw = shapiro_wilk(g);
        v.w = sw.w;
        v.p = sw.p;
        v.verdict = sw.p >= alpha ? Normality::Normal : Normality::NotNormal;
      } catch (const DegenerateSampleError&) {
        v.verdict = Normality::NotNormal;
      }
    }
    out.groups.push_back(v);
  }
  return out;
}

TestKind choose_test(const NormalityVerdict& verdicts) {
  const bool normal = verdicts.all_normal();
  if (verdicts.groups.size() == 2) return normal ? TestKind::TTest : TestKind::MWUT;
  return normal ? TestKind::ANOVA : TestKind::KWT;
}

std::pair<NormalityVerdict, TestResult> dispatch_test(std::span<const std::vector<double>> groups,
                                                      double alpha) {
  if (groups.size() < 2) throw ContractError("dispatch_test needs at least two groups");
  for (const auto& g : groups)
    if (g.empty()) throw ContractError("dispatch_test: a group is empty");

  NormalityVerdict verdicts = normality_verdicts(groups, alpha);
  switch (choose_test(verdicts)) {
    case TestKind::TTest: return {verdicts, welch_t_test(groups[0], groups[1], alpha)};
    case TestKind::MWUT: return {verdicts, mann_whitney_u(groups[0], groups[1], alpha)};
    case TestKind::ANOVA: return {verdicts, one_way_anova(groups, alpha)};
    case TestKind::KWT: break;
  }
  return {verdicts, kruskal_wallis(groups, alpha)};
}

std::string format_p(double p) {
  if (std::isnan(p)) return "n/a";
  if (p < 1e-4) return "< 0.0001";
  return format_fixed(p, 4);
}

}  // namespace mvlabel
