#include "mvlabel/cluster_engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <optional>

#include "mvlabel/errors.hpp"
#include "mvlabel/random.hpp"

namespace mvlabel {

namespace {

struct Assignment {
  std::vector<int> labels;
  std::vector<double> dist2;  // squared distance of each point to its center
  double inertia = 0.0;
};

Assignment assign_nearest(const Matrix& x, const Matrix& centers) {
  Assignment a;
  a.labels.resize(x.rows());
  a.dist2.resize(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_j = 0;
    for (std::size_t j = 0; j < centers.rows(); ++j) {
      const double d = squared_distance(x.row(i), centers.row(j));
      if (d < best) {
        best = d;
        best_j = static_cast<int>(j);
      }
    }
    a.labels[i] = best_j;
    a.dist2[i] = best;
  }
  return a;
}

// Gives every empty cluster the point farthest from its current center,
// taken only from clusters that can spare a member.
void repair_empty(const Matrix& x, Matrix& centers, Assignment& a) {
  const std::size_t k = centers.rows();
  std::vector<std::size_t> counts(k, 0);
  for (int l : a.labels) ++counts[static_cast<std::size_t>(l)];

  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] > 0) continue;
    std::size_t far = x.rows();
    double far_d = -1.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      if (counts[static_cast<std::size_t>(a.labels[i])] < 2) continue;
      if (a.dist2[i] > far_d) {
        far_d = a.dist2[i];
        far = i;
      }
    }
    if (far == x.rows()) throw NumericError("cannot repair an empty cluster");
    --counts[static_cast<std::size_t>(a.labels[far])];
    ++counts[j];
    a.labels[far] = static_cast<int>(j);
    a.dist2[far] = 0.0;
    std::copy(x.row(far).begin(), x.row(far).end(), centers.row(j).begin());
  }
  a.inertia = 0.0;
  for (double d : a.dist2) a.inertia += d;
}

Matrix cluster_means(const Matrix& x, std::span<const int> labels, std::size_t k) {
  Matrix means(k, x.cols(), 0.0);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto l = static_cast<std::size_t>(labels[i]);
    ++counts[l];
    auto dst = means.row(l);
    auto src = x.row(i);
    for (std::size_t c = 0; c < x.cols(); ++c) dst[c] += src[c];
  }
  for (std::size_t j = 0; j < k; ++j) {
    auto dst = means.row(j);
    for (auto& v : dst) v /= static_cast<double>(counts[j]);
  }
  return means;
}

Matrix kmeans_plus_plus(const Matrix& x, std::size_t k, SplitMix64& rng) {
  const std::size_t n = x.rows();
  Matrix centers(k, x.cols());
  std::size_t first = rng.below(n);
  std::copy(x.row(first).begin(), x.row(first).end(), centers.row(0).begin());

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(x.row(i), centers.row(0));

  for (std::size_t j = 1; j < k; ++j) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
      // rounding can exhaust the loop; fall back to the last positive-weight point
      if (acc <= target)
        for (std::size_t i = n; i-- > 0;)
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
    } else {
      pick = rng.below(n);
    }
    std::copy(x.row(pick).begin(), x.row(pick).end(), centers.row(j).begin());
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], squared_distance(x.row(i), centers.row(j)));
  }
  return centers;
}

double max_displacement(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.rows(); ++j)
    worst = std::max(worst, std::sqrt(squared_distance(a.row(j), b.row(j))));
  return worst;
}

std::vector<std::size_t> sizes_of(std::span<const int> labels, int k) {
  std::vector<std::size_t> out(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++out[static_cast<std::size_t>(l)];
  return out;
}

}  // namespace

ClusterModel kmeans_fit(const Matrix& x, int k, const KMeansOptions& options) {
  if (k < 2) throw ContractError("k must be at least 2, got " + std::to_string(k));
  if (static_cast<std::size_t>(k) > x.rows())
    throw InsufficientRowsError("k = " + std::to_string(k) + " exceeds the " +
                                std::to_string(x.rows()) + " available rows");
  if (options.max_iter < 1) throw ContractError("max_iter must be at least 1");
  if (!(options.tol >= 0.0)) throw ContractError("tol must be non-negative");
  for (double v : x.data())
    if (!std::isfinite(v)) throw NumericError("non-finite value in clustering input");

  const auto kk = static_cast<std::size_t>(k);
  SplitMix64 rng(options.seed);

  ClusterModel model;
  model.k = k;
  model.seed = options.seed;

  Matrix centers = kmeans_plus_plus(x, kk, rng);
  Assignment current = assign_nearest(x, centers);
  repair_empty(x, centers, current);
  model.inertia_history.push_back(current.inertia);

  bool labels_stale = true;  // centers are not yet the means of `current`
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    Matrix updated = cluster_means(x, current.labels, kk);
    const double shift = max_displacement(centers, updated);
    centers = std::move(updated);
    labels_stale = false;
    model.iterations = iter;

    Assignment next = assign_nearest(x, centers);
    repair_empty(x, centers, next);
    model.inertia_history.push_back(next.inertia);

    const bool unchanged = next.labels == current.labels;
    current = std::move(next);
    if (unchanged) {
      model.converged = true;
      break;
    }
    labels_stale = true;
    if (shift < options.tol) {
      model.converged = true;
      break;
    }
  }
  if (labels_stale) centers = cluster_means(x, current.labels, kk);

  model.assignments = std::move(current.labels);
  model.centers_normalized = std::move(centers);
  model.inertia = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    model.inertia += squared_distance(
        x.row(i), model.centers_normalized.row(static_cast<std::size_t>(model.assignments[i])));
  model.silhouette =
      x.rows() > kk ? silhouette_score(x, model.assignments) : 0.0;
  return model;
}

ClusterModel kmeans_fit(const FeatureMatrix& normalized, int k, const KMeansOptions& options) {
  ClusterModel m = kmeans_fit(normalized.values, k, options);
  m.view_name = normalized.view_name;
  m.row_ids = normalized.row_ids;
  m.record_index = normalized.record_index;
  return m;
}

double silhouette_score(const Matrix& x, std::span<const int> labels) {
  const std::size_t n = x.rows();
  if (labels.size() != n) throw ContractError("silhouette: label count does not match rows");
  if (n < 3) throw ContractError("silhouette needs at least 3 points");
  int k = 0;
  for (int l : labels) {
    if (l < 0) throw ContractError("silhouette: negative cluster label");
    k = std::max(k, l + 1);
  }
  const auto sizes = sizes_of(labels, k);
  if (k < 2) throw ContractError("silhouette needs at least two clusters");
  for (auto s : sizes)
    if (s == 0) throw ContractError("silhouette: cluster labels must be contiguous and non-empty");

  const auto kk = static_cast<std::size_t>(k);
  double total = 0.0;
  std::vector<double> sums(kk);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      sums[static_cast<std::size_t>(labels[j])] += std::sqrt(squared_distance(x.row(i), x.row(j)));
    }
    const auto own = static_cast<std::size_t>(labels[i]);
    if (sizes[own] < 2) continue;
    const double a = sums[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < kk; ++c)
      if (c != own) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

std::pair<ClusterModel, KSelectionTrace> select_k(const Matrix& x, KRange range,
                                                  const KMeansOptions& options) {
  if (range.lo < 2) throw ContractError("K range must start at 2 or above");
  if (range.hi < range.lo) throw ContractError("K range upper bound is below the lower bound");

  KSelectionTrace trace;
  trace.k_min = range.lo;
  trace.k_max = range.hi;
  const int rows = static_cast<int>(x.rows());
  if (trace.k_max > rows) {
    trace.warnings.push_back("K range upper bound " + std::to_string(range.hi) +
                             " clamped to the row count " + std::to_string(rows));
    trace.k_max = rows;
  }
  if (trace.k_max < trace.k_min)
    throw InsufficientRowsError("only " + std::to_string(rows) + " rows; cannot fit K >= " +
                                std::to_string(range.lo));

  // Each K is an independent pure fit, so they can run side by side.
  std::vector<std::future<ClusterModel>> fits;
  for (int k = trace.k_min; k <= trace.k_max; ++k)
    fits.push_back(std::async(std::launch::async, [&x, k, &options] {
      return kmeans_fit(x, k, options);
    }));

  std::optional<ClusterModel> best;
  for (int k = trace.k_min; k <= trace.k_max; ++k) {
    ClusterModel m;
    try {
      m = fits[static_cast<std::size_t>(k - trace.k_min)].get();
    } catch (const Error& e) {
      trace.warnings.push_back("K = " + std::to_string(k) + " skipped: " + e.what());
      continue;
    }
    trace.candidates.push_back({k, m.silhouette, m.inertia, sizes_of(m.assignments, k)});
    if (!best || m.silhouette > best->silhouette + 1e-12) best = std::move(m);
  }
  if (!best) throw NumericError("no K in range produced a valid clustering");
  return {std::move(*best), std::move(trace)};
}

std::pair<ClusterModel, KSelectionTrace> select_k(const FeatureMatrix& normalized, KRange range,
                                                  const KMeansOptions& options) {
  auto result = select_k(normalized.values, range, options);
  result.first.view_name = normalized.view_name;
  result.first.row_ids = normalized.row_ids;
  result.first.record_index = normalized.record_index;
  return result;
}

std::vector<std::size_t> cluster_sizes(const ClusterModel& model) {
  return sizes_of(model.assignments, model.k);
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw ContractError("ARI: labelings differ in length");
  const std::size_t n = a.size();
  if (n < 2) return 1.0;
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ra;
  std::map<int, double> rb;
  for (std::size_t i = 0; i < n; ++i) {
    joint[{a[i], b[i]}] += 1.0;
    ra[a[i]] += 1.0;
    rb[b[i]] += 1.0;
  }
  auto pairs = [](double m) { return m * (m - 1.0) / 2.0; };
  double index = 0.0;
  for (const auto& [key, m] : joint) index += pairs(m);
  double sum_a = 0.0;
  for (const auto& [key, m] : ra) sum_a += pairs(m);
  double sum_b = 0.0;
  for (const auto& [key, m] : rb) sum_b += pairs(m);
  const double expected = sum_a * sum_b / pairs(static_cast<double>(n));
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;  // both labelings trivial and identical in shape
  return (index - expected) / (max_index - expected);
}

}  // namespace mvlabel
