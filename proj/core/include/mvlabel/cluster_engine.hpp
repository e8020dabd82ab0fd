#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvlabel/data_ingest.hpp"
#include "mvlabel/matrix.hpp"

namespace mvlabel {

struct KMeansOptions {
  std::uint64_t seed = 0;
  int max_iter = 300;
  /// Iteration stops once the largest center displacement drops below this.
  double tol = 1e-4;
};

/// A fitted K-means partition of one view.
struct ClusterModel {
  std::string view_name;
  int k = 0;
  std::vector<int> assignments;
  Matrix centers_normalized;
  Matrix centers_original;  // filled in by the caller via denormalize_centers
  double inertia = 0.0;
  double silhouette = 0.0;
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = false;
  /// Inertia after each assignment step; non-increasing by construction.
  std::vector<double> inertia_history;
  std::vector<RowId> row_ids;
  std::vector<std::size_t> record_index;
};

/// Seeded k-means++ initialisation followed by Lloyd iterations on an
/// already-normalized matrix. Empty clusters are reseeded at the point
/// farthest from its own center. Ties in distance go to the lowest index.
ClusterModel kmeans_fit(const Matrix& normalized, int k, const KMeansOptions& options);

/// Same, carrying the view name and row identities of the matrix.
ClusterModel kmeans_fit(const FeatureMatrix& normalized, int k, const KMeansOptions& options);

/// Mean silhouette coefficient with Euclidean distance. Points in singleton
/// clusters contribute 0, as do points with a = b = 0.
double silhouette_score(const Matrix& values, std::span<const int> assignments);

struct KCandidate {
  int k = 0;
  double silhouette = 0.0;
  double inertia = 0.0;
  std::vector<std::size_t> sizes;
};

struct KSelectionTrace {
  int k_min = 0;
  int k_max = 0;
  std::vector<KCandidate> candidates;
  std::vector<std::string> warnings;
};

struct KRange {
  int lo = 2;
  int hi = 15;
};

/// Fits every K in range and keeps the one with the highest silhouette
/// (ties, within 1e-12, go to the smaller K). An upper bound above the row
/// count is clamped and noted in the trace warnings.
std::pair<ClusterModel, KSelectionTrace> select_k(const FeatureMatrix& normalized, KRange range,
                                                  const KMeansOptions& options);
std::pair<ClusterModel, KSelectionTrace> select_k(const Matrix& normalized, KRange range,
                                                  const KMeansOptions& options);

std::vector<std::size_t> cluster_sizes(const ClusterModel& model);

/// Hubert-Arabie adjusted Rand index between two labelings of the same points.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

}  // namespace mvlabel
