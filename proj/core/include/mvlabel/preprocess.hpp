#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mvlabel/data_ingest.hpp"
#include "mvlabel/matrix.hpp"

namespace mvlabel {

enum class NormalizationMode { ZScore, MinMax };

std::string to_string(NormalizationMode mode);
NormalizationMode parse_normalization_mode(std::string_view text);

/// Per-feature affine transform x -> (x - offset) / scale.
/// For z-score, offset is the column mean and scale the population standard
/// deviation; for min-max, offset is the minimum and scale the range.
/// A zero scale is kept as-is and handled by normalize().
struct NormalizationParams {
  std::string view_name;
  NormalizationMode mode = NormalizationMode::ZScore;
  std::vector<double> offset;
  std::vector<double> scale;

  friend bool operator==(const NormalizationParams&, const NormalizationParams&) = default;
};

NormalizationParams fit_normalizer(const FeatureMatrix& matrix,
                                   NormalizationMode mode = NormalizationMode::ZScore);

/// Zero-scale columns map to all zeros. Throws SchemaError on a column mismatch.
FeatureMatrix normalize(const FeatureMatrix& matrix, const NormalizationParams& params);
Matrix normalize(const Matrix& values, const NormalizationParams& params);

/// Inverse of normalize(); zero-scale columns come back as the offset.
Matrix denormalize_centers(const Matrix& centers, const NormalizationParams& params);

}  // namespace mvlabel
