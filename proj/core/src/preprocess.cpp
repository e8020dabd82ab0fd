#include "mvlabel/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "mvlabel/errors.hpp"

namespace mvlabel {

std::string to_string(NormalizationMode mode) {
  return mode == NormalizationMode::ZScore ? "zscore" : "minmax";
}

NormalizationMode parse_normalization_mode(std::string_view text) {
  if (text == "zscore") return NormalizationMode::ZScore;
  if (text == "minmax") return NormalizationMode::MinMax;
  throw ConfigError("unknown normalization mode '" + std::string(text) +
                    "' (expected zscore or minmax)");
}

NormalizationParams fit_normalizer(const FeatureMatrix& matrix, NormalizationMode mode) {
  const Matrix& x = matrix.values;
  if (x.rows() == 0) throw ContractError("cannot fit a normalizer on an empty matrix");

  NormalizationParams p;
  p.view_name = matrix.view_name;
  p.mode = mode;
  p.offset.resize(x.cols());
  p.scale.resize(x.cols());
  const auto n = static_cast<double>(x.rows());

  for (std::size_t c = 0; c < x.cols(); ++c) {
    if (mode == NormalizationMode::ZScore) {
      double mean = 0.0;
      for (std::size_t r = 0; r < x.rows(); ++r) mean += x(r, c);
      mean /= n;
      double ss = 0.0;
      for (std::size_t r = 0; r < x.rows(); ++r) {
        const double d = x(r, c) - mean;
        ss += d * d;
      }
      p.offset[c] = mean;
      p.scale[c] = std::sqrt(ss / n);
    } else {
      double lo = x(0, c);
      double hi = x(0, c);
      for (std::size_t r = 1; r < x.rows(); ++r) {
        lo = std::min(lo, x(r, c));
        hi = std::max(hi, x(r, c));
      }
      p.offset[c] = lo;
      p.scale[c] = hi - lo;
    }
  }
  return p;
}

Matrix normalize(const Matrix& values, const NormalizationParams& params) {
  if (values.cols() != params.scale.size() || params.offset.size() != params.scale.size())
    throw SchemaError("normalize: matrix has " + std::to_string(values.cols()) +
                      " columns, parameters have " + std::to_string(params.scale.size()));
  Matrix out(values.rows(), values.cols());
  for (std::size_t r = 0; r < values.rows(); ++r)
    for (std::size_t c = 0; c < values.cols(); ++c)
      out(r, c) = params.scale[c] > 0.0 ? (values(r, c) - params.offset[c]) / params.scale[c]
                                        : 0.0;
  return out;
}

FeatureMatrix normalize(const FeatureMatrix& matrix, const NormalizationParams& params) {
  FeatureMatrix out;
  out.view_name = matrix.view_name;
  out.row_ids = matrix.row_ids;
  out.record_index = matrix.record_index;
  out.values = normalize(matrix.values, params);
  return out;
}

Matrix denormalize_centers(const Matrix& centers, const NormalizationParams& params) {
  if (centers.cols() != params.scale.size() || params.offset.size() != params.scale.size())
    throw SchemaError("denormalize_centers: centers have " + std::to_string(centers.cols()) +
                      " columns, parameters have " + std::to_string(params.scale.size()));
  Matrix out(centers.rows(), centers.cols());
  for (std::size_t r = 0; r < centers.rows(); ++r)
    for (std::size_t c = 0; c < centers.cols(); ++c)
      out(r, c) = params.scale[c] > 0.0 ? centers(r, c) * params.scale[c] + params.offset[c]
                                        : params.offset[c];
  return out;
}

}  // namespace mvlabel
