#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>
#include <unistd.h>

#include "mvlabel/matrix.hpp"
#include "mvlabel/random.hpp"

namespace testing {

inline std::filesystem::path data_dir() { return MVLABEL_TEST_DATA_DIR; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("mvlabel-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline mvlabel::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  mvlabel::SplitMix64 rng(seed);
  mvlabel::Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.normal();
  return m;
}

/// Unit-variance Gaussian blobs whose centers sit on the corners of a hypercube
/// with edge `separation` (blob c uses the binary digits of c). Needs
/// 2^dims >= k. Returns the points and their true labels.
inline std::pair<mvlabel::Matrix, std::vector<int>> blobs(int k, std::size_t per_blob,
                                                          std::size_t dims, double separation,
                                                          std::uint64_t seed) {
  mvlabel::SplitMix64 rng(seed);
  mvlabel::Matrix m;
  std::vector<int> labels;
  std::vector<double> row(dims);
  for (int c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      for (std::size_t d = 0; d < dims; ++d)
        row[d] = rng.normal() + (((c >> d) & 1) ? separation : 0.0);
      m.append_row(row);
      labels.push_back(c);
    }
  }
  return {m, labels};
}

}  // namespace testing
