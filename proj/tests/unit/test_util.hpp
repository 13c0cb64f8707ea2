#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "omicsprep/feature_matrix.hpp"
#include "omicsprep/rng.hpp"

namespace omicsprep::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("omicsprep_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline FeatureMatrix make_matrix(std::size_t n, std::size_t p, std::vector<double> values) {
  return FeatureMatrix(n, p, std::move(values), numbered_labels("s", n),
                       numbered_labels("f", p));
}

/// Random positive matrix for property tests: log-normal with a per-column
/// scale so columns differ in spread.
inline FeatureMatrix random_positive(std::size_t n, std::size_t p, std::uint64_t seed) {
  PhiloxEngine rng(seed, 99);
  std::vector<double> v(n * p);
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = std::exp(0.5 * static_cast<double>(k % p) + rng.normal());
  }
  return make_matrix(n, p, std::move(v));
}

}  // namespace omicsprep::testing
