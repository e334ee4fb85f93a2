#pragma once

#include "hftg/frac_ops.hpp"
#include "hftg/random.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace testing {

inline hftg::Field random_field(int n, std::uint64_t seed) {
  hftg::Rng rng(seed);
  hftg::Field f(n);
  rng.fill_normal({f.data(), static_cast<std::size_t>(n)});
  return f;
}

// Fresh empty directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(std::filesystem::temp_directory_path() / ("hftg_test_" + tag)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testing
