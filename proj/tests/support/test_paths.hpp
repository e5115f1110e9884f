#pragma once

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "typicality/embedstore.hpp"

namespace testing_support {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(TYPICALITY_FIXTURE_DIR) / name;
}

inline std::filesystem::path golden(const std::string& name) {
  return std::filesystem::path(TYPICALITY_GOLDEN_DIR) / name;
}

// Directory given at configure time or through the environment, if it
// exists; the environment wins.
inline std::optional<std::filesystem::path> optional_dir(const char* env, const char* configured) {
  std::string value;
  if (const char* e = std::getenv(env); e != nullptr && *e != '\0') value = e;
  else value = configured;
  if (value.empty() || !std::filesystem::is_directory(value)) return std::nullopt;
  return std::filesystem::path(value);
}

inline std::optional<std::filesystem::path> wordnet_dir() {
  return optional_dir("TYPICALITY_WORDNET_DIR", TYPICALITY_WORDNET_DIR);
}

inline std::optional<std::filesystem::path> data_dir() {
  return optional_dir("TYPICALITY_DATA_DIR", TYPICALITY_DATA_DIR);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("typicality-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Gaussian occurrence tensors for `words`, every word with the same
// occurrence count.
inline std::vector<typicality::embedstore::OccurrenceEmbeddings> random_occurrences(
    const std::vector<std::string>& words, std::size_t n_occ, std::size_t n_layers,
    std::size_t hidden, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  std::vector<typicality::embedstore::OccurrenceEmbeddings> out;
  for (const auto& w : words) {
    typicality::embedstore::OccurrenceEmbeddings occ;
    occ.word = w;
    occ.n_occurrences = n_occ;
    occ.n_layers = n_layers;
    occ.hidden = hidden;
    occ.values.resize(n_occ * n_layers * hidden);
    for (float& v : occ.values) v = normal(rng);
    out.push_back(std::move(occ));
  }
  return out;
}

}  // namespace testing_support
