#pragma once

#include "atlas/common.hpp"
#include "atlas/config.hpp"
#include "atlas/textprep.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace testing {

namespace fs = std::filesystem;

inline fs::path data_dir() { return ATLAS_TEST_DATA_DIR; }
inline fs::path fixture_config_path() { return data_dir() / "fixture_config.json"; }

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_file(const fs::path& path, const std::string& text);
std::string read_file(const fs::path& path);

/// Tokenized corpus built directly from term ids; every term gets a
/// synthetic alphabetic name.
atlas::TokenizedCorpus make_tokenized(const std::vector<std::vector<std::int32_t>>& docs,
                                      std::size_t vocab_size);

/// The shipped normalizer (default stop words and lemmas).
atlas::TextNormalizer default_normalizer();

/// Fixture configuration with the output directory redirected.
atlas::PipelineConfig fixture_config(const fs::path& output_dir);

/// Runs `atlas` as a child process; returns its exit status.
int run_cli(const std::vector<std::string>& args, std::string* output = nullptr);

/// Random row-stochastic matrix (rows on the simplex).
atlas::RowMatrix random_stochastic(std::mt19937_64& rng, int rows, int cols);

}  // namespace testing
