#pragma once

#include "atlas/corpus.hpp"
#include "atlas/layout.hpp"
#include "atlas/lda.hpp"
#include "atlas/textprep.hpp"
#include "atlas/trends.hpp"

#include "json.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

namespace atlas {

struct InputConfig {
  std::filesystem::path path;
  std::string source_label;
  IngestOptions options;
};

struct TextprepConfig {
  std::filesystem::path stopwords;
  std::filesystem::path lemmas;
  std::size_t min_token_len = 3;
  PreprocessOptions options;
};

struct TrendConfig {
  std::optional<Binning> binning;  // nullopt: pick from the corpus date span
  TrendOptions options;
};

struct PipelineConfig {
  InputConfig input;
  TextprepConfig textprep;
  Hyperparams main_model = Hyperparams::defaults_for(30);
  Hyperparams sub_model = Hyperparams::defaults_for(200);
  int label_terms = 3;
  int n_clusters_main = 8;
  std::optional<int> n_clusters_sub;  // nullopt: min(4, ceil(sqrt(group size)))
  TrendConfig trends;
  LayoutOptions layout;
  bool emit_svg = false;
  std::filesystem::path output_dir;
};

/// Reads a JSON configuration file. Relative paths inside it resolve
/// against the file's directory. Unknown keys and invalid values are
/// collected and reported together as one atlas::ConfigError.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(const nlohmann::json& j,
                            const std::filesystem::path& base_dir);

/// Canonical form with every default filled in; used for hashing.
nlohmann::json to_json(const PipelineConfig& config);

int default_sub_clusters(std::size_t group_size);

}  // namespace atlas
