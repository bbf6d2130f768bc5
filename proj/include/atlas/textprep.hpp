#pragma once

#include "atlas/corpus.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace atlas {

/// NFC-normalizes and lowercases UTF-8 text.
std::string normalize_text(std::string_view text);

/// Uppercases the first code point: "virus" -> "Virus".
std::string capitalize(std::string_view term);

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);
std::unordered_map<std::string, std::string> load_lemma_table(
    const std::filesystem::path& path);

/// The per-document half of preprocessing. Pure, so safe to share between
/// threads and reusable for search queries.
class TextNormalizer {
 public:
  TextNormalizer(std::unordered_set<std::string> stopwords,
                 std::unordered_map<std::string, std::string> lemmas,
                 std::size_t min_token_len = 3);

  // lowercase -> split on non-letters -> length filter -> lemmatize ->
  // stop-word filter.
  std::vector<std::string> tokens(std::string_view text) const;

  std::size_t min_token_len() const { return min_token_len_; }

 private:
  std::unordered_set<std::string> stopwords_;
  std::unordered_map<std::string, std::string> lemmas_;
  std::size_t min_token_len_;
};

struct Vocabulary {
  std::vector<std::string> terms;
  std::vector<std::size_t> doc_frequency;

  std::size_t size() const { return terms.size(); }
  std::optional<std::int32_t> find(std::string_view term) const;

  // Rebuilds the term -> index map after `terms` changes.
  void reindex();

 private:
  std::unordered_map<std::string, std::int32_t> index_;
};

struct TokenizedCorpus {
  std::vector<std::vector<std::int32_t>> docs;
  Vocabulary vocabulary;
  // kept_doc_map[i] is the Corpus index of tokenized document i.
  std::vector<std::size_t> kept_doc_map;

  std::size_t total_tokens() const;
};

struct PreprocessOptions {
  std::size_t min_df = 3;
  double max_df_fraction = 0.9;
  std::size_t min_tokens = 5;
};

TokenizedCorpus preprocess(const Corpus& corpus, const TextNormalizer& normalizer,
                           const PreprocessOptions& options);

void to_json(nlohmann::json& j, const TokenizedCorpus& tc);
void from_json(const nlohmann::json& j, TokenizedCorpus& tc);

}  // namespace atlas
