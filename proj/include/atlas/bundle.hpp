#pragma once

#include "atlas/corpus.hpp"
#include "atlas/hierarchy.hpp"
#include "atlas/layout.hpp"
#include "atlas/textprep.hpp"
#include "atlas/trends.hpp"

#include "json.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace atlas {

inline constexpr std::string_view kSchemaVersion = "1.0";
inline constexpr int kWordCloudSize = 30;
inline constexpr int kTopDocsSize = 20;
inline constexpr int kSearchTermsPerTopic = 50;

struct WordWeight {
  std::string term;
  double weight = 0.0;
};

struct TopDocument {
  std::string id;
  std::string title;
  std::optional<Date> date;
  double weight = 0.0;
};

struct TopicRecord {
  TopicRef topic;
  std::string label;
  std::vector<std::string> terms;
  double weight = 0.0;              // S_k
  std::optional<int> parent;        // sub-topics: assigned main topic
  std::vector<int> children;        // main topics: assigned sub-topics
  std::vector<WordWeight> word_cloud;
  TrendSeries trend;
  std::vector<TopDocument> top_docs;
};

struct IndexEntry {
  TopicRef topic;
  double weight = 0.0;  // phi[k][term]
};

struct CorpusMeta {
  std::string source_label;
  std::size_t document_count = 0;
  std::size_t modelled_document_count = 0;
  std::optional<Date> first_date;
  std::optional<Date> last_date;
};

struct AtlasBundle {
  std::string schema_version{kSchemaVersion};
  CorpusMeta corpus_meta;
  BubbleMap main_map;
  std::map<int, BubbleMap> sub_maps;  // keyed by main topic
  std::vector<TopicRecord> main_topics;
  std::vector<TopicRecord> sub_topics;
  std::map<std::string, std::vector<IndexEntry>> search_index;

  const TopicRecord& record(TopicRef topic) const;
};

struct BundleInputs {
  const TopicHierarchy& hierarchy;
  const BubbleMap& main_map;
  const std::map<int, BubbleMap>& sub_maps;
  const std::vector<TrendSeries>& main_trends;
  const std::vector<TrendSeries>& sub_trends;
  const Corpus& corpus;
  std::span<const std::size_t> kept_doc_map;
};

/// Assembles the atlas. Throws atlas::Error when a map references a topic
/// without a record or a top document is missing from the corpus.
AtlasBundle build_bundle(const BundleInputs& inputs);

/// Deterministic JSON text: sorted keys, floats at 6 significant digits.
std::string serialize(const AtlasBundle& bundle);
AtlasBundle parse_bundle(std::string_view text);

struct SearchHit {
  TopicRef topic;
  double score = 0.0;

  bool operator==(const SearchHit&) const = default;
};

/// Topics scored by the summed index weight of the distinct query lemmas,
/// highest first (ties: main before sub, then topic id). Zero scores are
/// omitted.
std::vector<SearchHit> search(const AtlasBundle& bundle, std::string_view query,
                              const TextNormalizer& normalizer);

void to_json(nlohmann::json& j, const AtlasBundle& bundle);
void from_json(const nlohmann::json& j, AtlasBundle& bundle);

/// Rounds to 6 significant digits.
double round_sig6(double value);

}  // namespace atlas
