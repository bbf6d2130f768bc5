#pragma once

#include "atlas/lda.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace atlas {

struct TopicHierarchy {
  TopicModel main;
  TopicModel sub;
  std::vector<int> assignment;  // sub-topic -> main topic
  std::vector<std::vector<std::string>> main_labels;
  std::vector<std::vector<std::string>> sub_labels;

  /// Sub-topics assigned to main topic `m`, ascending.
  std::vector<int> children_of(int m) const;
};

/// For every column of `sub_vectors`, the index of the column of
/// `main_vectors` at least cosine distance. Distances within 1e-12 of the
/// minimum count as ties, which go to the smaller index.
/// Both matrices are documents x topics.
std::vector<int> assign_by_document_vectors(const RowMatrix& main_vectors,
                                            const RowMatrix& sub_vectors);

/// Throws atlas::Error when the models were not trained on the same documents.
std::vector<int> assign_subtopics(const TopicModel& main, const TopicModel& sub);

/// The n highest-probability terms of topic k (ties by vocabulary index).
std::vector<std::string> label_topic(const TopicModel& model, int k, int n);

/// "Social-Measure-Intervention".
std::string display_label(const std::vector<std::string>& terms);

/// S_k, the sum of topic k's weights over all documents.
double topic_weight(const TopicModel& model, int k);

TopicHierarchy build_hierarchy(TopicModel main, TopicModel sub, int label_terms);

}  // namespace atlas
