#include "atlas/hierarchy.hpp"

#include "atlas/cluster.hpp"

#include <algorithm>
#include <numeric>

namespace atlas {

namespace {
constexpr double kTieTolerance = 1e-12;
}  // namespace

std::vector<int> TopicHierarchy::children_of(int m) const {
  std::vector<int> out;
  for (std::size_t s = 0; s < assignment.size(); ++s) {
    if (assignment[s] == m) out.push_back(static_cast<int>(s));
  }
  return out;
}

std::vector<int> assign_by_document_vectors(const RowMatrix& main_vectors,
                                            const RowMatrix& sub_vectors) {
  if (main_vectors.rows() != sub_vectors.rows()) {
    throw Error("assign_subtopics: main model has " + std::to_string(main_vectors.rows()) +
                " documents, sub model has " + std::to_string(sub_vectors.rows()));
  }
  if (main_vectors.cols() == 0) throw Error("assign_subtopics: main model has no topics");
  // Columns copied out once; theta is row-major.
  auto columns = [](const RowMatrix& m) {
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      cols[c].resize(static_cast<std::size_t>(m.rows()));
      for (Eigen::Index r = 0; r < m.rows(); ++r) cols[c][r] = m(r, c);
    }
    return cols;
  };
  const auto main_cols = columns(main_vectors);
  const auto sub_cols = columns(sub_vectors);
  std::vector<int> assignment(sub_cols.size());
  for (std::size_t s = 0; s < sub_cols.size(); ++s) {
    std::vector<double> distances(main_cols.size());
    for (std::size_t m = 0; m < main_cols.size(); ++m) distances[m] = cosine_distance(sub_cols[s], main_cols[m]);
    // Distances within kTieTolerance of the minimum tie; the lowest index wins.
    const double nearest = *std::min_element(distances.begin(), distances.end());
    int best = 0;
    while (distances[best] > nearest + kTieTolerance) ++best;
    assignment[s] = best;
  }
  return assignment;
}

std::vector<int> assign_subtopics(const TopicModel& main, const TopicModel& sub) {
  if (!main.doc_ids.empty() && !sub.doc_ids.empty() && main.doc_ids != sub.doc_ids) {
    throw Error("assign_subtopics: models were trained on different document orders");
  }
  return assign_by_document_vectors(main.theta, sub.theta);
}

std::vector<std::string> label_topic(const TopicModel& model, int k, int n) {
  if (k < 0 || k >= model.num_topics()) {
    throw Error("label_topic: topic " + std::to_string(k) + " out of range");
  }
  const auto V = static_cast<int>(model.phi.cols());
  if (n < 1 || n > V) throw Error("label_topic: n must be in [1, V]");
  std::vector<int> order(V);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + n, order.end(), [&](int a, int b) {
    const double pa = model.phi(k, a), pb = model.phi(k, b);
    return pa != pb ? pa > pb : a < b;
  });
  std::vector<std::string> terms;
  terms.reserve(n);
  for (int i = 0; i < n; ++i) terms.push_back(model.vocabulary.at(order[i]));
  return terms;
}

std::string display_label(const std::vector<std::string>& terms) {
  std::string out;
  for (const auto& term : terms) {
    if (!out.empty()) out += '-';
    out += capitalize(term);
  }
  return out;
}

double topic_weight(const TopicModel& model, int k) {
  if (k < 0 || k >= model.num_topics()) {
    throw Error("topic_weight: topic " + std::to_string(k) + " out of range");
  }
  return model.theta.col(k).sum();
}

TopicHierarchy build_hierarchy(TopicModel main, TopicModel sub, int label_terms) {
  TopicHierarchy h;
  h.assignment = assign_subtopics(main, sub);
  const int main_terms = std::min<int>(label_terms, static_cast<int>(main.phi.cols()));
  const int sub_terms = std::min<int>(label_terms, static_cast<int>(sub.phi.cols()));
  for (int k = 0; k < main.num_topics(); ++k) h.main_labels.push_back(label_topic(main, k, main_terms));
  for (int k = 0; k < sub.num_topics(); ++k) h.sub_labels.push_back(label_topic(sub, k, sub_terms));
  h.main = std::move(main);
  h.sub = std::move(sub);
  return h;
}

}  // namespace atlas
