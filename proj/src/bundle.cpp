#include "atlas/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <set>
#include <unordered_set>

namespace atlas {

using nlohmann::json;

double round_sig6(double value) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return std::strtod(buf, nullptr);
}

const TopicRecord& AtlasBundle::record(TopicRef topic) const {
  const auto& records = topic.level == Level::main ? main_topics : sub_topics;
  if (topic.index < 0 || topic.index >= static_cast<int>(records.size())) {
    throw Error("bundle has no record for " + std::string(to_string(topic.level)) + " topic " +
                std::to_string(topic.index));
  }
  return records[topic.index];
}

namespace {

std::vector<int> top_terms(const TopicModel& model, int k, int n) {
  const int V = static_cast<int>(model.phi.cols());
  n = std::min(n, V);
  std::vector<int> order(V);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + n, order.end(), [&](int a, int b) {
    const double pa = model.phi(k, a), pb = model.phi(k, b);
    return pa != pb ? pa > pb : a < b;
  });
  order.resize(n);
  return order;
}

std::vector<TopDocument> top_documents(const TopicModel& model, int k, const Corpus& corpus,
                                       std::span<const std::size_t> kept_doc_map) {
  const auto D = model.num_docs();
  std::vector<std::size_t> rows(D);
  std::iota(rows.begin(), rows.end(), 0);
  const std::size_t n = std::min<std::size_t>(kTopDocsSize, D);
  auto id_of = [&](std::size_t row) -> const std::string& {
    return corpus.documents.at(kept_doc_map[row]).id;
  };
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n), rows.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double wa = model.theta(static_cast<Eigen::Index>(a), k);
                      const double wb = model.theta(static_cast<Eigen::Index>(b), k);
                      return wa != wb ? wa > wb : id_of(a) < id_of(b);
                    });
  std::vector<TopDocument> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& doc = corpus.documents.at(kept_doc_map[rows[i]]);
    out.push_back({doc.id, doc.title, doc.date, model.theta(static_cast<Eigen::Index>(rows[i]), k)});
  }
  return out;
}

TopicRecord make_record(const TopicModel& model, TopicRef topic,
                        const std::vector<std::string>& label_terms, const TrendSeries& trend,
                        const Corpus& corpus, std::span<const std::size_t> kept_doc_map) {
  TopicRecord rec;
  rec.topic = topic;
  rec.terms = label_terms;
  rec.label = display_label(label_terms);
  rec.weight = topic_weight(model, topic.index);
  for (int w : top_terms(model, topic.index, kWordCloudSize)) {
    rec.word_cloud.push_back({model.vocabulary[w], model.phi(topic.index, w)});
  }
  rec.trend = trend;
  rec.top_docs = top_documents(model, topic.index, corpus, kept_doc_map);
  return rec;
}

void add_to_index(std::map<std::string, std::vector<IndexEntry>>& index, const TopicModel& model,
                  Level level) {
  for (int k = 0; k < model.num_topics(); ++k) {
    for (int w : top_terms(model, k, kSearchTermsPerTopic)) {
      index[model.vocabulary[w]].push_back({{level, k}, model.phi(k, w)});
    }
  }
}

void round_floats(json& j) {
  if (j.is_number_float()) {
    j = round_sig6(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& child : j) round_floats(child);
  }
}

json date_or_null(const std::optional<Date>& d) {
  return d ? json(format_date(*d)) : json(nullptr);
}

std::optional<Date> optional_date(const json& j) {
  if (j.is_null()) return std::nullopt;
  return parse_iso_date(j.get<std::string>());
}

}  // namespace

AtlasBundle build_bundle(const BundleInputs& in) {
  const auto& h = in.hierarchy;
  const int K_main = h.main.num_topics();
  const int K_sub = h.sub.num_topics();
  if (static_cast<int>(in.main_trends.size()) != K_main || static_cast<int>(in.sub_trends.size()) != K_sub) {
    throw Error("build_bundle: trend series do not match topic counts");
  }
  if (in.kept_doc_map.size() != h.main.num_docs()) {
    throw Error("build_bundle: document map does not match the models");
  }

  AtlasBundle b;
  b.corpus_meta.source_label = in.corpus.source_label;
  b.corpus_meta.document_count = in.corpus.size();
  b.corpus_meta.modelled_document_count = in.kept_doc_map.size();
  for (const auto& doc : in.corpus.documents) {
    if (!doc.date || doc.sentinel_date) continue;
    if (!b.corpus_meta.first_date || *doc.date < *b.corpus_meta.first_date) b.corpus_meta.first_date = doc.date;
    if (!b.corpus_meta.last_date || *doc.date > *b.corpus_meta.last_date) b.corpus_meta.last_date = doc.date;
  }

  for (int k = 0; k < K_main; ++k) {
    auto rec = make_record(h.main, {Level::main, k}, h.main_labels.at(k), in.main_trends[k], in.corpus,
                           in.kept_doc_map);
    rec.children = h.children_of(k);
    b.main_topics.push_back(std::move(rec));
  }
  for (int k = 0; k < K_sub; ++k) {
    auto rec = make_record(h.sub, {Level::sub, k}, h.sub_labels.at(k), in.sub_trends[k], in.corpus,
                           in.kept_doc_map);
    rec.parent = h.assignment.at(k);
    b.sub_topics.push_back(std::move(rec));
  }
  b.main_map = in.main_map;
  b.sub_maps = in.sub_maps;
  add_to_index(b.search_index, h.main, Level::main);
  add_to_index(b.search_index, h.sub, Level::sub);

  // Cross-references.
  auto check_map = [&](const BubbleMap& map, const std::string& where) {
    for (const auto& bubble : map.bubbles) {
      const auto& records = bubble.topic.level == Level::main ? b.main_topics : b.sub_topics;
      if (bubble.topic.index < 0 || bubble.topic.index >= static_cast<int>(records.size())) {
        throw Error("build_bundle: " + where + " references " +
                    std::string(to_string(bubble.topic.level)) + " topic " +
                    std::to_string(bubble.topic.index) + " without a topic record");
      }
    }
  };
  check_map(b.main_map, "main map");
  for (const auto& [m, map] : b.sub_maps) {
    if (m < 0 || m >= K_main) throw Error("build_bundle: sub-map for unknown main topic " + std::to_string(m));
    check_map(map, "sub-map " + std::to_string(m));
  }
  std::unordered_set<std::string> ids;
  for (const auto& doc : in.corpus.documents) ids.insert(doc.id);
  for (const auto* records : {&b.main_topics, &b.sub_topics}) {
    for (const auto& rec : *records) {
      for (const auto& doc : rec.top_docs) {
        if (!ids.contains(doc.id)) throw Error("build_bundle: top document '" + doc.id + "' not in corpus");
      }
    }
  }
  return b;
}

void to_json(json& j, const AtlasBundle& b) {
  auto record_json = [](const TopicRecord& r) {
    json cloud = json::array();
    for (const auto& ww : r.word_cloud) cloud.push_back({{"term", ww.term}, {"weight", ww.weight}});
    json docs = json::array();
    for (const auto& d : r.top_docs) {
      docs.push_back({{"id", d.id}, {"title", d.title}, {"date", date_or_null(d.date)}, {"weight", d.weight}});
    }
    json trend = r.trend;
    trend.erase("level");
    trend.erase("topic");
    return json{{"level", to_string(r.topic.level)},
                {"id", r.topic.index},
                {"label", r.label},
                {"terms", r.terms},
                {"weight", r.weight},
                {"parent", r.parent ? json(*r.parent) : json(nullptr)},
                {"children", r.children},
                {"word_cloud", std::move(cloud)},
                {"trend", std::move(trend)},
                {"top_docs", std::move(docs)}};
  };
  json main_topics = json::array(), sub_topics = json::array();
  for (const auto& r : b.main_topics) main_topics.push_back(record_json(r));
  for (const auto& r : b.sub_topics) sub_topics.push_back(record_json(r));
  json sub_maps = json::object();
  for (const auto& [m, map] : b.sub_maps) sub_maps[std::to_string(m)] = map;
  json index = json::object();
  for (const auto& [term, entries] : b.search_index) {
    json list = json::array();
    for (const auto& e : entries) {
      list.push_back({{"level", to_string(e.topic.level)}, {"topic", e.topic.index}, {"weight", e.weight}});
    }
    index[term] = std::move(list);
  }
  j = json{{"schema_version", b.schema_version},
           {"corpus_meta",
            {{"source_label", b.corpus_meta.source_label},
             {"document_count", b.corpus_meta.document_count},
             {"modelled_document_count", b.corpus_meta.modelled_document_count},
             {"date_range",
              {{"first", date_or_null(b.corpus_meta.first_date)},
               {"last", date_or_null(b.corpus_meta.last_date)}}}}},
           {"main_map", b.main_map},
           {"sub_maps", std::move(sub_maps)},
           {"topics", {{"main", std::move(main_topics)}, {"sub", std::move(sub_topics)}}},
           {"search_index", std::move(index)}};
  round_floats(j);
}

void from_json(const json& j, AtlasBundle& b) {
  b.schema_version = j.at("schema_version").get<std::string>();
  if (b.schema_version != kSchemaVersion) {
    throw Error("unsupported atlas schema_version '" + b.schema_version + "'");
  }
  const auto& meta = j.at("corpus_meta");
  b.corpus_meta.source_label = meta.at("source_label").get<std::string>();
  b.corpus_meta.document_count = meta.at("document_count").get<std::size_t>();
  b.corpus_meta.modelled_document_count = meta.at("modelled_document_count").get<std::size_t>();
  b.corpus_meta.first_date = optional_date(meta.at("date_range").at("first"));
  b.corpus_meta.last_date = optional_date(meta.at("date_range").at("last"));
  b.main_map = j.at("main_map").get<BubbleMap>();
  b.sub_maps.clear();
  for (const auto& [key, map] : j.at("sub_maps").items()) b.sub_maps[std::stoi(key)] = map.get<BubbleMap>();

  auto read_records = [](const json& list) {
    std::vector<TopicRecord> out;
    for (const auto& r : list) {
      TopicRecord rec;
      rec.topic = {level_from_string(r.at("level").get<std::string>()), r.at("id").get<int>()};
      rec.label = r.at("label").get<std::string>();
      rec.terms = r.at("terms").get<std::vector<std::string>>();
      rec.weight = r.at("weight").get<double>();
      if (!r.at("parent").is_null()) rec.parent = r.at("parent").get<int>();
      rec.children = r.at("children").get<std::vector<int>>();
      for (const auto& ww : r.at("word_cloud")) {
        rec.word_cloud.push_back({ww.at("term").get<std::string>(), ww.at("weight").get<double>()});
      }
      json trend = r.at("trend");
      trend["level"] = r.at("level");
      trend["topic"] = r.at("id");
      rec.trend = trend.get<TrendSeries>();
      for (const auto& d : r.at("top_docs")) {
        rec.top_docs.push_back({d.at("id").get<std::string>(), d.at("title").get<std::string>(),
                                optional_date(d.at("date")), d.at("weight").get<double>()});
      }
      out.push_back(std::move(rec));
    }
    return out;
  };
  b.main_topics = read_records(j.at("topics").at("main"));
  b.sub_topics = read_records(j.at("topics").at("sub"));
  b.search_index.clear();
  for (const auto& [term, list] : j.at("search_index").items()) {
    auto& entries = b.search_index[term];
    for (const auto& e : list) {
      entries.push_back({{level_from_string(e.at("level").get<std::string>()), e.at("topic").get<int>()},
                         e.at("weight").get<double>()});
    }
  }
}

std::string serialize(const AtlasBundle& bundle) {
  json j = bundle;
  return j.dump(1) + "\n";
}

AtlasBundle parse_bundle(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("atlas bundle is not valid JSON: ") + e.what());
  }
  return j.get<AtlasBundle>();
}

std::vector<SearchHit> search(const AtlasBundle& bundle, std::string_view query,
                              const TextNormalizer& normalizer) {
  const auto tokens = normalizer.tokens(query);
  const std::set<std::string> lemmas(tokens.begin(), tokens.end());
  std::map<TopicRef, double> scores;
  for (const auto& lemma : lemmas) {
    auto it = bundle.search_index.find(lemma);
    if (it == bundle.search_index.end()) continue;
    for (const auto& entry : it->second) scores[entry.topic] += entry.weight;
  }
  std::vector<SearchHit> hits;
  for (const auto& [topic, score] : scores) {
    if (score > 0.0) hits.push_back({topic, score});
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const SearchHit& a, const SearchHit& b) { return a.score > b.score; });
  return hits;
}

}  // namespace atlas
