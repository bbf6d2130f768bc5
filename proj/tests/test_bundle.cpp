#include "atlas/bundle.hpp"
#include "atlas/json_schema.hpp"
#include "atlas/pipeline.hpp"

#include "doctest.h"
#include "support.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

using namespace atlas;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// The fixture pipeline runs once per test binary.
struct FixtureRun {
  testing::TempDir dir{"bundle"};
  PipelineConfig config = testing::fixture_config(dir.path());
  std::string text;
  AtlasBundle bundle;
  TopicModel main_model;
  TopicModel sub_model;
  Corpus corpus;

  FixtureRun() {
    const auto stages = all_stages();
    run_pipeline(config, stages);
    text = testing::read_file(dir / "atlas.json");
    bundle = parse_bundle(text);
    main_model = json::parse(testing::read_file(dir / "model_main.json")).get<TopicModel>();
    sub_model = json::parse(testing::read_file(dir / "model_sub.json")).get<TopicModel>();
    corpus = json::parse(testing::read_file(dir / "corpus.json")).get<Corpus>();
  }
};

const FixtureRun& fixture() {
  static const FixtureRun run;
  return run;
}

json schema() {
  return json::parse(testing::read_file(fs::path(ATLAS_TEST_DATA_DIR).parent_path().parent_path() /
                                        "schema" / "atlas.schema.json"));
}

}  // namespace

TEST_CASE("round_sig6") {
  CHECK(round_sig6(0.0) == 0.0);
  CHECK(round_sig6(1.23456789) == 1.23457);
  CHECK(round_sig6(-123456789.0) == -123457000.0);
  CHECK(round_sig6(0.000123456789) == 0.000123457);
  CHECK(round_sig6(round_sig6(3.14159265)) == round_sig6(3.14159265));
}

TEST_CASE("fixture bundle shape") {
  const auto& f = fixture();
  const auto& b = f.bundle;
  CHECK(b.schema_version == "1.0");
  CHECK(b.main_topics.size() == 6);
  CHECK(b.sub_topics.size() == 18);
  CHECK(b.main_map.bubbles.size() == 6);
  CHECK(b.corpus_meta.document_count == 200);
  CHECK(b.corpus_meta.modelled_document_count == f.main_model.num_docs());
  CHECK(b.corpus_meta.source_label == "Synthetic 200-abstract fixture");
  std::size_t children = 0;
  for (const auto& m : b.main_topics) {
    CHECK_FALSE(m.parent);
    for (int s : m.children) CHECK(b.sub_topics.at(s).parent == m.topic.index);
    children += m.children.size();
    const auto& sub_map = b.sub_maps.at(m.topic.index);
    CHECK(sub_map.bubbles.size() == m.children.size());
    for (const auto& bubble : sub_map.bubbles) CHECK(bubble.topic.level == Level::sub);
  }
  CHECK(children == 18);
  for (const auto& s : b.sub_topics) CHECK(s.parent);
}

TEST_CASE("top documents follow a hand-sorted theta column") {
  const auto& f = fixture();
  const auto tc = json::parse(testing::read_file(f.dir / "tokenized.json")).get<TokenizedCorpus>();
  for (const auto* level : {&f.bundle.main_topics, &f.bundle.sub_topics}) {
    const auto& model = level == &f.bundle.main_topics ? f.main_model : f.sub_model;
    for (const auto& rec : *level) {
      std::vector<std::pair<double, std::string>> column;
      for (std::size_t r = 0; r < model.num_docs(); ++r) {
        column.emplace_back(model.theta(static_cast<Eigen::Index>(r), rec.topic.index),
                            f.corpus.documents[tc.kept_doc_map[r]].id);
      }
      std::sort(column.begin(), column.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      REQUIRE(rec.top_docs.size() == std::min<std::size_t>(20, column.size()));
      for (std::size_t i = 0; i < rec.top_docs.size(); ++i) {
        CHECK(rec.top_docs[i].id == column[i].second);
        CHECK(rec.top_docs[i].weight == round_sig6(column[i].first));
      }
    }
  }
}

TEST_CASE("word clouds hold the 30 heaviest terms") {
  const auto& f = fixture();
  for (const auto& rec : f.bundle.sub_topics) {
    REQUIRE(rec.word_cloud.size() == 30);
    for (std::size_t i = 1; i < rec.word_cloud.size(); ++i) {
      CHECK(rec.word_cloud[i - 1].weight >= rec.word_cloud[i].weight);
    }
    CHECK(rec.word_cloud.front().term == rec.terms.front());
  }
}

TEST_CASE("search scores equal a brute-force sum over the index") {
  const auto& f = fixture();
  const auto normalizer = testing::default_normalizer();
  for (const std::string query : {"vaccine", "social distancing", "school closure online", "Viruses"}) {
    std::map<TopicRef, double> expected;
    std::set<std::string> seen;
    for (const auto& lemma : normalizer.tokens(query)) {
      if (!seen.insert(lemma).second || !f.bundle.search_index.contains(lemma)) continue;
      for (const auto& e : f.bundle.search_index.at(lemma)) expected[e.topic] += e.weight;
    }
    const auto hits = search(f.bundle, query, normalizer);
    REQUIRE(hits.size() == expected.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
      CHECK(hits[i].score == expected.at(hits[i].topic));
      if (i > 0) {
        CHECK(hits[i - 1].score >= hits[i].score);
        if (hits[i - 1].score == hits[i].score) CHECK(hits[i - 1].topic < hits[i].topic);
      }
    }
  }
  CHECK(search(f.bundle, "zzzz unrelated", normalizer).empty());
  CHECK(search(f.bundle, "the of and", normalizer).empty());
}

TEST_CASE("a topic's top term ranks the topic holding it most heavily first") {
  const auto& f = fixture();
  const auto normalizer = testing::default_normalizer();
  for (const auto* level : {&f.bundle.main_topics, &f.bundle.sub_topics}) {
    for (const auto& rec : *level) {
      const auto& term = rec.terms.front();
      const auto& entries = f.bundle.search_index.at(term);
      const auto heaviest = std::max_element(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.weight != b.weight ? a.weight < b.weight : b.topic < a.topic;
      });
      const auto hits = search(f.bundle, term, normalizer);
      REQUIRE_FALSE(hits.empty());
      CHECK(hits.front().topic == heaviest->topic);
    }
  }
}

TEST_CASE("social distancing surfaces the Social-Measure-Intervention sub-topic") {
  const auto& f = fixture();
  const auto hits = search(f.bundle, "social distancing", testing::default_normalizer());
  REQUIRE_FALSE(hits.empty());
  CHECK(hits.front().topic.level == Level::sub);
  CHECK(f.bundle.record(hits.front().topic).label == "Social-Measure-Intervention");
}

TEST_CASE("serialization is stable across a parse round trip") {
  const auto& f = fixture();
  CHECK(serialize(f.bundle) == f.text);
  CHECK(f.text.back() == '\n');
  CHECK_THROWS_AS(parse_bundle("{"), Error);
  auto j = json::parse(f.text);
  j["schema_version"] = "2.0";
  CHECK_THROWS_AS(parse_bundle(j.dump()), Error);
}

TEST_CASE("fixture bundle validates; broken bundles do not") {
  const auto& f = fixture();
  const auto s = schema();
  const auto good = json::parse(f.text);
  CHECK(validate_json_schema(good, s).empty());

  auto missing = good;
  missing.erase("search_index");
  CHECK_FALSE(validate_json_schema(missing, s).empty());

  auto extra = good;
  extra["topics"]["main"][0]["colour"] = "red";
  CHECK_FALSE(validate_json_schema(extra, s).empty());

  auto bad_date = good;
  bad_date["corpus_meta"]["date_range"]["first"] = "01/02/2020";
  CHECK_FALSE(validate_json_schema(bad_date, s).empty());

  auto bad_level = good;
  bad_level["main_map"]["bubbles"][0]["level"] = "top";
  CHECK_FALSE(validate_json_schema(bad_level, s).empty());

  auto bad_type = good;
  bad_type["topics"]["sub"][0]["parent"] = "0";
  CHECK_FALSE(validate_json_schema(bad_type, s).empty());
}

TEST_CASE("build_bundle rejects dangling references") {
  const auto& f = fixture();
  TopicHierarchy h = build_hierarchy(f.main_model, f.sub_model, 3);
  const auto tc = json::parse(testing::read_file(f.dir / "tokenized.json")).get<TokenizedCorpus>();
  const auto trends = json::parse(testing::read_file(f.dir / "trends.json"));
  const auto main_trends = trends.at("main").get<std::vector<TrendSeries>>();
  const auto sub_trends = trends.at("sub").get<std::vector<TrendSeries>>();
  BubbleMap map = f.bundle.main_map;
  map.bubbles[0].topic.index = 99;
  const std::map<int, BubbleMap> no_sub_maps;
  CHECK_THROWS_WITH_AS(build_bundle({h, map, no_sub_maps, main_trends, sub_trends, f.corpus, tc.kept_doc_map}),
                       doctest::Contains("without a topic record"), Error);

  const std::vector<TrendSeries> too_few(main_trends.begin(), main_trends.begin() + 2);
  CHECK_THROWS_AS(build_bundle({h, f.bundle.main_map, no_sub_maps, too_few, sub_trends, f.corpus,
                                tc.kept_doc_map}),
                  Error);
}
