#include "atlas/textprep.hpp"

#include "doctest.h"
#include "support.hpp"

#include <map>
#include <random>
#include <set>

using namespace atlas;
using testing::TempDir;
using testing::write_file;

namespace {

using Tokens = std::vector<std::string>;

TextNormalizer plain(std::size_t min_len = 3) { return TextNormalizer({}, {}, min_len); }

Corpus corpus_of(const std::vector<std::string>& texts) {
  Corpus c;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    c.documents.push_back({"d" + std::to_string(i), texts[i], "", std::nullopt, false, {}});
  }
  return c;
}

}  // namespace

TEST_CASE("normalization composes and lowercases") {
  CHECK(normalize_text("Cafe\xCC\x81") == "caf\xC3\xA9");
  CHECK(normalize_text("CAF\xC3\x89") == "caf\xC3\xA9");
  // Word-final capital sigma lowercases to the final form.
  CHECK(normalize_text("\xCE\xA3\xCE\x91\xCE\xA1\xCE\xA3") == "\xCF\x83\xCE\xB1\xCF\x81\xCF\x82");
  CHECK(capitalize("virus") == "Virus");
  CHECK(capitalize("\xC3\xA9tude") == "\xC3\x89tude");
  CHECK(capitalize("") == "");
}

TEST_CASE("tokens split on anything that is not a letter") {
  CHECK(plain().tokens("COVID-19 and SARS-CoV-2: a (re)view") ==
        Tokens{"covid", "and", "sars", "cov", "view"});
  CHECK(plain(1).tokens("x1y") == Tokens{"x", "y"});
  CHECK(plain().tokens("") == Tokens{});
  CHECK(plain().tokens("don't") == Tokens{"don"});
}

TEST_CASE("minimum length counts code points, not bytes") {
  // "été" is three code points but five bytes.
  CHECK(plain(3).tokens("\xC3\xA9t\xC3\xA9 ab") == Tokens{"\xC3\xA9t\xC3\xA9"});
  CHECK(plain(4).tokens("\xC3\xA9t\xC3\xA9") == Tokens{});
}

TEST_CASE("lemmas apply before stop words") {
  TextNormalizer n({"study"}, {{"studies", "study"}, {"viruses", "virus"}, {"masks", "mask"}});
  CHECK(n.tokens("Studies of viruses and masks") == Tokens{"virus", "and", "mask"});
}

TEST_CASE("stop word and lemma files") {
  TempDir dir("textprep");
  write_file(dir / "stop.txt", "# comment\nthe\n  And  \n\nof # trailing\n");
  write_file(dir / "lemmas.tsv", "# form\tlemma\nViruses\tvirus\nmice\tmouse\n");
  const auto stop = load_stopwords(dir / "stop.txt");
  CHECK(stop == std::unordered_set<std::string>{"the", "and", "of"});
  const auto lemmas = load_lemma_table(dir / "lemmas.tsv");
  CHECK(lemmas.at("viruses") == "virus");
  CHECK(lemmas.at("mice") == "mouse");

  write_file(dir / "bad.tsv", "ok\tfine\nbroken line\n");
  CHECK_THROWS_WITH_AS(load_lemma_table(dir / "bad.tsv"), doctest::Contains(":2:"), Error);
  CHECK_THROWS_AS(load_stopwords(dir / "missing.txt"), Error);
}

TEST_CASE("shipped lemma table is idempotent") {
  const auto n = testing::default_normalizer();
  const auto data = std::filesystem::path(ATLAS_TEST_DATA_DIR).parent_path().parent_path() / "data";
  const auto lemmas = load_lemma_table(data / "lemmas_en.tsv");
  for (const auto& [form, lemma] : lemmas) {
    INFO(form);
    CHECK_FALSE(lemmas.contains(lemma));
    CHECK(n.tokens(form) == n.tokens(lemma));
  }
}

TEST_CASE("preprocess prunes rare and ubiquitous terms and short documents") {
  const auto corpus = corpus_of({
      "alpha beta gamma common",
      "alpha beta delta common",
      "gamma delta beta common",
      "zeta common",
      "alpha gamma delta common rare",
      "alpha beta gamma delta common",
  });
  PreprocessOptions options;
  options.min_df = 2;
  options.max_df_fraction = 0.9;
  options.min_tokens = 3;
  const auto tc = preprocess(corpus, plain(), options);
  // "common" is in 6 of 6 documents (> 5.4); "zeta" and "rare" are below
  // min_df; document 3 is left empty. The rest survive with 5 documents.
  CHECK(tc.vocabulary.terms == Tokens{"alpha", "beta", "gamma", "delta"});
  CHECK(tc.kept_doc_map == std::vector<std::size_t>{0, 1, 2, 4, 5});
  CHECK(tc.docs[2] == std::vector<std::int32_t>{2, 3, 1});
  CHECK(tc.vocabulary.doc_frequency == std::vector<std::size_t>{4, 4, 4, 4});
  CHECK(tc.total_tokens() == 16);
  CHECK(tc.vocabulary.find("gamma") == 2);
  CHECK_FALSE(tc.vocabulary.find("common"));
}

TEST_CASE("pruning iterates until documents and vocabulary agree") {
  // Dropping document 2 (too short) leaves "kappa" in only one document,
  // which then has to go as well.
  const auto corpus = corpus_of({
      "alpha beta kappa",
      "alpha beta gamma",
      "kappa zeta",
      "alpha beta gamma",
  });
  PreprocessOptions options{2, 1.0, 3};
  const auto tc = preprocess(corpus, plain(), options);
  CHECK(tc.kept_doc_map == std::vector<std::size_t>{1, 3});
  CHECK(tc.vocabulary.terms == Tokens{"alpha", "beta", "gamma"});
}

TEST_CASE("empty vocabulary is an error") {
  CHECK_THROWS_WITH_AS(preprocess(corpus_of({"one two", "three"}), plain(), {}),
                       "corpus too small or filters too aggressive: empty vocabulary", Error);
}

TEST_CASE("preprocess invariants on random corpora") {
  std::mt19937_64 rng(7);
  const Tokens words = {"amber", "birch", "cedar", "dune", "ember", "fjord", "grove",
                        "heath", "inlet", "jetty", "knoll", "lagoon"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> texts;
    const int D = 3 + static_cast<int>(rng() % 20);
    for (int d = 0; d < D; ++d) {
      std::string text;
      const int n = static_cast<int>(rng() % 12);
      for (int i = 0; i < n; ++i) text += words[rng() % (1 + trial % words.size())] + " ";
      texts.push_back(text);
    }
    PreprocessOptions options{1 + rng() % 3, 0.5 + 0.5 * static_cast<double>(rng() % 3) / 2.0, rng() % 4};
    TokenizedCorpus tc;
    try {
      tc = preprocess(corpus_of(texts), plain(), options);
    } catch (const Error&) {
      continue;
    }
    const auto kept = tc.docs.size();
    std::map<std::int32_t, std::size_t> df;
    for (const auto& doc : tc.docs) {
      CHECK(doc.size() >= std::max<std::size_t>(options.min_tokens, 1));
      for (auto t : std::set<std::int32_t>(doc.begin(), doc.end())) ++df[t];
    }
    REQUIRE(df.size() == tc.vocabulary.size());
    for (std::size_t t = 0; t < tc.vocabulary.size(); ++t) {
      CHECK(tc.vocabulary.doc_frequency[t] == df[static_cast<std::int32_t>(t)]);
      CHECK(df[static_cast<std::int32_t>(t)] >= options.min_df);
      CHECK(static_cast<double>(df[static_cast<std::int32_t>(t)]) <=
            options.max_df_fraction * static_cast<double>(kept));
    }
    // Term ids follow first appearance.
    std::int32_t next = 0;
    for (const auto& doc : tc.docs) {
      for (auto t : doc) {
        CHECK(t <= next);
        if (t == next) ++next;
      }
    }
    CHECK(std::is_sorted(tc.kept_doc_map.begin(), tc.kept_doc_map.end()));
  }
}

TEST_CASE("tokenized corpus JSON round trip") {
  const auto tc = preprocess(corpus_of({"alpha beta", "alpha beta", "beta gamma"}), plain(),
                             PreprocessOptions{1, 1.0, 1});
  nlohmann::json j = tc;
  const auto back = j.get<TokenizedCorpus>();
  CHECK(back.docs == tc.docs);
  CHECK(back.vocabulary.terms == tc.vocabulary.terms);
  CHECK(back.vocabulary.doc_frequency == tc.vocabulary.doc_frequency);
  CHECK(back.kept_doc_map == tc.kept_doc_map);
  CHECK(back.vocabulary.find("gamma") == 2);
}
