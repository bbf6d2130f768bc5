#include "atlas/textprep.hpp"

#include "atlas/common.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <fstream>
#include <numeric>

namespace atlas {
namespace {

using nlohmann::json;

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  return *normalizer;
}

icu::UnicodeString normalized(std::string_view text) {
  auto input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(input, status);
  if (U_FAILURE(status)) throw Error("text normalization failed");
  out.toLower(icu::Locale::getRoot());
  out = nfc().normalize(out, status);
  if (U_FAILURE(status)) throw Error("text normalization failed");
  return out;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

std::string trim_line(std::string line) {
  if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  const char* ws = " \t\r\n";
  auto first = line.find_first_not_of(ws);
  if (first == std::string::npos) return {};
  auto last = line.find_last_not_of(ws);
  return line.substr(first, last - first + 1);
}

}  // namespace

std::string normalize_text(std::string_view text) { return to_utf8(normalized(text)); }

std::string capitalize(std::string_view term) {
  if (term.empty()) return {};
  int32_t i = 0;
  UChar32 c;
  U8_NEXT(term.data(), i, static_cast<int32_t>(term.size()), c);
  if (c < 0) return std::string(term);
  icu::UnicodeString head(u_totitle(c));
  return to_utf8(head) + std::string(term.substr(static_cast<std::size_t>(i)));
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stop-word list " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto term = trim_line(line);
    if (!term.empty()) words.insert(normalize_text(term));
  }
  return words;
}

std::unordered_map<std::string, std::string> load_lemma_table(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lemma table " + path.string());
  std::unordered_map<std::string, std::string> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto content = trim_line(line);
    if (content.empty()) continue;
    auto tab = content.find('\t');
    if (tab == std::string::npos) {
      throw Error(path.string() + ":" + std::to_string(line_no) +
                  ": expected 'form<TAB>lemma'");
    }
    auto form = trim_line(content.substr(0, tab));
    auto lemma = trim_line(content.substr(tab + 1));
    if (form.empty() || lemma.empty()) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": empty form or lemma");
    }
    table[normalize_text(form)] = normalize_text(lemma);
  }
  return table;
}

TextNormalizer::TextNormalizer(std::unordered_set<std::string> stopwords,
                               std::unordered_map<std::string, std::string> lemmas,
                               std::size_t min_token_len)
    : stopwords_(std::move(stopwords)),
      lemmas_(std::move(lemmas)),
      min_token_len_(min_token_len) {}

std::vector<std::string> TextNormalizer::tokens(std::string_view text) const {
  const icu::UnicodeString s = normalized(text);
  std::vector<std::string> out;
  icu::UnicodeString current;
  std::size_t length = 0;  // code points in `current`
  auto flush = [&] {
    if (length >= min_token_len_) {
      std::string token = to_utf8(current);
      if (auto it = lemmas_.find(token); it != lemmas_.end()) token = it->second;
      if (!stopwords_.contains(token)) out.push_back(std::move(token));
    }
    current.remove();
    length = 0;
  };
  for (int32_t i = 0; i < s.length();) {
    UChar32 c = s.char32At(i);
    i += U16_LENGTH(c);
    if (u_isalpha(c)) {
      current.append(c);
      ++length;
    } else if (length > 0) {
      flush();
    }
  }
  if (length > 0) flush();
  return out;
}

std::optional<std::int32_t> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::reindex() {
  index_.clear();
  index_.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    index_.emplace(terms[i], static_cast<std::int32_t>(i));
  }
}

std::size_t TokenizedCorpus::total_tokens() const {
  return std::accumulate(docs.begin(), docs.end(), std::size_t{0},
                         [](std::size_t acc, const auto& d) { return acc + d.size(); });
}

TokenizedCorpus preprocess(const Corpus& corpus, const TextNormalizer& normalizer,
                           const PreprocessOptions& options) {
  if (!(options.max_df_fraction > 0.0 && options.max_df_fraction <= 1.0)) {
    throw Error("max_df_fraction must be in (0, 1]");
  }
  // Intern surviving tokens under provisional ids in first-appearance order.
  std::unordered_map<std::string, std::int32_t> provisional;
  std::vector<std::string> provisional_terms;
  std::vector<std::vector<std::int32_t>> docs(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (auto& token : normalizer.tokens(corpus.documents[d].text())) {
      auto [it, inserted] =
          provisional.emplace(token, static_cast<std::int32_t>(provisional_terms.size()));
      if (inserted) provisional_terms.push_back(std::move(token));
      docs[d].push_back(it->second);
    }
  }

  // Prune terms and drop short documents until neither changes: dropping a
  // document can push a term below min_df, and pruning a term can shorten a
  // document below min_tokens.
  std::vector<bool> pruned(provisional_terms.size(), false);
  std::vector<bool> kept(corpus.size(), true);
  std::vector<std::size_t> df(provisional_terms.size());
  std::vector<std::size_t> last_seen(provisional_terms.size());
  bool changed = true;
  while (changed) {
    changed = false;
    std::fill(df.begin(), df.end(), 0);
    std::fill(last_seen.begin(), last_seen.end(), SIZE_MAX);
    std::size_t active_docs = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (!kept[d]) continue;
      ++active_docs;
      for (auto t : docs[d]) {
        if (last_seen[t] != d) {
          last_seen[t] = d;
          ++df[t];
        }
      }
    }
    const double max_df = options.max_df_fraction * static_cast<double>(active_docs);
    for (std::size_t t = 0; t < pruned.size(); ++t) {
      if (pruned[t] || df[t] == 0) continue;
      if (df[t] < options.min_df || static_cast<double>(df[t]) > max_df) {
        pruned[t] = true;
        changed = true;
      }
    }
    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (!kept[d]) continue;
      std::erase_if(docs[d], [&](std::int32_t t) { return pruned[t]; });
      if (docs[d].size() < options.min_tokens || docs[d].empty()) {
        kept[d] = false;
        changed = true;
      }
    }
  }

  TokenizedCorpus tc;
  std::vector<std::int32_t> remap(provisional_terms.size(), -1);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (!kept[d]) continue;
    std::vector<std::int32_t> out;
    out.reserve(docs[d].size());
    for (auto t : docs[d]) {
      if (remap[t] < 0) {
        remap[t] = static_cast<std::int32_t>(tc.vocabulary.terms.size());
        tc.vocabulary.terms.push_back(provisional_terms[t]);
        tc.vocabulary.doc_frequency.push_back(df[t]);
      }
      out.push_back(remap[t]);
    }
    tc.docs.push_back(std::move(out));
    tc.kept_doc_map.push_back(d);
  }
  if (tc.vocabulary.terms.empty()) {
    throw Error("corpus too small or filters too aggressive: empty vocabulary");
  }
  tc.vocabulary.reindex();
  return tc;
}

void to_json(json& j, const TokenizedCorpus& tc) {
  j = json{{"vocabulary",
            {{"terms", tc.vocabulary.terms},
             {"doc_frequency", tc.vocabulary.doc_frequency}}},
           {"docs", tc.docs},
           {"kept_doc_map", tc.kept_doc_map}};
}

void from_json(const json& j, TokenizedCorpus& tc) {
  const auto& vocab = j.at("vocabulary");
  tc.vocabulary.terms = vocab.at("terms").get<std::vector<std::string>>();
  tc.vocabulary.doc_frequency = vocab.at("doc_frequency").get<std::vector<std::size_t>>();
  tc.vocabulary.reindex();
  tc.docs = j.at("docs").get<std::vector<std::vector<std::int32_t>>>();
  tc.kept_doc_map = j.at("kept_doc_map").get<std::vector<std::size_t>>();
}

}  // namespace atlas
