#include "support.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace testing {

TempDir::TempDir(const std::string& tag) {
  static int counter = 0;
  path_ = fs::temp_directory_path() /
          ("atlas_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

atlas::TokenizedCorpus make_tokenized(const std::vector<std::vector<std::int32_t>>& docs,
                                      std::size_t vocab_size) {
  atlas::TokenizedCorpus tc;
  tc.docs = docs;
  for (std::size_t w = 0; w < vocab_size; ++w) {
    std::string name = "t";
    for (std::size_t v = w;; v /= 26) {
      name.push_back(static_cast<char>('a' + v % 26));
      if (v < 26) break;
    }
    tc.vocabulary.terms.push_back(name);
    tc.vocabulary.doc_frequency.push_back(0);
  }
  for (const auto& doc : docs) {
    std::vector<bool> seen(vocab_size, false);
    for (auto w : doc) {
      if (!seen[w]) ++tc.vocabulary.doc_frequency[w];
      seen[w] = true;
    }
  }
  tc.vocabulary.reindex();
  for (std::size_t d = 0; d < docs.size(); ++d) tc.kept_doc_map.push_back(d);
  return tc;
}

atlas::TextNormalizer default_normalizer() {
  const fs::path data = ATLAS_TEST_DATA_DIR;
  const fs::path shipped = data.parent_path().parent_path() / "data";
  return atlas::TextNormalizer(atlas::load_stopwords(shipped / "stopwords_en.txt"),
                               atlas::load_lemma_table(shipped / "lemmas_en.tsv"));
}

atlas::PipelineConfig fixture_config(const fs::path& output_dir) {
  auto config = atlas::load_config(fixture_config_path());
  config.output_dir = output_dir;
  return config;
}

int run_cli(const std::vector<std::string>& args, std::string* output) {
  std::string command = std::string("'") + ATLAS_CLI_PATH + "'";
  for (const auto& a : args) {
    std::string quoted = "'";
    for (char c : a) {
      if (c == '\'') quoted += "'\\''";
      else quoted.push_back(c);
    }
    command += " " + quoted + "'";
  }
  command += " 2>&1";
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return -1;
  std::array<char, 4096> buf{};
  std::string out;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  if (output) *output = out;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

atlas::RowMatrix random_stochastic(std::mt19937_64& rng, int rows, int cols) {
  std::gamma_distribution<double> gamma(0.5, 1.0);
  atlas::RowMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    double total = 0.0;
    for (int j = 0; j < cols; ++j) total += m(i, j) = gamma(rng) + 1e-12;
    m.row(i) /= total;
  }
  return m;
}

}  // namespace testing
