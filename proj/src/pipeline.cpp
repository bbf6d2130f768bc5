#include "atlas/pipeline.hpp"

#include "atlas/bundle.hpp"
#include "atlas/cluster.hpp"
#include "atlas/hierarchy.hpp"
#include "atlas/json_schema.hpp"

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <future>
#include <map>
#include <numeric>
#include <sstream>

namespace atlas {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::preprocess: return "preprocess";
    case Stage::train: return "train";
    case Stage::hierarchy: return "hierarchy";
    case Stage::trends: return "trends";
    case Stage::layout: return "layout";
    case Stage::export_bundle: return "export";
  }
  return "?";
}

std::vector<Stage> all_stages() {
  return {Stage::ingest, Stage::preprocess, Stage::train, Stage::hierarchy,
          Stage::trends, Stage::layout,     Stage::export_bundle};
}

std::vector<Stage> parse_stages(std::string_view list) {
  if (list == "all") return all_stages();
  std::vector<bool> wanted(all_stages().size(), false);
  std::size_t pos = 0;
  while (pos <= list.size()) {
    auto comma = list.find(',', pos);
    auto name = list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    bool found = false;
    for (auto stage : all_stages()) {
      if (to_string(stage) == name) {
        wanted[static_cast<std::size_t>(stage)] = true;
        found = true;
      }
    }
    if (name == "all") {
      std::fill(wanted.begin(), wanted.end(), true);
      found = true;
    }
    if (!found) throw ConfigError("unknown stage '" + std::string(name) + "'");
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  std::vector<Stage> out;
  for (auto stage : all_stages()) {
    if (wanted[static_cast<std::size_t>(stage)]) out.push_back(stage);
  }
  return out;
}

std::vector<std::string> stage_outputs(Stage stage) {
  using namespace artifact;
  switch (stage) {
    case Stage::ingest: return {std::string(kCorpus), std::string(kLoadReport)};
    case Stage::preprocess: return {std::string(kTokenized)};
    case Stage::train: return {std::string(kMainModel), std::string(kSubModel)};
    case Stage::hierarchy: return {std::string(kHierarchy)};
    case Stage::trends: return {std::string(kTrends)};
    case Stage::layout: return {std::string(kMaps)};
    case Stage::export_bundle: return {std::string(kAtlas)};
  }
  return {};
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

// Predecessor artifacts each stage reads, paired with the stage producing them.
std::vector<std::pair<std::string_view, Stage>> stage_inputs(Stage stage) {
  using namespace artifact;
  switch (stage) {
    case Stage::ingest: return {};
    case Stage::preprocess: return {{kCorpus, Stage::ingest}};
    case Stage::train: return {{kCorpus, Stage::ingest}, {kTokenized, Stage::preprocess}};
    case Stage::hierarchy: return {{kMainModel, Stage::train}, {kSubModel, Stage::train}};
    case Stage::trends:
      return {{kCorpus, Stage::ingest}, {kTokenized, Stage::preprocess},
              {kMainModel, Stage::train}, {kSubModel, Stage::train}};
    case Stage::layout:
      return {{kMainModel, Stage::train}, {kSubModel, Stage::train}, {kHierarchy, Stage::hierarchy}};
    case Stage::export_bundle:
      return {{kCorpus, Stage::ingest},       {kTokenized, Stage::preprocess}, {kMainModel, Stage::train},
              {kSubModel, Stage::train},      {kHierarchy, Stage::hierarchy},  {kTrends, Stage::trends},
              {kMaps, Stage::layout}};
  }
  return {};
}

// Everything a stage's output depends on besides predecessor artifacts.
json stage_settings(Stage stage, const PipelineConfig& config, const json& canonical) {
  switch (stage) {
    case Stage::ingest:
      return {{"input", canonical["input"]}, {"data", sha256_file(config.input.path)}};
    case Stage::preprocess:
      return {{"textprep", canonical["textprep"]},
              {"stopwords", sha256_file(config.textprep.stopwords)},
              {"lemmas", sha256_file(config.textprep.lemmas)}};
    case Stage::train: return {{"main_model", canonical["main_model"]}, {"sub_model", canonical["sub_model"]}};
    case Stage::hierarchy: return {{"hierarchy", canonical["hierarchy"]}};
    case Stage::trends: return {{"trends", canonical["trends"]}};
    case Stage::layout: return {{"layout", canonical["layout"]}, {"clusters", canonical["clusters"]}};
    case Stage::export_bundle: return {{"schema_version", kSchemaVersion}};
  }
  return {};
}

TextNormalizer make_normalizer(const PipelineConfig& config) {
  return TextNormalizer(load_stopwords(config.textprep.stopwords), load_lemma_table(config.textprep.lemmas),
                        config.textprep.min_token_len);
}

class Runner {
 public:
  explicit Runner(const PipelineConfig& config) : config_(config), dir_(config.output_dir) {}

  void ingest() {
    auto result = atlas::ingest(config_.input.path, config_.input.options);
    if (!config_.input.source_label.empty()) result.corpus.source_label = config_.input.source_label;
    const auto& rep = result.report;
    spdlog::info("ingest: {} documents ({} dateless, {} unparseable dates, {} year-only dates)", rep.rows,
                 rep.dateless, rep.unparseable_date_lines.size(), rep.sentinel_dates);
    write_text(path(artifact::kCorpus), json(result.corpus).dump());
    write_text(path(artifact::kLoadReport), json(rep).dump(2) + "\n");
  }

  void preprocess() {
    const auto corpus = load_corpus();
    const auto normalizer = make_normalizer(config_);
    const auto tc = atlas::preprocess(corpus, normalizer, config_.textprep.options);
    spdlog::info("preprocess: {} of {} documents kept, vocabulary {}, {} tokens", tc.docs.size(),
                 corpus.size(), tc.vocabulary.size(), tc.total_tokens());
    write_text(path(artifact::kTokenized), json(tc).dump());
  }

  void train() {
    const auto corpus = load_corpus();
    const auto tc = load_tokenized();
    std::vector<std::string> doc_ids;
    for (auto d : tc.kept_doc_map) doc_ids.push_back(corpus.documents.at(d).id);
    for (const auto* h : {&config_.main_model, &config_.sub_model}) {
      if (static_cast<std::size_t>(h->num_topics) > tc.vocabulary.size()) {
        spdlog::warn("train: K={} exceeds the vocabulary size {}", h->num_topics, tc.vocabulary.size());
      }
    }
    auto run = [&](const Hyperparams& hyper, const char* name) {
      auto observer = [&](int sweep, const GibbsSampler& sampler) {
        const bool debug = spdlog::should_log(spdlog::level::debug);
        if (debug || sweep % 100 == 0 || sweep == hyper.iterations) {
          const double ll = log_likelihood(sampler.state(), hyper.alpha, hyper.beta);
          spdlog::log(debug ? spdlog::level::debug : spdlog::level::info, "train[{}]: sweep {}/{} log p(w,z) = {:.6f}",
                      name, sweep, hyper.iterations, ll);
        }
      };
      TopicModel model = atlas::train(tc, hyper, observer);
      model.doc_ids = doc_ids;
      return model;
    };
    // The two models share only immutable inputs.
    auto sub_future = std::async(std::launch::async, [&] { return run(config_.sub_model, "sub"); });
    TopicModel main_model = run(config_.main_model, "main");
    TopicModel sub_model = sub_future.get();
    write_text(path(artifact::kMainModel), json(main_model).dump());
    write_text(path(artifact::kSubModel), json(sub_model).dump());
  }

  void hierarchy() {
    auto h = build_hierarchy(load_model(artifact::kMainModel), load_model(artifact::kSubModel),
                             config_.label_terms);
    json j{{"assignment", h.assignment}, {"main_labels", h.main_labels}, {"sub_labels", h.sub_labels}};
    for (int m = 0; m < h.main.num_topics(); ++m) {
      spdlog::info("hierarchy: {} <- {} sub-topics", display_label(h.main_labels[m]), h.children_of(m).size());
    }
    write_text(path(artifact::kHierarchy), j.dump(1) + "\n");
  }

  void trends() {
    const auto corpus = load_corpus();
    const auto tc = load_tokenized();
    const Binning binning = config_.trends.binning.value_or(default_binning(corpus));
    json j{{"binning", to_string(binning)},
           {"main", all_trends(load_model(artifact::kMainModel), corpus, tc.kept_doc_map, Level::main, binning,
                               config_.trends.options)},
           {"sub", all_trends(load_model(artifact::kSubModel), corpus, tc.kept_doc_map, Level::sub, binning,
                              config_.trends.options)}};
    write_text(path(artifact::kTrends), j.dump());
  }

  void layout() {
    const auto h = load_hierarchy();
    auto leaves_for = [&](const TopicModel& model, Level level, const std::vector<int>& topics,
                          const std::vector<std::vector<std::string>>& labels) {
      MapLeaves leaves;
      leaves.level = level;
      leaves.topics = topics;
      std::vector<std::vector<double>> vectors;
      for (int k : topics) {
        vectors.push_back(doc_vector(model, k));
        leaves.weights.push_back(topic_weight(model, k));
        leaves.labels.push_back(display_label(labels[k]));
      }
      return std::make_pair(leaves, agglomerate(cosine_distance_matrix(vectors)));
    };

    std::vector<int> main_topics(h.main.num_topics());
    std::iota(main_topics.begin(), main_topics.end(), 0);
    auto [main_leaves, main_tree] = leaves_for(h.main, Level::main, main_topics, h.main_labels);
    if (config_.n_clusters_main > h.main.num_topics()) {
      spdlog::warn("layout: {} main clusters requested for {} topics; using {}", config_.n_clusters_main,
                   h.main.num_topics(), h.main.num_topics());
    }
    const BubbleMap main_map = layout_map(main_tree, main_leaves, config_.n_clusters_main, config_.layout);

    std::vector<std::future<BubbleMap>> jobs;
    for (int m = 0; m < h.main.num_topics(); ++m) {
      jobs.push_back(std::async(std::launch::async, [&, m] {
        const auto children = h.children_of(m);
        if (children.empty()) return BubbleMap{};
        auto [leaves, tree] = leaves_for(h.sub, Level::sub, children, h.sub_labels);
        const int clusters = config_.n_clusters_sub.value_or(default_sub_clusters(children.size()));
        return layout_map(tree, leaves, clusters, config_.layout);
      }));
    }
    json sub = json::object();
    std::map<int, BubbleMap> sub_maps;
    for (int m = 0; m < h.main.num_topics(); ++m) {
      sub_maps[m] = jobs[m].get();
      sub[std::to_string(m)] = sub_maps[m];
    }
    write_text(path(artifact::kMaps), json{{"main", main_map}, {"sub", sub}}.dump());
    if (config_.emit_svg) {
      write_svg(main_map, dir_ / "map_main.svg");
      for (const auto& [m, map] : sub_maps) {
        if (!map.bubbles.empty()) write_svg(map, dir_ / ("map_sub_" + std::to_string(m) + ".svg"));
      }
    }
  }

  void export_bundle() {
    const auto corpus = load_corpus();
    const auto tc = load_tokenized();
    const auto h = load_hierarchy();
    const json trends = read_json(path(artifact::kTrends));
    const json maps = read_json(path(artifact::kMaps));
    const auto main_trends = trends.at("main").get<std::vector<TrendSeries>>();
    const auto sub_trends = trends.at("sub").get<std::vector<TrendSeries>>();
    const auto main_map = maps.at("main").get<BubbleMap>();
    std::map<int, BubbleMap> sub_maps;
    for (const auto& [key, map] : maps.at("sub").items()) sub_maps[std::stoi(key)] = map.get<BubbleMap>();

    const AtlasBundle bundle =
        build_bundle({h, main_map, sub_maps, main_trends, sub_trends, corpus, tc.kept_doc_map});
    const std::string text = serialize(bundle);
    const fs::path schema_path = fs::path(ATLAS_SCHEMA_DIR) / "atlas.schema.json";
    if (fs::exists(schema_path)) {
      const auto problems = validate_json_schema(json::parse(text), read_json(schema_path));
      if (!problems.empty()) {
        throw Error("atlas bundle violates " + schema_path.string() + ": " + problems.front() + " (" +
                    std::to_string(problems.size()) + " problems)");
      }
    }
    write_text(path(artifact::kAtlas), text);
    spdlog::info("export: wrote {} ({} bytes)", path(artifact::kAtlas).string(), text.size());
  }

  fs::path path(std::string_view name) const { return dir_ / name; }

 private:
  Corpus load_corpus() const { return read_json(path(artifact::kCorpus)).get<Corpus>(); }
  TokenizedCorpus load_tokenized() const { return read_json(path(artifact::kTokenized)).get<TokenizedCorpus>(); }
  TopicModel load_model(std::string_view name) const { return read_json(path(name)).get<TopicModel>(); }

  TopicHierarchy load_hierarchy() const {
    const json j = read_json(path(artifact::kHierarchy));
    TopicHierarchy h;
    h.main = load_model(artifact::kMainModel);
    h.sub = load_model(artifact::kSubModel);
    h.assignment = j.at("assignment").get<std::vector<int>>();
    h.main_labels = j.at("main_labels").get<std::vector<std::vector<std::string>>>();
    h.sub_labels = j.at("sub_labels").get<std::vector<std::vector<std::string>>>();
    if (static_cast<int>(h.assignment.size()) != h.sub.num_topics()) {
      throw Error("hierarchy.json does not match the sub-topic model");
    }
    return h;
  }

  const PipelineConfig& config_;
  fs::path dir_;
};

}  // namespace

std::string sha256_file(const fs::path& path) { return sha256_hex(read_text(path)); }

std::vector<StageOutcome> run_pipeline(const PipelineConfig& config, std::span<const Stage> stages) {
  fs::create_directories(config.output_dir);
  Runner runner(config);
  const json canonical = to_json(config);
  const fs::path manifest_path = runner.path(artifact::kManifest);
  json manifest = fs::exists(manifest_path) ? read_json(manifest_path) : json::object();
  manifest["config_hash"] = sha256_hex(canonical.dump());
  if (!manifest.contains("stages")) manifest["stages"] = json::object();

  std::vector<Stage> ordered(stages.begin(), stages.end());
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  std::vector<StageOutcome> outcomes;
  for (Stage stage : ordered) {
    const std::string name(to_string(stage));
    // Earliest missing predecessor, so the message names what to run first.
    std::optional<Stage> missing;
    std::string missing_file;
    for (const auto& [file, producer] : stage_inputs(stage)) {
      if (!fs::exists(runner.path(file)) && (!missing || producer < *missing)) {
        missing = producer;
        missing_file = std::string(file);
      }
    }
    if (missing) {
      throw Error("stage '" + name + "' needs " + missing_file + " from stage '" +
                  std::string(to_string(*missing)) + "'; run '" + std::string(to_string(*missing)) + "' first");
    }

    json key{{"stage", name}, {"settings", stage_settings(stage, config, canonical)}};
    json inputs = json::object();
    for (const auto& [file, producer] : stage_inputs(stage)) {
      inputs[std::string(file)] = sha256_file(runner.path(file));
    }
    key["inputs"] = inputs;
    const std::string input_hash = sha256_hex(key.dump());

    const json& previous = manifest["stages"].contains(name) ? manifest["stages"][name] : json();
    bool unchanged = previous.is_object() && previous.value("input_hash", "") == input_hash;
    if (unchanged) {
      for (const auto& file : stage_outputs(stage)) {
        const auto p = runner.path(file);
        if (!fs::exists(p) || !previous["outputs"].contains(file) ||
            previous["outputs"][file].get<std::string>() != sha256_file(p)) {
          unchanged = false;
          break;
        }
      }
    }
    if (unchanged) {
      spdlog::info("{}: up to date, skipping", name);
      outcomes.push_back({stage, true});
      continue;
    }

    spdlog::info("{}: running", name);
    switch (stage) {
      case Stage::ingest: runner.ingest(); break;
      case Stage::preprocess: runner.preprocess(); break;
      case Stage::train: runner.train(); break;
      case Stage::hierarchy: runner.hierarchy(); break;
      case Stage::trends: runner.trends(); break;
      case Stage::layout: runner.layout(); break;
      case Stage::export_bundle: runner.export_bundle(); break;
    }
    json outputs = json::object();
    for (const auto& file : stage_outputs(stage)) outputs[file] = sha256_file(runner.path(file));
    manifest["stages"][name] = json{{"input_hash", input_hash}, {"outputs", outputs}};
    write_text(manifest_path, manifest.dump(2) + "\n");
    outcomes.push_back({stage, false});
  }
  write_text(manifest_path, manifest.dump(2) + "\n");
  return outcomes;
}

}  // namespace atlas
