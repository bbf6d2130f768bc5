#include "atlas/cli.hpp"

#include "atlas/bundle.hpp"
#include "atlas/json_schema.hpp"
#include "atlas/pipeline.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>
#include <sstream>

namespace atlas::cli {

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void setup_logging(const std::string& level) {
  auto logger = spdlog::stderr_color_mt("atlas");
  logger->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(level));
}

int run_command(const std::string& config_path, const std::string& stages, std::optional<std::uint64_t> seed,
                const std::string& out) {
  PipelineConfig config = load_config(config_path);
  if (seed) {
    config.main_model.seed = *seed;
    config.sub_model.seed = *seed;
  }
  if (!out.empty()) config.output_dir = out;
  const auto outcomes = run_pipeline(config, parse_stages(stages));
  for (const auto& o : outcomes) {
    std::cout << to_string(o.stage) << (o.skipped ? ": skipped (up to date)" : ": done") << "\n";
  }
  return kExitOk;
}

int search_command(const std::string& bundle_path, const std::string& query, const std::string& config_path) {
  const AtlasBundle bundle = parse_bundle(slurp(bundle_path));
  TextprepConfig prep;
  prep.stopwords = std::filesystem::path(ATLAS_DATA_DIR) / "stopwords_en.txt";
  prep.lemmas = std::filesystem::path(ATLAS_DATA_DIR) / "lemmas_en.tsv";
  if (!config_path.empty()) prep = load_config(config_path).textprep;
  const TextNormalizer normalizer(load_stopwords(prep.stopwords),
                                  load_lemma_table(prep.lemmas), prep.min_token_len);
  for (const auto& hit : search(bundle, query, normalizer)) {
    const auto& rec = bundle.record(hit.topic);
    std::cout << to_string(hit.topic.level) << "\t" << hit.topic.index << "\t" << hit.score << "\t" << rec.label
              << "\n";
  }
  return kExitOk;
}

int validate_command(const std::string& bundle_path, const std::string& schema_path) {
  const auto instance = nlohmann::json::parse(slurp(bundle_path));
  const auto schema = nlohmann::json::parse(slurp(schema_path));
  const auto problems = validate_json_schema(instance, schema);
  for (const auto& p : problems) std::cout << p << "\n";
  if (!problems.empty()) {
    std::cerr << bundle_path << ": " << problems.size() << " schema violations\n";
    return kExitFailure;
  }
  std::cout << bundle_path << ": valid\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic atlas builder"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "error, warn, info or debug")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

  std::string config_path, stages = "all", out, bundle_path, query, schema_path;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run pipeline stages");
  run->add_option("--config", config_path, "Configuration file (JSON)")->required();
  run->add_option("--stages", stages, "'all' or comma-separated stage names");
  run->add_option("--seed", seed, "Override both sampler seeds");
  run->add_option("--out", out, "Override the output directory");
  run->add_option("--log-level", log_level)->check(CLI::IsMember({"error", "warn", "info", "debug"}));

  auto* find = app.add_subcommand("search", "Rank topics of an atlas for a query");
  find->add_option("--bundle", bundle_path, "atlas.json")->required();
  find->add_option("--query", query, "Free text")->required();
  find->add_option("--config", config_path, "Configuration whose stop words and lemmas to use");

  auto* validate = app.add_subcommand("validate", "Check an atlas against its JSON schema");
  validate->add_option("--bundle", bundle_path, "atlas.json")->required();
  schema_path = std::string(ATLAS_SCHEMA_DIR) + "/atlas.schema.json";
  validate->add_option("--schema", schema_path, "Schema file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  setup_logging(log_level);
  try {
    if (*run) return run_command(config_path, stages, seed, out);
    if (*find) return search_command(bundle_path, query, config_path);
    if (*validate) return validate_command(bundle_path, schema_path);
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace atlas::cli
