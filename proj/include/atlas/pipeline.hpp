#pragma once

#include "atlas/config.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace atlas {

enum class Stage { ingest, preprocess, train, hierarchy, trends, layout, export_bundle };

std::string_view to_string(Stage stage);
std::vector<Stage> all_stages();
/// "all" or a comma-separated list of stage names; returned in pipeline order.
std::vector<Stage> parse_stages(std::string_view list);

namespace artifact {
inline constexpr std::string_view kCorpus = "corpus.json";
inline constexpr std::string_view kLoadReport = "load_report.json";
inline constexpr std::string_view kTokenized = "tokenized.json";
inline constexpr std::string_view kMainModel = "model_main.json";
inline constexpr std::string_view kSubModel = "model_sub.json";
inline constexpr std::string_view kHierarchy = "hierarchy.json";
inline constexpr std::string_view kTrends = "trends.json";
inline constexpr std::string_view kMaps = "maps.json";
inline constexpr std::string_view kAtlas = "atlas.json";
inline constexpr std::string_view kManifest = "manifest.json";
}  // namespace artifact

/// Files a stage writes, relative to the output directory.
std::vector<std::string> stage_outputs(Stage stage);

struct StageOutcome {
  Stage stage;
  bool skipped = false;  // inputs and config unchanged, outputs intact
};

/// Runs the requested stages in pipeline order. Each stage reads its
/// predecessors' artifacts from config.output_dir and records a checksum of
/// its inputs and outputs in manifest.json; a stage whose recorded inputs
/// match and whose outputs are intact is skipped. Throws atlas::Error naming
/// the stage to run first when a predecessor artifact is missing.
std::vector<StageOutcome> run_pipeline(const PipelineConfig& config,
                                       std::span<const Stage> stages);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace atlas
