#pragma once

#include "atlas/date.hpp"

#include "json.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace atlas {

struct Document {
  std::string id;
  std::string title;
  std::string abstract;
  std::optional<Date> date;
  // Set when the source only carried a year and the date was defaulted to
  // January 1; such dates are kept but excluded from trends by default.
  bool sentinel_date = false;
  std::map<std::string, std::string> extras;

  // Title and abstract joined by one space: the text that gets modelled.
  std::string text() const;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::vector<Document> documents;
  std::string source_label;

  std::size_t size() const { return documents.size(); }
  bool operator==(const Corpus&) const = default;
};

enum class InputFormat { csv, jsonl };

InputFormat input_format_from_string(std::string_view text);

struct FieldMapping {
  std::string id = "id";
  std::string title = "title";
  std::string abstract = "abstract";
  std::string date = "date";
};

std::vector<std::string> default_date_formats();

struct IngestOptions {
  InputFormat format = InputFormat::csv;
  FieldMapping mapping;
  std::vector<std::string> date_formats = default_date_formats();
};

struct LoadReport {
  std::size_t rows = 0;
  // Documents left without a date: blank, missing, or unparseable.
  std::size_t dateless = 0;
  // Line numbers of rows whose non-blank date matched no pattern.
  std::vector<std::size_t> unparseable_date_lines;
  std::size_t sentinel_dates = 0;
};

struct IngestResult {
  Corpus corpus;
  LoadReport report;
};

/// Loads one Document per data row (CSV) or line (JSONL), in file order.
/// Missing id/title values, duplicate ids and malformed records raise
/// atlas::Error naming the field, id or line number.
IngestResult ingest(const std::filesystem::path& path,
                    const IngestOptions& options);

void to_json(nlohmann::json& j, const Document& doc);
void from_json(const nlohmann::json& j, Document& doc);
void to_json(nlohmann::json& j, const Corpus& corpus);
void from_json(const nlohmann::json& j, Corpus& corpus);
void to_json(nlohmann::json& j, const LoadReport& report);

}  // namespace atlas
