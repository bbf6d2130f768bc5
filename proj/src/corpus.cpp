#include "atlas/corpus.hpp"

#include "atlas/common.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace atlas {
namespace {

using nlohmann::json;

struct CsvRecord {
  std::size_t line = 0;  // physical line where the record starts
  std::vector<std::string> fields;
};

// RFC 4180 reader. Quoted fields may contain separators, doubled quotes and
// line breaks; blank lines are skipped.
std::vector<CsvRecord> parse_csv(const std::string& content) {
  std::vector<CsvRecord> records;
  std::size_t line = 1;
  std::size_t pos = 0;
  const std::size_t n = content.size();
  while (pos < n) {
    if (content[pos] == '\n' || (content[pos] == '\r' && pos + 1 < n && content[pos + 1] == '\n')) {
      pos += content[pos] == '\r' ? 2 : 1;
      ++line;
      continue;
    }
    CsvRecord record;
    record.line = line;
    std::string field;
    bool done = false;
    while (!done) {
      field.clear();
      if (pos < n && content[pos] == '"') {
        ++pos;
        while (true) {
          if (pos >= n) {
            throw Error("line " + std::to_string(record.line) +
                        ": malformed CSV: unterminated quoted field");
          }
          char c = content[pos];
          if (c == '"') {
            if (pos + 1 < n && content[pos + 1] == '"') {
              field.push_back('"');
              pos += 2;
              continue;
            }
            ++pos;
            break;
          }
          if (c == '\n') ++line;
          field.push_back(c);
          ++pos;
        }
        if (pos < n && content[pos] != ',' && content[pos] != '\n' && content[pos] != '\r') {
          throw Error("line " + std::to_string(line) +
                      ": malformed CSV: unexpected character after closing quote");
        }
      } else {
        while (pos < n && content[pos] != ',' && content[pos] != '\n' &&
               !(content[pos] == '\r' && pos + 1 < n && content[pos + 1] == '\n')) {
          if (content[pos] == '"') {
            throw Error("line " + std::to_string(line) +
                        ": malformed CSV: quote inside unquoted field");
          }
          field.push_back(content[pos]);
          ++pos;
        }
      }
      record.fields.push_back(field);
      if (pos >= n) {
        done = true;
      } else if (content[pos] == ',') {
        ++pos;
      } else {
        pos += content[pos] == '\r' ? 2 : 1;
        ++line;
        done = true;
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::string trim(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(ws);
  return std::string(s.substr(first, last - first + 1));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();
  if (content.starts_with("\xEF\xBB\xBF")) content.erase(0, 3);
  return content;
}

// Raw field values of one input row before validation.
struct RawRow {
  std::size_t line = 0;
  std::optional<std::string> id, title, abstract, date;
  std::map<std::string, std::string> extras;
};

std::vector<RawRow> read_csv_rows(const std::string& content, const FieldMapping& mapping) {
  auto records = parse_csv(content);
  std::vector<RawRow> rows;
  if (records.empty()) return rows;
  const auto& header = records.front().fields;
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  auto id_col = column(mapping.id);
  if (!id_col) throw Error("missing field 'id' (column '" + mapping.id + "' not in header)");
  auto title_col = column(mapping.title);
  if (!title_col) {
    throw Error("missing field 'title' (column '" + mapping.title + "' not in header)");
  }
  auto abstract_col = column(mapping.abstract);
  auto date_col = column(mapping.date);

  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.size()) {
      throw Error("line " + std::to_string(rec.line) + ": malformed CSV: expected " +
                  std::to_string(header.size()) + " fields, found " +
                  std::to_string(rec.fields.size()));
    }
    RawRow row;
    row.line = rec.line;
    row.id = rec.fields[*id_col];
    row.title = rec.fields[*title_col];
    if (abstract_col) row.abstract = rec.fields[*abstract_col];
    if (date_col) row.date = rec.fields[*date_col];
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == *id_col || c == *title_col || (abstract_col && c == *abstract_col) ||
          (date_col && c == *date_col)) {
        continue;
      }
      row.extras[header[c]] = rec.fields[c];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<std::string> scalar_text(const json& value) {
  if (value.is_null()) return std::nullopt;
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number() || value.is_boolean()) return value.dump();
  return std::nullopt;
}

std::vector<RawRow> read_jsonl_rows(const std::string& content, const FieldMapping& mapping) {
  std::vector<RawRow> rows;
  std::istringstream in(content);
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (trim(text).empty()) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error("line " + std::to_string(line) + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object()) {
      throw Error("line " + std::to_string(line) + ": malformed JSON: expected an object");
    }
    RawRow row;
    row.line = line;
    for (const auto& [key, value] : obj.items()) {
      auto text_value = scalar_text(value);
      if (key == mapping.id) {
        row.id = text_value;
      } else if (key == mapping.title) {
        row.title = text_value;
      } else if (key == mapping.abstract) {
        row.abstract = text_value;
      } else if (key == mapping.date) {
        row.date = text_value;
      } else if (text_value) {
        row.extras[key] = *text_value;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string Document::text() const {
  if (abstract.empty()) return title;
  return title + " " + abstract;
}

InputFormat input_format_from_string(std::string_view text) {
  if (text == "csv") return InputFormat::csv;
  if (text == "jsonl") return InputFormat::jsonl;
  throw Error("unknown input format '" + std::string(text) + "' (expected csv or jsonl)");
}

std::vector<std::string> default_date_formats() {
  return {"%Y-%m-%d", "%Y/%m/%d", "%d/%m/%Y", "%Y"};
}

IngestResult ingest(const std::filesystem::path& path, const IngestOptions& options) {
  const std::string content = read_file(path);
  const auto rows = options.format == InputFormat::csv
                        ? read_csv_rows(content, options.mapping)
                        : read_jsonl_rows(content, options.mapping);

  IngestResult result;
  result.corpus.source_label = path.filename().string();
  auto& report = result.report;
  std::unordered_set<std::string> seen;
  for (const auto& row : rows) {
    const std::string where = "line " + std::to_string(row.line);
    Document doc;
    doc.id = row.id ? trim(*row.id) : std::string();
    if (doc.id.empty()) throw Error(where + ": missing field 'id'");
    doc.title = row.title ? trim(*row.title) : std::string();
    if (doc.title.empty()) throw Error(where + ": missing field 'title'");
    if (!seen.insert(doc.id).second) throw Error(where + ": duplicate id '" + doc.id + "'");
    if (row.abstract) doc.abstract = trim(*row.abstract);
    std::string date_text = row.date ? trim(*row.date) : std::string();
    if (!date_text.empty()) {
      if (auto parsed = parse_date_any(date_text, options.date_formats)) {
        doc.date = parsed->date;
        doc.sentinel_date = parsed->year_only;
        if (doc.sentinel_date) ++report.sentinel_dates;
      } else {
        report.unparseable_date_lines.push_back(row.line);
      }
    }
    if (!doc.date) ++report.dateless;
    doc.extras = row.extras;
    result.corpus.documents.push_back(std::move(doc));
  }
  report.rows = result.corpus.documents.size();
  return result;
}

void to_json(json& j, const Document& doc) {
  j = json{{"id", doc.id},
           {"title", doc.title},
           {"abstract", doc.abstract},
           {"date", doc.date ? json(format_date(*doc.date)) : json(nullptr)},
           {"sentinel_date", doc.sentinel_date},
           {"extras", doc.extras}};
}

void from_json(const json& j, Document& doc) {
  doc.id = j.at("id").get<std::string>();
  doc.title = j.at("title").get<std::string>();
  doc.abstract = j.at("abstract").get<std::string>();
  const auto& date = j.at("date");
  doc.date = date.is_null() ? std::nullopt
                            : std::optional<Date>(parse_iso_date(date.get<std::string>()));
  doc.sentinel_date = j.at("sentinel_date").get<bool>();
  doc.extras = j.at("extras").get<std::map<std::string, std::string>>();
}

void to_json(json& j, const Corpus& corpus) {
  j = json{{"source_label", corpus.source_label}, {"documents", corpus.documents}};
}

void from_json(const json& j, Corpus& corpus) {
  corpus.source_label = j.at("source_label").get<std::string>();
  corpus.documents = j.at("documents").get<std::vector<Document>>();
}

void to_json(json& j, const LoadReport& report) {
  j = json{{"rows", report.rows},
           {"dateless", report.dateless},
           {"unparseable_date_lines", report.unparseable_date_lines},
           {"sentinel_dates", report.sentinel_dates}};
}

}  // namespace atlas
