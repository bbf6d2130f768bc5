#include "atlas/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace atlas {
namespace {

using nlohmann::json;

// Collects every problem instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> errors;

  const json* section(const json& parent, const std::string& key, const std::string& path,
                      std::initializer_list<const char*> allowed) {
    auto it = parent.find(key);
    if (it == parent.end() || it->is_null()) return nullptr;
    if (!it->is_object()) {
      errors.push_back(path + ": expected an object");
      return nullptr;
    }
    check_keys(*it, path, allowed);
    return &*it;
  }

  void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    std::set<std::string> names(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
      if (!names.contains(key)) errors.push_back(path + "." + key + ": unknown key");
    }
  }

  template <typename T>
  void read(const json* obj, const char* key, const std::string& path, T& out) {
    if (!obj) return;
    auto it = obj->find(key);
    if (it == obj->end() || it->is_null()) return;
    try {
      if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!it->is_number_integer()) throw std::invalid_argument("expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (it->get<long long>() < 0 && !it->is_number_unsigned()) {
            throw std::invalid_argument("expected a non-negative integer");
          }
        }
      }
      if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) throw std::invalid_argument("expected a number");
      }
      if constexpr (std::is_same_v<T, bool>) {
        if (!it->is_boolean()) throw std::invalid_argument("expected true or false");
      }
      if constexpr (std::is_same_v<T, std::string>) {
        if (!it->is_string()) throw std::invalid_argument("expected a string");
      }
      out = it->get<T>();
    } catch (const std::exception& e) {
      errors.push_back(path + "." + key + ": " + e.what());
    }
  }

  void require(const json* obj, const char* key, const std::string& path) {
    if (!obj || !obj->contains(key) || (*obj)[key].is_null()) {
      errors.push_back(path + "." + key + ": required");
    }
  }
};

Hyperparams read_model(Reader& r, const json& root, const char* key) {
  const std::string path = key;
  const json* obj = r.section(root, key, path, {"num_topics", "alpha", "beta", "iterations", "burn_in", "seed"});
  r.require(obj, "num_topics", path);
  int k = 0;
  r.read(obj, "num_topics", path, k);
  Hyperparams h = Hyperparams::defaults_for(k);
  r.read(obj, "alpha", path, h.alpha);
  r.read(obj, "beta", path, h.beta);
  r.read(obj, "iterations", path, h.iterations);
  r.read(obj, "burn_in", path, h.burn_in);
  r.read(obj, "seed", path, h.seed);
  if (obj) {
    try {
      h.validate();
    } catch (const Error& e) {
      r.errors.push_back(path + ": " + e.what());
    }
  }
  return h;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

int default_sub_clusters(std::size_t group_size) {
  if (group_size == 0) return 1;
  const int root = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(group_size))));
  return std::min(4, root);
}

PipelineConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  Reader r;
  r.check_keys(j, "config", {"input", "textprep", "main_model", "sub_model", "hierarchy", "clusters",
                             "trends", "layout", "output_dir"});
  PipelineConfig c;

  const json* input = r.section(j, "input", "input", {"path", "format", "source_label", "fields", "date_formats"});
  if (!input) r.errors.push_back("input: required");
  r.require(input, "path", "input");
  std::string path, format = "csv";
  r.read(input, "path", "input", path);
  r.read(input, "format", "input", format);
  r.read(input, "source_label", "input", c.input.source_label);
  if (!path.empty()) c.input.path = resolve(base_dir, path);
  try {
    c.input.options.format = input_format_from_string(format);
  } catch (const Error& e) {
    r.errors.push_back(std::string("input.format: ") + e.what());
  }
  if (input) {
    const json* fields = r.section(*input, "fields", "input.fields", {"id", "title", "abstract", "date"});
    auto& m = c.input.options.mapping;
    r.read(fields, "id", "input.fields", m.id);
    r.read(fields, "title", "input.fields", m.title);
    r.read(fields, "abstract", "input.fields", m.abstract);
    r.read(fields, "date", "input.fields", m.date);
    std::vector<std::string> formats;
    if (input->contains("date_formats")) {
      const auto& f = (*input)["date_formats"];
      if (!f.is_array() || f.empty()) {
        r.errors.push_back("input.date_formats: expected a non-empty list of strings");
      } else {
        for (const auto& pattern : f) {
          if (!pattern.is_string()) {
            r.errors.push_back("input.date_formats: expected strings");
            break;
          }
          formats.push_back(pattern.get<std::string>());
        }
        c.input.options.date_formats = formats;
      }
    }
  }

  const json* tp = r.section(j, "textprep", "textprep",
                             {"stopwords", "lemmas", "min_token_len", "min_df", "max_df_fraction", "min_tokens"});
  std::string stopwords = std::string(ATLAS_DATA_DIR) + "/stopwords_en.txt";
  std::string lemmas = std::string(ATLAS_DATA_DIR) + "/lemmas_en.tsv";
  bool custom_stopwords = tp && tp->contains("stopwords");
  bool custom_lemmas = tp && tp->contains("lemmas");
  r.read(tp, "stopwords", "textprep", stopwords);
  r.read(tp, "lemmas", "textprep", lemmas);
  c.textprep.stopwords = custom_stopwords ? resolve(base_dir, stopwords) : std::filesystem::path(stopwords);
  c.textprep.lemmas = custom_lemmas ? resolve(base_dir, lemmas) : std::filesystem::path(lemmas);
  r.read(tp, "min_token_len", "textprep", c.textprep.min_token_len);
  r.read(tp, "min_df", "textprep", c.textprep.options.min_df);
  r.read(tp, "max_df_fraction", "textprep", c.textprep.options.max_df_fraction);
  r.read(tp, "min_tokens", "textprep", c.textprep.options.min_tokens);
  if (!(c.textprep.options.max_df_fraction > 0.0 && c.textprep.options.max_df_fraction <= 1.0)) {
    r.errors.push_back("textprep.max_df_fraction: must be in (0, 1]");
  }
  if (c.textprep.min_token_len < 1) r.errors.push_back("textprep.min_token_len: must be at least 1");

  c.main_model = read_model(r, j, "main_model");
  c.sub_model = read_model(r, j, "sub_model");
  if (!j.contains("main_model")) r.errors.push_back("main_model: required");
  if (!j.contains("sub_model")) r.errors.push_back("sub_model: required");
  if (j.contains("main_model") && j.contains("sub_model") &&
      c.sub_model.num_topics <= c.main_model.num_topics) {
    r.errors.push_back("sub_model.num_topics: must exceed main_model.num_topics");
  }

  const json* hier = r.section(j, "hierarchy", "hierarchy", {"label_terms"});
  r.read(hier, "label_terms", "hierarchy", c.label_terms);
  if (c.label_terms < 1) r.errors.push_back("hierarchy.label_terms: must be at least 1");

  const json* clusters = r.section(j, "clusters", "clusters", {"main", "sub"});
  r.read(clusters, "main", "clusters", c.n_clusters_main);
  if (c.n_clusters_main < 1) r.errors.push_back("clusters.main: must be at least 1");
  if (clusters && clusters->contains("sub") && !(*clusters)["sub"].is_null()) {
    int sub = 0;
    r.read(clusters, "sub", "clusters", sub);
    if (sub < 1) r.errors.push_back("clusters.sub: must be at least 1");
    c.n_clusters_sub = sub;
  }

  const json* trends = r.section(j, "trends", "trends", {"binning", "exclude_sentinels", "exclude_dates"});
  std::string binning = "auto";
  r.read(trends, "binning", "trends", binning);
  if (binning != "auto") {
    try {
      c.trends.binning = binning_from_string(binning);
    } catch (const Error& e) {
      r.errors.push_back(std::string("trends.binning: ") + e.what());
    }
  }
  r.read(trends, "exclude_sentinels", "trends", c.trends.options.exclude_sentinels);
  if (trends && trends->contains("exclude_dates")) {
    const auto& dates = (*trends)["exclude_dates"];
    if (!dates.is_array()) {
      r.errors.push_back("trends.exclude_dates: expected a list of YYYY-MM-DD dates");
    } else {
      for (const auto& d : dates) {
        try {
          c.trends.options.exclusions.push_back(parse_iso_date(d.get<std::string>()));
        } catch (const std::exception& e) {
          r.errors.push_back(std::string("trends.exclude_dates: ") + e.what());
        }
      }
    }
  }

  const json* layout = r.section(j, "layout", "layout",
                                 {"padding_fraction", "rotation_steps", "arc_points", "max_radius", "svg"});
  r.read(layout, "padding_fraction", "layout", c.layout.padding_fraction);
  r.read(layout, "rotation_steps", "layout", c.layout.rotation_steps);
  r.read(layout, "arc_points", "layout", c.layout.arc_points);
  r.read(layout, "max_radius", "layout", c.layout.max_radius);
  r.read(layout, "svg", "layout", c.emit_svg);
  if (c.layout.padding_fraction < 0.0) r.errors.push_back("layout.padding_fraction: must be non-negative");
  if (c.layout.rotation_steps < 1) r.errors.push_back("layout.rotation_steps: must be at least 1");
  if (c.layout.arc_points < 2) r.errors.push_back("layout.arc_points: must be at least 2");
  if (!(c.layout.max_radius > 0.0)) r.errors.push_back("layout.max_radius: must be positive");

  std::string out = "atlas_out";
  r.read(&j, "output_dir", "config", out);
  c.output_dir = resolve(base_dir, out);

  if (!r.errors.empty()) {
    std::ostringstream msg;
    msg << "invalid configuration (" << r.errors.size() << " problem" << (r.errors.size() > 1 ? "s" : "")
        << "):";
    for (const auto& e : r.errors) msg << "\n  " << e;
    throw ConfigError(msg.str());
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j, std::filesystem::absolute(path).parent_path());
}

nlohmann::json to_json(const PipelineConfig& c) {
  json dates = json::array();
  for (const auto& d : c.trends.options.exclusions) dates.push_back(format_date(d));
  const auto& m = c.input.options.mapping;
  return json{
      {"input",
       {{"path", c.input.path.string()},
        {"format", c.input.options.format == InputFormat::csv ? "csv" : "jsonl"},
        {"source_label", c.input.source_label},
        {"fields", {{"id", m.id}, {"title", m.title}, {"abstract", m.abstract}, {"date", m.date}}},
        {"date_formats", c.input.options.date_formats}}},
      {"textprep",
       {{"stopwords", c.textprep.stopwords.string()},
        {"lemmas", c.textprep.lemmas.string()},
        {"min_token_len", c.textprep.min_token_len},
        {"min_df", c.textprep.options.min_df},
        {"max_df_fraction", c.textprep.options.max_df_fraction},
        {"min_tokens", c.textprep.options.min_tokens}}},
      {"main_model", c.main_model},
      {"sub_model", c.sub_model},
      {"hierarchy", {{"label_terms", c.label_terms}}},
      {"clusters", {{"main", c.n_clusters_main}, {"sub", c.n_clusters_sub ? json(*c.n_clusters_sub) : json(nullptr)}}},
      {"trends",
       {{"binning", c.trends.binning ? json(to_string(*c.trends.binning)) : json("auto")},
        {"exclude_sentinels", c.trends.options.exclude_sentinels},
        {"exclude_dates", dates}}},
      {"layout",
       {{"padding_fraction", c.layout.padding_fraction},
        {"rotation_steps", c.layout.rotation_steps},
        {"arc_points", c.layout.arc_points},
        {"max_radius", c.layout.max_radius},
        {"svg", c.emit_svg}}},
      {"output_dir", c.output_dir.string()}};
}

}  // namespace atlas
