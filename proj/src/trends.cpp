#include "atlas/trends.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace atlas {

using nlohmann::json;
using namespace std::chrono;

std::string_view to_string(Binning binning) {
  switch (binning) {
    case Binning::day: return "day";
    case Binning::week: return "week";
    case Binning::month: return "month";
  }
  return "day";
}

Binning binning_from_string(std::string_view text) {
  if (text == "day") return Binning::day;
  if (text == "week") return Binning::week;
  if (text == "month") return Binning::month;
  throw Error("unknown binning '" + std::string(text) + "' (expected day, week or month)");
}

Date bin_start(Date date, Binning binning) {
  switch (binning) {
    case Binning::day:
      return date;
    case Binning::week: {
      const sys_days days{date};
      const weekday wd{days};
      const auto since_monday = (wd - Monday).count();
      return Date{days - std::chrono::days{since_monday}};
    }
    case Binning::month:
      return Date{date.year(), date.month(), day{1}};
  }
  return date;
}

Binning default_binning(const Corpus& corpus) {
  std::optional<Date> first, last;
  for (const auto& doc : corpus.documents) {
    if (!doc.date || doc.sentinel_date) continue;
    if (!first || *doc.date < *first) first = doc.date;
    if (!last || *doc.date > *last) last = doc.date;
  }
  if (!first) return Binning::day;
  const auto span = sys_days{*last} - sys_days{*first};
  return span < std::chrono::days{365} ? Binning::day : Binning::month;
}

namespace {

// Model rows whose dates count towards trends, with their bin.
struct DatedRow {
  std::size_t row;
  Date bin;
};

std::vector<DatedRow> dated_rows(const Corpus& corpus, std::span<const std::size_t> kept_doc_map,
                                 Binning binning, const TrendOptions& options,
                                 std::vector<Date>& excluded) {
  std::set<Date> explicit_exclusions(options.exclusions.begin(), options.exclusions.end());
  std::set<Date> excluded_seen;
  std::vector<DatedRow> rows;
  for (std::size_t r = 0; r < kept_doc_map.size(); ++r) {
    const auto& doc = corpus.documents.at(kept_doc_map[r]);
    if (!doc.date) continue;
    if ((options.exclude_sentinels && doc.sentinel_date) || explicit_exclusions.contains(*doc.date)) {
      excluded_seen.insert(*doc.date);
      continue;
    }
    rows.push_back({r, bin_start(*doc.date, binning)});
  }
  excluded.assign(excluded_seen.begin(), excluded_seen.end());
  return rows;
}

TrendSeries series_from(const TopicModel& model, const std::vector<DatedRow>& rows, TopicRef topic,
                        Binning binning, const std::vector<Date>& excluded) {
  std::map<Date, double> sums;
  for (const auto& row : rows) {
    sums[row.bin] += model.theta(static_cast<Eigen::Index>(row.row), topic.index);
  }
  TrendSeries series;
  series.topic = topic;
  series.binning = binning;
  series.excluded_dates = excluded;
  series.points.reserve(sums.size());
  for (const auto& [bin, weight] : sums) series.points.push_back({bin, weight});
  return series;
}

void check_alignment(const TopicModel& model, const Corpus& corpus,
                     std::span<const std::size_t> kept_doc_map) {
  if (kept_doc_map.size() != model.num_docs()) {
    throw Error("trends: model has " + std::to_string(model.num_docs()) +
                " documents but the document map has " + std::to_string(kept_doc_map.size()));
  }
  for (auto d : kept_doc_map) {
    if (d >= corpus.size()) throw Error("trends: document map points outside the corpus");
  }
}

}  // namespace

TrendSeries topic_trend(const TopicModel& model, const Corpus& corpus,
                        std::span<const std::size_t> kept_doc_map, TopicRef topic,
                        Binning binning, const TrendOptions& options) {
  check_alignment(model, corpus, kept_doc_map);
  if (topic.index < 0 || topic.index >= model.num_topics()) {
    throw Error("trends: topic " + std::to_string(topic.index) + " out of range");
  }
  std::vector<Date> excluded;
  const auto rows = dated_rows(corpus, kept_doc_map, binning, options, excluded);
  return series_from(model, rows, topic, binning, excluded);
}

std::vector<TrendSeries> all_trends(const TopicModel& model, const Corpus& corpus,
                                    std::span<const std::size_t> kept_doc_map, Level level,
                                    Binning binning, const TrendOptions& options) {
  check_alignment(model, corpus, kept_doc_map);
  std::vector<Date> excluded;
  const auto rows = dated_rows(corpus, kept_doc_map, binning, options, excluded);
  std::vector<TrendSeries> out;
  out.reserve(static_cast<std::size_t>(model.num_topics()));
  for (int k = 0; k < model.num_topics(); ++k) {
    out.push_back(series_from(model, rows, {level, k}, binning, excluded));
  }
  return out;
}

void to_json(json& j, const TrendSeries& series) {
  json points = json::array();
  for (const auto& p : series.points) {
    points.push_back({{"bin", format_date(p.bin)}, {"weight", p.weight}});
  }
  json excluded = json::array();
  for (const auto& d : series.excluded_dates) excluded.push_back(format_date(d));
  j = json{{"level", to_string(series.topic.level)},
           {"topic", series.topic.index},
           {"binning", to_string(series.binning)},
           {"points", std::move(points)},
           {"excluded_dates", std::move(excluded)}};
}

void from_json(const json& j, TrendSeries& series) {
  series.topic.level = level_from_string(j.at("level").get<std::string>());
  series.topic.index = j.at("topic").get<int>();
  series.binning = binning_from_string(j.at("binning").get<std::string>());
  series.points.clear();
  for (const auto& p : j.at("points")) {
    series.points.push_back({parse_iso_date(p.at("bin").get<std::string>()), p.at("weight").get<double>()});
  }
  series.excluded_dates.clear();
  for (const auto& d : j.at("excluded_dates")) {
    series.excluded_dates.push_back(parse_iso_date(d.get<std::string>()));
  }
}

}  // namespace atlas
