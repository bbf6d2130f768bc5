#pragma once

#include "atlas/common.hpp"
#include "atlas/corpus.hpp"
#include "atlas/date.hpp"
#include "atlas/lda.hpp"

#include "json.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace atlas {

enum class Binning { day, week, month };

std::string_view to_string(Binning binning);
Binning binning_from_string(std::string_view text);

/// First day of the bin containing `date`. Weeks start on Monday.
Date bin_start(Date date, Binning binning);

struct TrendPoint {
  Date bin;  // first day of the bin
  double weight = 0.0;

  bool operator==(const TrendPoint&) const = default;
};

struct TrendSeries {
  TopicRef topic;
  Binning binning = Binning::day;
  std::vector<TrendPoint> points;  // strictly ascending bins
  std::vector<Date> excluded_dates;
};

struct TrendOptions {
  bool exclude_sentinels = true;
  std::vector<Date> exclusions;
};

/// Day binning when the dated documents span less than a year, month
/// otherwise.
Binning default_binning(const Corpus& corpus);

/// Per-bin sums of theta[d][k] over dated documents. `kept_doc_map` maps
/// model rows to corpus indices. Undated, sentinel (unless disabled) and
/// explicitly excluded dates contribute nothing; empty bins are omitted.
TrendSeries topic_trend(const TopicModel& model, const Corpus& corpus,
                        std::span<const std::size_t> kept_doc_map, TopicRef topic,
                        Binning binning, const TrendOptions& options);

std::vector<TrendSeries> all_trends(const TopicModel& model, const Corpus& corpus,
                                    std::span<const std::size_t> kept_doc_map,
                                    Level level, Binning binning,
                                    const TrendOptions& options);

void to_json(nlohmann::json& j, const TrendSeries& series);
void from_json(const nlohmann::json& j, TrendSeries& series);

}  // namespace atlas
