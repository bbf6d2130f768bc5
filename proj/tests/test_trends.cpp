#include "atlas/trends.hpp"

#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <map>
#include <random>

using namespace atlas;
using namespace std::chrono;

namespace {

Document dated(std::string id, std::optional<Date> date, bool sentinel = false) {
  return {std::move(id), "t", "", date, sentinel, {}};
}

TopicModel model_of(RowMatrix theta) {
  TopicModel m;
  m.phi = RowMatrix::Constant(theta.cols(), 1, 1.0);
  m.theta = std::move(theta);
  return m;
}

}  // namespace

TEST_CASE("bin starts") {
  const Date thu = year{2020} / 3 / 12;
  CHECK(bin_start(thu, Binning::day) == thu);
  CHECK(bin_start(thu, Binning::week) == year{2020} / 3 / 9);
  CHECK(bin_start(year{2020} / 3 / 9, Binning::week) == year{2020} / 3 / 9);
  CHECK(bin_start(year{2020} / 3 / 8, Binning::week) == year{2020} / 3 / 2);
  CHECK(bin_start(year{2021} / 1 / 2, Binning::week) == year{2020} / 12 / 28);
  CHECK(bin_start(thu, Binning::month) == year{2020} / 3 / 1);
  CHECK(binning_from_string("week") == Binning::week);
  CHECK_THROWS_AS(binning_from_string("year"), Error);
}

TEST_CASE("four documents, two dates: hand-computed table") {
  Corpus corpus;
  corpus.documents = {dated("a", year{2020} / 4 / 1), dated("b", year{2020} / 4 / 2),
                      dated("c", year{2020} / 4 / 1), dated("d", std::nullopt)};
  const auto model = model_of(RowMatrix{{0.2, 0.8}, {0.6, 0.4}, {0.5, 0.5}, {0.9, 0.1}});
  const std::vector<std::size_t> map{0, 1, 2, 3};
  const auto t0 = topic_trend(model, corpus, map, {Level::main, 0}, Binning::day, {});
  REQUIRE(t0.points.size() == 2);
  CHECK(t0.points[0].bin == year{2020} / 4 / 1);
  CHECK(t0.points[0].weight == doctest::Approx(0.7));
  CHECK(t0.points[1].bin == year{2020} / 4 / 2);
  CHECK(t0.points[1].weight == doctest::Approx(0.6));
  const auto t1 = topic_trend(model, corpus, map, {Level::main, 1}, Binning::month, {});
  REQUIRE(t1.points.size() == 1);
  CHECK(t1.points[0].weight == doctest::Approx(1.7));
  CHECK_THROWS_AS(topic_trend(model, corpus, map, {Level::main, 2}, Binning::day, {}), Error);
}

TEST_CASE("sentinel and listed dates are excluded and reported") {
  Corpus corpus;
  corpus.documents = {dated("a", year{2020} / 1 / 1, true), dated("b", year{2020} / 5 / 1),
                      dated("c", year{2020} / 6 / 1), dated("skipped", year{2020} / 7 / 1)};
  // Only the first three documents were modelled.
  const auto model = model_of(RowMatrix{{1.0}, {1.0}, {1.0}});
  const std::vector<std::size_t> map{0, 1, 2};
  TrendOptions options;
  options.exclusions = {year{2020} / 6 / 1};
  const auto t = topic_trend(model, corpus, map, {Level::sub, 0}, Binning::day, options);
  REQUIRE(t.points.size() == 1);
  CHECK(t.points[0].bin == year{2020} / 5 / 1);
  CHECK(t.excluded_dates == std::vector<Date>{year{2020} / 1 / 1, year{2020} / 6 / 1});

  options = {};
  options.exclude_sentinels = false;
  CHECK(topic_trend(model, corpus, map, {Level::sub, 0}, Binning::day, options).points.size() == 3);
}

TEST_CASE("default binning follows the dated span") {
  Corpus corpus;
  corpus.documents = {dated("a", year{2020} / 1 / 1), dated("b", year{2020} / 12 / 30),
                      dated("c", year{2015} / 1 / 1, true), dated("d", std::nullopt)};
  CHECK(default_binning(corpus) == Binning::day);
  corpus.documents.push_back(dated("e", year{2021} / 1 / 1));
  CHECK(default_binning(corpus) == Binning::month);
  CHECK(default_binning(Corpus{}) == Binning::day);
}

TEST_CASE("trend mass is conserved and month re-aggregation agrees") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const int D = 1 + static_cast<int>(rng() % 40);
    const int K = 1 + static_cast<int>(rng() % 6);
    Corpus corpus;
    std::vector<std::size_t> map;
    const int extra = static_cast<int>(rng() % 5);  // unmodelled documents
    for (int d = 0; d < D + extra; ++d) {
      std::optional<Date> date;
      bool sentinel = false;
      if (rng() % 6 != 0) {
        date = Date{sys_days{year{2019} / 1 / 1} + days{static_cast<int>(rng() % 900)}};
        sentinel = rng() % 8 == 0;
      }
      corpus.documents.push_back(dated(std::to_string(d), date, sentinel));
    }
    for (int d = 0; d < D + extra; ++d) map.push_back(static_cast<std::size_t>(d));
    std::shuffle(map.begin(), map.end(), rng);
    map.resize(D);
    const auto model = model_of(testing::random_stochastic(rng, D, K));
    const auto by_day = all_trends(model, corpus, map, Level::main, Binning::day, {});
    const auto by_month = all_trends(model, corpus, map, Level::main, Binning::month, {});
    const auto by_week = all_trends(model, corpus, map, Level::main, Binning::week, {});
    for (int k = 0; k < K; ++k) {
      double expected = 0.0;
      for (int r = 0; r < D; ++r) {
        const auto& doc = corpus.documents[map[r]];
        if (doc.date && !doc.sentinel_date) expected += model.theta(r, k);
      }
      auto total = [](const TrendSeries& s) {
        double t = 0.0;
        for (const auto& p : s.points) t += p.weight;
        return t;
      };
      REQUIRE(std::abs(total(by_day[k]) - expected) <= 1e-9);
      REQUIRE(std::abs(total(by_week[k]) - expected) <= 1e-9);
      std::map<Date, double> regrouped;
      for (const auto& p : by_day[k].points) regrouped[bin_start(p.bin, Binning::month)] += p.weight;
      REQUIRE(regrouped.size() == by_month[k].points.size());
      for (const auto& p : by_month[k].points) REQUIRE(std::abs(regrouped[p.bin] - p.weight) <= 1e-9);
      for (std::size_t i = 1; i < by_day[k].points.size(); ++i) {
        REQUIRE(by_day[k].points[i - 1].bin < by_day[k].points[i].bin);
      }
    }
  }
}

TEST_CASE("misaligned document map is rejected") {
  Corpus corpus;
  corpus.documents = {dated("a", year{2020} / 1 / 2)};
  const auto model = model_of(RowMatrix{{1.0}, {1.0}});
  CHECK_THROWS_AS(all_trends(model, corpus, std::vector<std::size_t>{0}, Level::main, Binning::day, {}), Error);
  CHECK_THROWS_AS(all_trends(model, corpus, std::vector<std::size_t>{0, 3}, Level::main, Binning::day, {}),
                  Error);
}

TEST_CASE("trend JSON round trip") {
  TrendSeries s{{Level::sub, 4}, Binning::week, {{year{2020} / 3 / 9, 0.25}}, {year{2020} / 1 / 1}};
  nlohmann::json j = s;
  CHECK(j["points"][0]["bin"] == "2020-03-09");
  const auto back = j.get<TrendSeries>();
  CHECK(back.topic == s.topic);
  CHECK(back.binning == s.binning);
  CHECK(back.points == s.points);
  CHECK(back.excluded_dates == s.excluded_dates);
}
