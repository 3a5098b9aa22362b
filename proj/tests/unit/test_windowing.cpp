#include <doctest.h>

#include <sstream>

#include "ccadm/dataset.hpp"
#include "ccadm/errors.hpp"
#include "ccadm/rng.hpp"
#include "ccadm/windowing.hpp"

using namespace ccadm;

namespace {

AssembledTable column_table(std::vector<std::vector<double>> cols, std::size_t target = 0) {
  AssembledTable t;
  const std::size_t n = cols.front().size();
  for (std::size_t i = 0; i < n; ++i) t.dates.push_back(Date(2016, 1, 1) + static_cast<int>(i));
  for (std::size_t c = 0; c < cols.size(); ++c)
    t.columns.push_back({{"S", "a" + std::to_string(c)}, std::move(cols[c])});
  t.target_column = target;
  return t;
}

ScenarioSpec spec_with(std::vector<AttributeRef> main, std::vector<AttributeRef> context,
                       std::vector<CollaborativeSource> collab) {
  ScenarioSpec s;
  s.scenario_id = "x";
  s.target = main.front();
  s.main_attributes = std::move(main);
  s.context_attributes = std::move(context);
  s.collaborative = std::move(collab);
  s.label = derive_label(!s.context_attributes.empty(), s.collaborative.size());
  return s;
}

}  // namespace

TEST_SUITE("windowing") {
  TEST_CASE("assemble a standalone scenario over one source") {
    DataRepository repo;
    repo.add(SourceDataset("M", {"hum"}, {{Date(2016, 1, 1), {1.0}}, {Date(2016, 1, 2), {2.0}}, {Date(2016, 1, 3), {3.0}}}));
    auto t = assemble(repo, spec_with({{"M", "hum"}}, {}, {}));
    CHECK(t.columns.size() == 1);
    CHECK(t.rows() == 3);
    CHECK(t.columns[0].values == std::vector<double>{1, 2, 3});
  }

  TEST_CASE("context covering two of three dates yields two rows") {
    DataRepository repo;
    repo.add(SourceDataset("M", {"hum"}, {{Date(2016, 1, 1), {1.0}}, {Date(2016, 1, 2), {2.0}}, {Date(2016, 1, 3), {3.0}}}));
    repo.add(SourceDataset("C", {"temp"}, {{Date(2016, 1, 1), {10.0}}, {Date(2016, 1, 3), {30.0}}}));
    auto t = assemble(repo, spec_with({{"M", "hum"}}, {{"C", "temp"}}, {}));
    REQUIRE(t.rows() == 2);
    CHECK(t.dates[1] == Date(2016, 1, 3));
    CHECK(t.columns[1].values == std::vector<double>{10, 30});
  }

  TEST_CASE("a missing value in an unselected attribute does not drop the date") {
    DataRepository repo;
    repo.add(SourceDataset("M", {"hum", "wind"},
                           {{Date(2016, 1, 1), {1.0, std::nullopt}}, {Date(2016, 1, 2), {2.0, 5.0}}, {Date(2016, 1, 3), {3.0, 6.0}}}));
    auto t = assemble(repo, spec_with({{"M", "hum"}}, {}, {}));
    CHECK(t.rows() == 3);
  }

  TEST_CASE("the full scenario has five columns in main, context, collaborative order") {
    DataRepository repo;
    std::vector<DatasetRow> rows;
    for (int i = 0; i < 5; ++i) rows.push_back({Date(2016, 1, 1) + i, {1.0 * i, 2.0 * i}});
    repo.add(SourceDataset("Sarmasu", {"hum", "temp"}, rows));
    for (const char* n : {"Reghin", "TMures", "Ludus"}) repo.add(SourceDataset(n, {"hum", "temp"}, rows));
    auto t = assemble(repo, spec_with({{"Sarmasu", "hum"}}, {{"Sarmasu", "temp"}},
                                      {{"Reghin", {{"Reghin", "hum"}}}, {"TMures", {{"TMures", "hum"}}},
                                       {"Ludus", {{"Ludus", "hum"}}}}));
    REQUIRE(t.columns.size() == 5);
    CHECK(t.columns[0].ref.str() == "Sarmasu.hum");
    CHECK(t.columns[1].ref.str() == "Sarmasu.temp");
    CHECK(t.columns[4].ref.str() == "Ludus.hum");
    CHECK(t.target_column == 0);
  }

  TEST_CASE("assemble propagates reference and overlap errors") {
    DataRepository repo;
    repo.add(SourceDataset("M", {"hum"}, {{Date(2016, 1, 1), {1.0}}, {Date(2016, 1, 2), {2.0}}}));
    repo.add(SourceDataset("F", {"hum"}, {{Date(2017, 1, 1), {1.0}}, {Date(2017, 1, 2), {2.0}}}));
    CHECK_THROWS_AS(assemble(repo, spec_with({{"M", "hum"}}, {}, {{"X", {{"X", "hum"}}}})), UnresolvedRefError);
    CHECK_THROWS_AS(assemble(repo, spec_with({{"M", "hum"}}, {}, {{"F", {{"F", "hum"}}}})), NoOverlapError);
  }

  TEST_CASE("lag-1 window over one column") {
    auto wt = window(column_table({{1, 2, 3, 4}}), 1);
    CHECK(wt.X == Matrix::from_rows({{1}, {2}, {3}}));
    CHECK(wt.y == std::vector<double>{2, 3, 4});
    CHECK(wt.feature_names == std::vector<std::string>{"S.a0.lag1"});
    CHECK(wt.example_dates.front() == Date(2016, 1, 2));
  }

  TEST_CASE("features are lag-major") {
    auto wt = window(column_table({{1, 2, 3, 4}, {10, 20, 30, 40}}), 2);
    CHECK(wt.feature_names == std::vector<std::string>{"S.a0.lag1", "S.a1.lag1", "S.a0.lag2", "S.a1.lag2"});
    CHECK(wt.X == Matrix::from_rows({{2, 20, 1, 10}, {3, 30, 2, 20}}));
    CHECK(wt.y == std::vector<double>{3, 4});
    CHECK(wt.source_rows == std::vector<std::size_t>{2, 3});
  }

  TEST_CASE("example count and feature count by enumeration") {
    std::vector<double> a(100);
    std::vector<double> b(100);
    for (int i = 0; i < 100; ++i) {
      a[i] = i;
      b[i] = 1000 + i;
    }
    auto wt = window(column_table({a, b}, 1), 7);
    std::size_t expected = 0;
    for (std::size_t t = 0; t < 100; ++t) expected += t >= 7;
    CHECK(wt.size() == expected);
    CHECK(wt.size() == 93);
    CHECK(wt.X.cols() == 14);
    CHECK(wt.y.front() == 1007);
  }

  TEST_CASE("a window as long as the series is rejected") {
    try {
      window(column_table({{1, 2, 3, 4, 5, 6, 7}}), 7);
      FAIL("expected SeriesTooShortError");
    } catch (const SeriesTooShortError& e) {
      CHECK(e.needed() == 8);
      CHECK(e.have() == 7);
    }
  }

  TEST_CASE("chronological split sizes") {
    auto ten = window(column_table({{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}), 1);
    auto [tr, te] = chronological_split(ten, 0.8);
    CHECK(tr.size() == 8);
    CHECK(te.size() == 2);
    auto five = window(column_table({{0, 1, 2, 3, 4, 5}}), 1);
    auto [tr5, te5] = chronological_split(five, 0.8);
    CHECK(tr5.size() == 4);
    CHECK(te5.size() == 1);
    auto one = window(column_table({{0, 1}}), 1);
    CHECK_THROWS_AS(chronological_split(one, 0.8), SplitError);
    CHECK_THROWS_AS(chronological_split(five, 0.1), SplitError);
  }

  TEST_CASE("no leakage, counts and split boundary over random tables") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 5 + rng.below(60);
      const std::size_t cols = 1 + rng.below(4);
      const std::size_t w = 1 + rng.below(n - 2);
      AssembledTable t;
      Date d(2016, 1, 1);
      for (std::size_t i = 0; i < n; ++i) {
        d = d + static_cast<int>(1 + rng.below(3));
        t.dates.push_back(d);
      }
      for (std::size_t c = 0; c < cols; ++c) {
        AssembledColumn col{{"S", "c" + std::to_string(c)}, {}};
        // Values encode (row, column) so each feature names its source row.
        for (std::size_t i = 0; i < n; ++i) col.values.push_back(static_cast<double>(i * 10 + c));
        t.columns.push_back(std::move(col));
      }
      t.target_column = rng.below(cols);
      auto wt = window(t, w);
      REQUIRE(wt.size() == n - w);
      CHECK(wt.X.cols() == w * cols);
      for (std::size_t e = 0; e < wt.size(); ++e) {
        const std::size_t row = wt.source_rows[e];
        CHECK(wt.example_dates[e] == t.dates[row]);
        CHECK(wt.y[e] == t.columns[t.target_column].values[row]);
        for (std::size_t j = 0; j < wt.X.cols(); ++j) {
          const auto src_row = static_cast<std::size_t>(wt.X(e, j)) / 10;
          CHECK(t.dates[src_row] < wt.example_dates[e]);
          CHECK(src_row == row - (j / cols + 1));
        }
      }
      const double frac = 0.5 + 0.4 * rng.uniform01();
      if (wt.size() >= 2 && static_cast<std::size_t>(frac * static_cast<double>(wt.size())) >= 1 &&
          static_cast<std::size_t>(frac * static_cast<double>(wt.size())) < wt.size()) {
        auto [tr, te] = chronological_split(wt, frac);
        CHECK(tr.size() + te.size() == wt.size());
        CHECK(tr.example_dates.back() < te.example_dates.front());
      }
    }
  }

  TEST_CASE("window over a prefix equals the prefix of the window") {
    std::vector<double> a;
    std::vector<double> b;
    for (int i = 0; i < 40; ++i) {
      a.push_back(i * 1.5);
      b.push_back(100 - i);
    }
    auto full = window(column_table({a, b}), 5);
    auto prefix = window(column_table({std::vector<double>(a.begin(), a.begin() + 20),
                                       std::vector<double>(b.begin(), b.begin() + 20)}),
                         5);
    auto head = full.slice(0, prefix.size());
    CHECK(head.X == prefix.X);
    CHECK(head.y == prefix.y);
    CHECK(head.example_dates == prefix.example_dates);
    CHECK(window(column_table({a, b}), 5).feature_names == full.feature_names);
  }
}
