#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ccadm/dataset.hpp"
#include "ccadm/errors.hpp"
#include "ccadm/rng.hpp"
#include "../support/synthetic.hpp"

using namespace ccadm;

namespace {

SourceDataset from_text(const std::string& text, const std::string& id = "S", char delim = ',') {
  std::istringstream in(text);
  return read_dataset(in, id, {delim});
}

std::vector<std::string> isos(const std::vector<Date>& dates) {
  std::vector<std::string> out;
  for (const auto& d : dates) out.push_back(d.iso());
  return out;
}

}  // namespace

TEST_SUITE("dataset") {
  TEST_CASE("three rows with two attributes") {
    auto ds = from_text("date,temp,hum\n2016-01-01,1,10\n2016-01-02,2,20\n2016-01-03,3,30\n");
    CHECK(ds.size() == 3);
    CHECK(ds.attribute_names() == std::vector<std::string>{"temp", "hum"});
    CHECK(ds.rows()[2].values[1] == 30.0);
    CHECK(ds.attribute_index("hum") == 1u);
    CHECK_FALSE(ds.has_attribute("wind"));
    CHECK(ds.find(Date(2016, 1, 2)) == 1u);
  }

  TEST_CASE("rows out of order come back sorted") {
    auto ds = from_text("date,hum\n2016-01-03,3\n2016-01-01,1\n2016-01-02,2\n");
    CHECK(ds.rows()[0].date == Date(2016, 1, 1));
    CHECK(ds.rows()[1].date == Date(2016, 1, 2));
    CHECK(ds.rows()[2].date == Date(2016, 1, 3));
    CHECK(ds.rows()[0].values[0] == 1.0);
  }

  TEST_CASE("duplicate date reports the data row of the repeat") {
    try {
      from_text("date,hum\n2016-01-01,1\n2016-01-02,2\n2016-01-02,3\n");
      FAIL("expected DuplicateDateError");
    } catch (const DuplicateDateError& e) {
      CHECK(e.row() == 3);
    }
  }

  TEST_CASE("bad date and bad cell errors carry their row") {
    try {
      from_text("date,hum\n2016-01-01,1\n01/02/2016,2\n");
      FAIL("expected DateFormatError");
    } catch (const DateFormatError& e) {
      CHECK(e.row() == 2);
    }
    try {
      from_text("date,hum,temp\n2016-01-01,1,2\n2016-01-02,2,warm\n");
      FAIL("expected CellParseError");
    } catch (const CellParseError& e) {
      CHECK(e.row() == 2);
      CHECK(e.column() == "temp");
    }
  }

  TEST_CASE("empty cells and question marks are missing") {
    auto ds = from_text("date,a,b\n2016-01-01,,?\n2016-01-02,1,2\n");
    CHECK_FALSE(ds.rows()[0].values[0]);
    CHECK_FALSE(ds.rows()[0].values[1]);
    CHECK(ds.rows()[1].values[1] == 2.0);
  }

  TEST_CASE("configurable delimiter") {
    auto ds = from_text("date;a\n2016-01-01;1.5\n2016-01-02;2.5\n", "S", ';');
    CHECK(ds.rows()[1].values[0] == 2.5);
  }

  TEST_CASE("structural problems are parse errors") {
    CHECK_THROWS_AS(from_text(""), ParseError);
    CHECK_THROWS_AS(from_text("date\n2016-01-01\n2016-01-02\n"), ParseError);
    CHECK_THROWS_AS(from_text("date,a\n2016-01-01,1\n"), ParseError);
    CHECK_THROWS_AS(from_text("date,a\n2016-01-01,1,2\n2016-01-02,1\n"), ParseError);
    CHECK_THROWS_AS(from_text("date,a,a\n2016-01-01,1,2\n2016-01-02,1,2\n"), ParseError);
  }

  TEST_CASE("write then read is the identity, and loading is idempotent") {
    auto repo = testing::correlated_repository({3, 60, 4, 2.5});
    const auto dir = testing::fresh_dir("dataset_roundtrip");
    testing::write_repository(repo, dir);
    for (const auto& id : repo.source_ids()) {
      const auto path = dir / (id + ".csv");
      CHECK(load_dataset(path, id) == repo.get(id));
      CHECK(load_dataset(path, id) == load_dataset(path, id));
    }
    auto with_missing = from_text("date,a,b\n2016-01-01,,1\n2016-01-02,0.1,?\n");
    std::ostringstream out;
    write_dataset(out, with_missing);
    CHECK(from_text(out.str()) == with_missing);
  }

  TEST_CASE("repository loads a directory and keeps a manifest") {
    auto repo = testing::correlated_repository({6, 40, 1, 2.5});
    const auto dir = testing::fresh_dir("dataset_repo");
    testing::write_repository(repo, dir);
    { std::ofstream(dir / "notes.txt") << "ignored"; }
    auto loaded = load_repository(dir);
    CHECK(loaded.size() == 6);
    CHECK(loaded.source_ids() == repo.source_ids());
    REQUIRE(loaded.manifest().size() == 6);
    for (const auto& e : loaded.manifest()) {
      CHECK(e.row_count == loaded.get(e.source_id).size());
      CHECK(e.first_date == Date(2016, 1, 1));
      CHECK(e.last_date == Date(2016, 2, 9));
    }
    CHECK_THROWS_AS(loaded.get("nope"), UnresolvedRefError);
    CHECK_THROWS_AS(loaded.add(repo.get("S1")), ConfigError);
    CHECK_THROWS_AS(load_repository(dir / "missing"), IoError);
  }

  TEST_CASE("common date index examples") {
    auto one = from_text("date,a\n2016-01-01,1\n2016-01-02,2\n2016-01-03,3\n2016-01-04,4\n2016-01-05,5\n", "A");
    const SourceDataset* single[] = {&one};
    CHECK(common_date_index(single).size() == 5);

    auto a = from_text("date,v\n2016-01-01,1\n2016-01-02,2\n2016-01-03,3\n", "A");
    auto b = from_text("date,v\n2016-01-02,1\n2016-01-03,2\n2016-01-04,3\n", "B");
    const SourceDataset* pair[] = {&a, &b};
    CHECK(isos(common_date_index(pair)) == std::vector<std::string>{"2016-01-02", "2016-01-03"});

    auto c = from_text("date,v,w\n2016-01-02,1,1\n2016-01-03,2,\n2016-01-04,3,3\n", "C");
    const SourceDataset* with_gap[] = {&a, &c};
    CHECK(isos(common_date_index(with_gap)) == std::vector<std::string>{"2016-01-02"});

    // Only the selected attribute needs to be complete.
    const DatasetSelection sel[] = {{&a, {}}, {&c, {"v"}}};
    CHECK(common_date_index(sel).size() == 2);
  }

  TEST_CASE("disjoint datasets raise NoOverlapError naming their spans") {
    auto a = from_text("date,v\n2016-01-01,1\n2016-01-02,2\n", "A");
    auto b = from_text("date,v\n2017-01-01,1\n2017-01-02,2\n", "B");
    const SourceDataset* pair[] = {&a, &b};
    try {
      common_date_index(pair);
      FAIL("expected NoOverlapError");
    } catch (const NoOverlapError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("2016-01-01") != std::string::npos);
      CHECK(msg.find("2017-01-02") != std::string::npos);
    }
  }

  TEST_CASE("adding a dataset can only shrink the common index") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<SourceDataset> sets;
      for (int s = 0; s < 3; ++s) {
        std::vector<DatasetRow> rows;
        for (int d = 0; d < 30; ++d) {
          if (rng.uniform01() < 0.2) continue;
          std::optional<double> v;
          if (rng.uniform01() < 0.9) v = rng.uniform01();
          rows.push_back({Date(2016, 1, 1) + d, {v}});
        }
        if (rows.size() < 2) rows = {{Date(2016, 1, 1), {1.0}}, {Date(2016, 1, 2), {1.0}}};
        sets.emplace_back("D" + std::to_string(s), std::vector<std::string>{"v"}, rows);
      }
      const SourceDataset* first[] = {&sets[0], &sets[1]};
      const SourceDataset* all[] = {&sets[0], &sets[1], &sets[2]};
      std::vector<Date> small;
      try {
        small = common_date_index(all);
      } catch (const NoOverlapError&) {
      }
      std::vector<Date> big;
      try {
        big = common_date_index(first);
      } catch (const NoOverlapError&) {
        CHECK(small.empty());
        continue;
      }
      CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
    }
  }
}
