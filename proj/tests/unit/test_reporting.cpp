#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ccadm/errors.hpp"
#include "ccadm/reporting.hpp"
#include "ccadm/text.hpp"
#include "../support/oracles.hpp"
#include "../support/synthetic.hpp"

using namespace ccadm;
namespace fs = std::filesystem;

namespace {

EvaluationRecord cell(const std::string& scenario, const std::string& label, const std::string& location,
                      const std::string& algorithm, const std::vector<double>& pred,
                      const std::vector<double>& actual) {
  EvaluationRecord r;
  r.scenario_id = scenario;
  r.label = ScenarioLabel::parse(label);
  r.location = location;
  r.algorithm = algorithm;
  r.params = {{"k", "5"}};
  r.seed = 3;
  r.train_size = 10;
  for (std::size_t i = 0; i < pred.size(); ++i)
    r.predictions.push_back({Date(2017, 1, 1) + static_cast<int>(i), actual[i], pred[i]});
  r.metrics = evaluate(pred, actual);
  return r;
}

EvaluationRecord failed(const std::string& scenario, const std::string& algorithm) {
  EvaluationRecord r;
  r.scenario_id = scenario;
  r.label = ScenarioLabel::parse("CDM(1)");
  r.location = "A";
  r.algorithm = algorithm;
  r.failure = CellFailure{"UnresolvedRefError", "unknown source 'Z'"};
  return r;
}

const std::vector<EvaluationRecord>& grid_records() {
  static const auto recs = [] {
    auto cfg = RunConfig::from_suite(generate_presets({"S1", "hum", "temp", {"S2", "S3", "S4"}, "hum"}));
    cfg.seed = 1;
    return run_suite(testing::correlated_repository({4, 260, 3, 2.5}), cfg);
  }();
  return recs;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = testing::slurp(e.path());
  }
  return out;
}

}  // namespace

TEST_SUITE("reporting") {
  TEST_CASE("file stems replace unsafe characters") {
    CHECK(CellKey{"S1-cadm", "S1", "KNN"}.file_stem() == "S1-cadm__S1__KNN");
    CHECK(CellKey{"a b/c", "x", "DL"}.file_stem() == "a_b_c__x__DL");
  }

  TEST_CASE("store rejects duplicate keys and finds cells") {
    const auto a = cell("s", "Standalone", "A", "KNN", {1, 2}, {1, 3});
    CHECK_THROWS_AS(ResultStore({a, a}), ConfigError);
    ResultStore store({a});
    CHECK(store.find({"s", "A", "KNN"}) != nullptr);
    CHECK(store.find({"s", "A", "DT"}) == nullptr);
    CHECK_THROWS_AS(store.at({"t", "A", "KNN"}), CellNotFoundError);
  }

  TEST_CASE("summary examples") {
    ResultStore one({cell("s", "Standalone", "A", "KNN", {9}, {10})});
    auto t = summarize(one, GroupBy::Algorithm, Measure::RE);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].rank == 1);

    ResultStore two({cell("s1", "Standalone", "A", "KNN", {8}, {10}), cell("s2", "CADM", "A", "KNN", {9}, {10})});
    auto s = summarize(two, GroupBy::Scenario, Measure::RE);
    REQUIRE(s.rows.size() == 2);
    CHECK(s.rows[0].key == "s2");
    CHECK(s.rows[0].rank == 1);
    CHECK(*s.rows[0].value == doctest::Approx(0.1));
    CHECK(s.rows[1].key == "s1");
    CHECK(s.rows[1].rank == 2);
    CHECK(summarize(two, GroupBy::Scenario, Measure::Spearman).rows.size() == 2);
    CHECK_THROWS_AS(summarize(ResultStore({}), GroupBy::Algorithm, Measure::RE), ConfigError);
  }

  TEST_CASE("grouped means equal hand averages and keys are a permutation") {
    ResultStore store(grid_records());
    for (auto m : {Measure::AE, Measure::RE, Measure::RMSE, Measure::Spearman}) {
      const auto t = summarize(store, GroupBy::Algorithm, m);
      REQUIRE(t.rows.size() == 4);
      std::set<std::string> keys;
      for (const auto& row : t.rows) {
        keys.insert(row.key);
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& r : store.records()) {
          if (r.algorithm != row.key) continue;
          sum += r.metrics.value(m).value();
          ++n;
        }
        CHECK(n == 6);
        CHECK(row.members == 6);
        CHECK(std::abs(*row.value - sum / 6.0) <= 1e-12);
      }
      CHECK(keys == std::set<std::string>{"KNN", "DT", "GBT", "DL"});
      for (std::size_t i = 1; i < t.rows.size(); ++i) {
        if (m == Measure::Spearman) {
          CHECK(*t.rows[i - 1].value >= *t.rows[i].value);
        } else {
          CHECK(*t.rows[i - 1].value <= *t.rows[i].value);
        }
        CHECK(t.rows[i].rank >= t.rows[i - 1].rank);
      }
    }
    CHECK(summarize(store, GroupBy::Label, Measure::RMSE).rows.size() == 6);
    CHECK(summarize(store, GroupBy::Location, Measure::RMSE).rows.size() == 1);
  }

  TEST_CASE("equal means share a dense rank and failed cells are skipped") {
    ResultStore store({cell("a", "Standalone", "A", "KNN", {9}, {10}), cell("a", "Standalone", "A", "DT", {11}, {10}),
                       cell("a", "Standalone", "A", "GBT", {8}, {10}), failed("b", "KNN")});
    const auto t = summarize(store, GroupBy::Algorithm, Measure::AE);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0].rank == 1);
    CHECK(t.rows[1].rank == 1);
    CHECK(t.rows[2].rank == 2);
    CHECK(t.rows[0].key == "KNN");
    CHECK(t.rows[0].members == 1);
  }

  TEST_CASE("spearman table flags maxima and marks undefined cells") {
    ResultStore store({cell("s", "Standalone", "A", "KNN", {1, 2, 3}, {1, 2, 3}),
                       cell("c", "CADM", "A", "KNN", {3, 1, 2}, {1, 2, 3}),
                       cell("s", "Standalone", "A", "DT", {5, 5, 5}, {1, 2, 3}),
                       cell("c", "CADM", "A", "DT", {1, 3, 2}, {1, 2, 3})});
    const auto t = spearman_table(store);
    CHECK(t.scenarios == std::vector<std::string>{"Standalone", "CADM"});
    CHECK(t.algorithms == std::vector<std::string>{"KNN", "DT"});
    CHECK(*t.cells[0][0].rho == doctest::Approx(1.0));
    CHECK(t.cells[0][0].best);
    CHECK_FALSE(t.cells[1][0].best);
    CHECK_FALSE(t.cells[0][1].rho.has_value());
    CHECK_FALSE(t.cells[0][1].best);
    CHECK(t.cells[1][1].best);
    std::ostringstream out;
    write_spearman(out, t);
    CHECK(out.str().find("Standalone,DT,undefined,0,1") != std::string::npos);
  }

  TEST_CASE("spearman table over the grid has 24 cells matching recomputation") {
    ResultStore store(grid_records());
    const auto t = spearman_table(store);
    REQUIRE(t.scenarios.size() == 6);
    REQUIRE(t.algorithms.size() == 4);
    for (const auto& r : store.records()) {
      std::vector<double> p;
      std::vector<double> a;
      for (const auto& pt : r.predictions) {
        p.push_back(pt.predicted);
        a.push_back(pt.actual);
      }
      const auto row = std::find(t.scenarios.begin(), t.scenarios.end(), r.label.str()) - t.scenarios.begin();
      const auto col = std::find(t.algorithms.begin(), t.algorithms.end(), r.algorithm) - t.algorithms.begin();
      const auto& c = t.cells[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
      CHECK(std::abs(*c.rho - *oracle::spearman(p, a)) <= 1e-10);
      CHECK(c.cells == 1);
    }
  }

  TEST_CASE("series output") {
    ResultStore store({cell("s", "Standalone", "A", "KNN", {1, 2.5}, {1, 2}), failed("b", "KNN")});
    std::ostringstream out;
    emit_series(store, {"s", "A", "KNN"}, out);
    CHECK(out.str() == "date,actual,predicted,deviation\n2017-01-01,1,1,0\n2017-01-02,2,2.5,0.5\n");
    CHECK_THROWS_AS(emit_series(store, {"b", "A", "KNN"}, out), CellNotFoundError);
    CHECK_THROWS_AS(emit_series(store, {"x", "A", "KNN"}, out), CellNotFoundError);
  }

  TEST_CASE("dispersion correlation examples") {
    // Errors c*sqrt(1+s) and c*sqrt(1-s) give RMSE c and squared-error stddev
    // c*c*s. With s = 0.5/c every cell has stddev = RMSE / 2.
    std::vector<EvaluationRecord> line;
    const char* labels[] = {"Standalone", "CADM", "CDM(1)"};
    const double scales[] = {1.0, 2.0, 4.0};
    for (int i = 0; i < 3; ++i) {
      const double c = scales[i];
      const double s = 0.5 / c;
      line.push_back(
          cell(labels[i], labels[i], "A", "KNN", {10 + c * std::sqrt(1 + s), 10 + c * std::sqrt(1 - s)}, {10, 10}));
    }
    for (const auto& r : line) CHECK(r.metrics.rmse.stddev == doctest::Approx(r.metrics.rmse.value / 2).epsilon(1e-12));
    CHECK(error_dispersion_correlation(ResultStore(line)) == doctest::Approx(1.0).epsilon(1e-12));

    ResultStore two({cell("a", "Standalone", "A", "KNN", {1, 3}, {2, 2}), cell("b", "CADM", "A", "KNN", {0, 5}, {2, 2})});
    CHECK(std::abs(std::abs(error_dispersion_correlation(two)) - 1.0) <= 1e-12);
    ResultStore flat({cell("a", "Standalone", "A", "KNN", {1, 3}, {2, 2}), cell("b", "CADM", "A", "KNN", {3, 1}, {2, 2})});
    CHECK_THROWS_AS(error_dispersion_correlation(flat), UndefinedCorrelationError);
    CHECK_THROWS_AS(error_dispersion_correlation(ResultStore({cell("a", "Standalone", "A", "KNN", {1, 3}, {2, 2})})),
                    ShapeError);
  }

  TEST_CASE("write then load gives the same store, and re-writing is byte-identical") {
    auto recs = grid_records();
    recs.push_back(failed("broken", "KNN"));
    ResultStore store(recs, "{\"seed\": 1}\n");
    const auto dir = testing::fresh_dir("reporting_roundtrip");
    write_results(store, dir / "a");
    write_reports(store, dir / "a", ReportKind::All);
    const auto loaded = load_results(dir / "a");
    REQUIRE(loaded.records().size() == store.records().size());
    CHECK(loaded.config_snapshot() == store.config_snapshot());
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto& x = store.records()[i];
      const auto& y = loaded.records()[i];
      CHECK(key_of(x) == key_of(y));
      CHECK(x.label == y.label);
      CHECK(x.params == y.params);
      CHECK(x.seed == y.seed);
      CHECK(x.ok() == y.ok());
      if (!x.ok()) {
        CHECK(y.failure->kind == x.failure->kind);
        continue;
      }
      CHECK(x.predictions == y.predictions);
      CHECK(x.metrics.ae == y.metrics.ae);
      CHECK(x.metrics.re == y.metrics.re);
      CHECK(x.metrics.rmse == y.metrics.rmse);
      CHECK(x.metrics.spearman == y.metrics.spearman);
      CHECK(x.train_size == y.train_size);
    }
    write_results(loaded, dir / "b");
    write_reports(loaded, dir / "b", ReportKind::All);
    CHECK(read_tree(dir / "a") == read_tree(dir / "b"));
    CHECK(fs::exists(dir / "a" / "reports" / "spearman.csv"));
    CHECK(fs::exists(dir / "a" / "reports" / "dispersion.csv"));
    CHECK(fs::exists(dir / "a" / "reports" / "summary_algorithm_RE.csv"));
  }

  TEST_CASE("a reloaded series reproduces the cell metrics") {
    ResultStore store(grid_records());
    const auto& rec = store.records()[9];
    std::ostringstream out;
    emit_series(store, key_of(rec), out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    std::vector<double> p;
    std::vector<double> a;
    while (std::getline(in, line)) {
      const auto f = text::split(line, ',');
      a.push_back(*text::parse_real(f[1]));
      p.push_back(*text::parse_real(f[2]));
    }
    const auto again = evaluate(p, a);
    CHECK(again.rmse == rec.metrics.rmse);
    CHECK(again.re == rec.metrics.re);
  }

  TEST_CASE("loading a directory without an index fails") {
    const auto dir = testing::fresh_dir("reporting_empty");
    CHECK_THROWS_AS(load_results(dir), IoError);
    CHECK(parse_report_kind("all") == ReportKind::All);
    CHECK_THROWS_AS(parse_report_kind("plots"), ConfigError);
  }
}
