#include "ccadm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "ccadm/dataset.hpp"
#include "ccadm/errors.hpp"
#include "ccadm/text.hpp"

namespace ccadm {

std::string_view measure_name(Measure m) {
  switch (m) {
    case Measure::AE:
      return "AE";
    case Measure::RE:
      return "RE";
    case Measure::RMSE:
      return "RMSE";
    case Measure::Spearman:
      return "SPEARMAN";
  }
  return {};
}

Measure parse_measure(std::string_view name) {
  for (auto m : {Measure::AE, Measure::RE, Measure::RMSE, Measure::Spearman}) {
    if (text::iequals(name, measure_name(m))) return m;
  }
  throw MeasureError(fmt::format("unknown measure '{}' (expected AE, RE, RMSE or SPEARMAN)", name));
}

namespace {

void check_pair(std::span<const double> pred, std::span<const double> actual) {
  if (pred.size() != actual.size())
    throw ShapeError(fmt::format("prediction length {} differs from actual length {}", pred.size(), actual.size()));
  if (pred.empty()) throw ShapeError("metrics need at least one example");
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!std::isfinite(pred[i]) || !std::isfinite(actual[i]))
      throw NonFiniteDataError(fmt::format("non-finite value at example {}", i));
  }
}

MeasureStats population_stats(const std::vector<double>& terms) {
  const double n = static_cast<double>(terms.size());
  const double mean = std::accumulate(terms.begin(), terms.end(), 0.0) / n;
  double ss = 0.0;
  for (double t : terms) ss += (t - mean) * (t - mean);
  const double variance = ss / n;
  const double stddev = std::sqrt(variance);
  // Reported variance is the square of the reported stddev, so the two
  // can never disagree beyond rounding of one multiplication.
  return {mean, stddev, stddev * stddev};
}

}  // namespace

MeasureStats absolute_error(std::span<const double> pred, std::span<const double> actual) {
  check_pair(pred, actual);
  std::vector<double> terms(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) terms[i] = std::abs(pred[i] - actual[i]);
  return population_stats(terms);
}

RelativeErrorStats relative_error(std::span<const double> pred, std::span<const double> actual, double eps) {
  check_pair(pred, actual);
  if (!(eps > 0.0)) throw ConfigError("relative error epsilon must be positive");
  std::vector<double> terms;
  terms.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (std::abs(actual[i]) >= eps) terms.push_back(std::abs(pred[i] - actual[i]) / std::abs(actual[i]));
  }
  if (terms.empty())
    throw AllExcludedError(fmt::format("all {} actual values are below {} in magnitude", pred.size(), eps));
  return {population_stats(terms), pred.size() - terms.size()};
}

MeasureStats rmse(std::span<const double> pred, std::span<const double> actual) {
  check_pair(pred, actual);
  std::vector<double> terms(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) terms[i] = (pred[i] - actual[i]) * (pred[i] - actual[i]);
  auto s = population_stats(terms);
  s.value = std::sqrt(s.value);
  return s;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share rank mean((i+1)..(j+1))
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("pearson: length mismatch");
  if (x.size() < 2) throw ShapeError("pearson: need at least 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelationError("correlation undefined: a side has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman_rho(std::span<const double> pred, std::span<const double> actual) {
  if (pred.size() != actual.size()) throw ShapeError("spearman: length mismatch");
  if (pred.size() < 2) throw ShapeError("spearman: need at least 2 points");
  const auto rp = average_ranks(pred);
  const auto ra = average_ranks(actual);
  return pearson(rp, ra);
}

const MeasureStats& MetricReport::stats(Measure m) const {
  switch (m) {
    case Measure::AE:
      return ae;
    case Measure::RE:
      return re;
    case Measure::RMSE:
      return rmse;
    case Measure::Spearman:
      break;
  }
  throw MeasureError("Spearman rho has no spread statistics");
}

std::optional<double> MetricReport::value(Measure m) const {
  if (m == Measure::Spearman) return spearman;
  return stats(m).value;
}

std::size_t MetricReport::n_used(Measure m) const {
  return m == Measure::RE ? n_examples - n_excluded_re : n_examples;
}

MetricReport evaluate(std::span<const double> pred, std::span<const double> actual, double eps_re) {
  MetricReport r;
  r.ae = absolute_error(pred, actual);
  auto re = relative_error(pred, actual, eps_re);
  r.re = re.stats;
  r.n_excluded_re = re.n_excluded;
  r.rmse = ccadm::rmse(pred, actual);
  r.n_examples = pred.size();
  if (pred.size() >= 2) {
    try {
      r.spearman = spearman_rho(pred, actual);
    } catch (const UndefinedCorrelationError&) {
      r.spearman = std::nullopt;
    }
  }
  return r;
}

CorrelationMatrix pearson_matrix(const DataRepository& repo, const std::string& attribute,
                                 const std::vector<std::string>& source_ids) {
  struct Series {
    std::vector<Date> dates;
    std::vector<double> values;
  };
  std::vector<Series> series;
  for (const auto& id : source_ids) {
    const auto& ds = repo.get(id);
    auto idx = ds.attribute_index(attribute);
    if (!idx) throw UnresolvedRefError(fmt::format("source '{}' has no attribute '{}'", id, attribute));
    Series s;
    for (const auto& row : ds.rows()) {
      if (row.values[*idx]) {
        s.dates.push_back(row.date);
        s.values.push_back(*row.values[*idx]);
      }
    }
    series.push_back(std::move(s));
  }

  const std::size_t k = source_ids.size();
  CorrelationMatrix m{source_ids, std::vector<std::vector<double>>(k, std::vector<double>(k, 1.0)),
                      std::vector<std::vector<std::size_t>>(k, std::vector<std::size_t>(k, 0))};
  for (std::size_t i = 0; i < k; ++i) {
    m.n_common[i][i] = series[i].dates.size();
    for (std::size_t j = i + 1; j < k; ++j) {
      std::vector<double> a;
      std::vector<double> b;
      std::size_t p = 0;
      std::size_t q = 0;
      while (p < series[i].dates.size() && q < series[j].dates.size()) {
        if (series[i].dates[p] < series[j].dates[q]) {
          ++p;
        } else if (series[j].dates[q] < series[i].dates[p]) {
          ++q;
        } else {
          a.push_back(series[i].values[p++]);
          b.push_back(series[j].values[q++]);
        }
      }
      if (a.size() < 2)
        throw NoOverlapError(fmt::format("sources '{}' and '{}' share {} dates with '{}'; need at least 2",
                                         source_ids[i], source_ids[j], a.size(), attribute));
      const double r = pearson(a, b);
      m.entries[i][j] = r;
      m.entries[j][i] = r;
      m.n_common[i][j] = a.size();
      m.n_common[j][i] = a.size();
    }
  }
  return m;
}

}  // namespace ccadm
