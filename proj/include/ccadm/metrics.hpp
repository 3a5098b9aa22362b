#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ccadm {

class DataRepository;

/// Mean of per-example terms with their population spread.
struct MeasureStats {
  double value = 0.0;
  double stddev = 0.0;
  double variance = 0.0;

  friend bool operator==(const MeasureStats&, const MeasureStats&) = default;
};

struct RelativeErrorStats {
  MeasureStats stats;
  std::size_t n_excluded = 0;
};

enum class Measure { AE, RE, RMSE, Spearman };

std::string_view measure_name(Measure m);
/// Accepts AE, RE, RMSE, SPEARMAN (case-insensitive). Throws MeasureError.
Measure parse_measure(std::string_view name);
/// True for the error measures, where smaller is better.
constexpr bool lower_is_better(Measure m) { return m != Measure::Spearman; }

/// Mean |p - d|.
MeasureStats absolute_error(std::span<const double> pred, std::span<const double> actual);

/// Mean |p - d| / |d| over examples with |d| >= eps. Throws
/// AllExcludedError when no example qualifies.
RelativeErrorStats relative_error(std::span<const double> pred, std::span<const double> actual, double eps = 1e-9);

/// sqrt(mean (p - d)^2). The spread describes the squared-error terms.
MeasureStats rmse(std::span<const double> pred, std::span<const double> actual);

/// Fractional ranks (1-based); ties share the average of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation. Throws UndefinedCorrelationError when either side
/// has zero variance and ShapeError on length mismatch or fewer than 2 points.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of average ranks.
double spearman_rho(std::span<const double> pred, std::span<const double> actual);

struct MetricReport {
  MeasureStats ae;
  MeasureStats re;
  MeasureStats rmse;
  /// nullopt when the ranks of either side are constant.
  std::optional<double> spearman;
  std::size_t n_examples = 0;
  std::size_t n_excluded_re = 0;

  /// Throws MeasureError for Spearman (it has no spread).
  const MeasureStats& stats(Measure m) const;
  /// Headline value; nullopt only for an undefined Spearman coefficient.
  std::optional<double> value(Measure m) const;
  std::size_t n_used(Measure m) const;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

MetricReport evaluate(std::span<const double> pred, std::span<const double> actual, double eps_re = 1e-9);

struct CorrelationMatrix {
  std::vector<std::string> source_ids;
  std::vector<std::vector<double>> entries;
  std::vector<std::vector<std::size_t>> n_common;
};

/// Pairwise Pearson correlations of one attribute across sources, each pair
/// aligned on the dates where both have the attribute. Throws
/// UnresolvedRefError for a missing attribute and NoOverlapError when a pair
/// shares fewer than 2 dates.
CorrelationMatrix pearson_matrix(const DataRepository& repo, const std::string& attribute,
                                 const std::vector<std::string>& source_ids);

}  // namespace ccadm
