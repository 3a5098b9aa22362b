#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ccadm/date.hpp"
#include "ccadm/matrix.hpp"
#include "ccadm/scenario.hpp"

namespace ccadm {

class DataRepository;

struct AssembledColumn {
  AttributeRef ref;
  std::vector<double> values;
};

/// A scenario's attributes joined on their common complete dates.
/// No missing values; every column is as long as `dates`.
struct AssembledTable {
  std::vector<Date> dates;
  std::vector<AssembledColumn> columns;
  std::size_t target_column = 0;

  std::size_t rows() const noexcept { return dates.size(); }
};

/// Supervised examples built from an assembled table.
///
/// Feature `j` of an example is column `j % C` at lag `j / C + 1`, where `C`
/// is the number of table columns: all lag-1 values first, then lag 2, and
/// so on. `source_rows[i]` is the table row whose target example `i` predicts.
struct WindowedTable {
  std::vector<std::string> feature_names;
  Matrix X;
  std::vector<double> y;
  std::vector<Date> example_dates;
  std::vector<std::size_t> source_rows;
  std::size_t window = 1;
  std::size_t horizon = 1;

  std::size_t size() const noexcept { return y.size(); }
  /// Examples [begin, end).
  WindowedTable slice(std::size_t begin, std::size_t end) const;
};

/// Joins main, context and collaborative attributes (in that order) on the
/// dates where every selected attribute is present.
AssembledTable assemble(const DataRepository& repo, const ScenarioSpec& spec);

/// One example per row t in [w, n); features are rows t-1 .. t-w. Throws
/// SeriesTooShortError when n <= w.
WindowedTable window(const AssembledTable& table, std::size_t w);

/// First floor(fraction * m) examples train, the rest test. Throws
/// SplitError when either side would be empty.
std::pair<WindowedTable, WindowedTable> chronological_split(const WindowedTable& wt, double train_fraction);

}  // namespace ccadm
