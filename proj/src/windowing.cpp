#include "ccadm/windowing.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

#include "ccadm/dataset.hpp"
#include "ccadm/errors.hpp"

namespace ccadm {

WindowedTable WindowedTable::slice(std::size_t begin, std::size_t end) const {
  WindowedTable out;
  out.feature_names = feature_names;
  out.X = X.slice_rows(begin, end);
  out.y.assign(y.begin() + static_cast<std::ptrdiff_t>(begin), y.begin() + static_cast<std::ptrdiff_t>(end));
  out.example_dates.assign(example_dates.begin() + static_cast<std::ptrdiff_t>(begin),
                           example_dates.begin() + static_cast<std::ptrdiff_t>(end));
  out.source_rows.assign(source_rows.begin() + static_cast<std::ptrdiff_t>(begin),
                         source_rows.begin() + static_cast<std::ptrdiff_t>(end));
  out.window = window;
  out.horizon = horizon;
  return out;
}

AssembledTable assemble(const DataRepository& repo, const ScenarioSpec& spec) {
  spec.resolve(repo);
  const auto refs = spec.all_attributes();

  // Group the selected attributes per source, keeping first-use order.
  std::vector<DatasetSelection> selections;
  std::map<std::string, std::size_t> slot;
  for (const auto& ref : refs) {
    auto [it, inserted] = slot.emplace(ref.source_id, selections.size());
    if (inserted) selections.push_back({&repo.get(ref.source_id), {}});
    selections[it->second].attributes.push_back(ref.attribute);
  }

  AssembledTable table;
  table.dates = common_date_index(std::span<const DatasetSelection>(selections));
  table.columns.reserve(refs.size());
  for (std::size_t c = 0; c < refs.size(); ++c) {
    const auto& ds = repo.get(refs[c].source_id);
    const std::size_t attr = *ds.attribute_index(refs[c].attribute);
    AssembledColumn col{refs[c], {}};
    col.values.reserve(table.dates.size());
    for (const auto& d : table.dates) col.values.push_back(*ds.rows()[*ds.find(d)].values[attr]);
    table.columns.push_back(std::move(col));
    if (refs[c] == spec.target) table.target_column = c;
  }
  return table;
}

WindowedTable window(const AssembledTable& table, std::size_t w) {
  if (w < 1) throw ConfigError("window must be at least 1");
  const std::size_t n = table.rows();
  if (n <= w)
    throw SeriesTooShortError(w + 1, n,
                              fmt::format("series too short for window {}: needed {} rows, have {}", w, w + 1, n));
  const std::size_t ncols = table.columns.size();
  WindowedTable out;
  out.window = w;
  out.horizon = 1;
  out.feature_names.reserve(w * ncols);
  for (std::size_t lag = 1; lag <= w; ++lag) {
    for (const auto& col : table.columns) out.feature_names.push_back(fmt::format("{}.lag{}", col.ref.str(), lag));
  }
  const std::size_t m = n - w;
  out.X = Matrix(m, w * ncols);
  out.y.reserve(m);
  out.example_dates.reserve(m);
  out.source_rows.reserve(m);
  const auto& target = table.columns[table.target_column].values;
  for (std::size_t t = w; t < n; ++t) {
    const std::size_t i = t - w;
    auto row = out.X.row(i);
    for (std::size_t lag = 1; lag <= w; ++lag) {
      for (std::size_t c = 0; c < ncols; ++c) row[(lag - 1) * ncols + c] = table.columns[c].values[t - lag];
    }
    out.y.push_back(target[t]);
    out.example_dates.push_back(table.dates[t]);
    out.source_rows.push_back(t);
  }
  return out;
}

std::pair<WindowedTable, WindowedTable> chronological_split(const WindowedTable& wt, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw SplitError(fmt::format("train fraction {} is outside (0, 1)", train_fraction));
  const std::size_t m = wt.size();
  // The small slack keeps e.g. 0.57 * 100 from flooring to 56.
  const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(m) + 1e-9));
  if (m < 2 || n_train == 0 || n_train >= m)
    throw SplitError(fmt::format("splitting {} examples at {} leaves an empty side", m, train_fraction));
  return {wt.slice(0, n_train), wt.slice(n_train, m)};
}

}  // namespace ccadm
